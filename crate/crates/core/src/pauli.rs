// SPDX-License-Identifier: Apache-2.0
//! Signed Pauli strings, graph-state stabilizers and the correction
//! stabilizers of the universal YZ unit cell.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Axis, Graph, Node, OpenGraph};

/// `i^phase · ⊗ letters`; identity positions are omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct PauliString {
    pub letters: BTreeMap<Node, Axis>,
    pub phase: u8,
}

/// `a · b = i^k c` for single letters.
fn letter_product(a: Axis, b: Axis) -> (Option<Axis>, u8) {
    if a == b {
        return (None, 0);
    }
    let c = Axis::from_index(3 - a.index() - b.index());
    let cyclic = (b.index() + 3 - a.index()) % 3 == 1;
    (Some(c), if cyclic { 1 } else { 3 })
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn single(v: Node, a: Axis) -> Self {
        PauliString {
            letters: [(v, a)].into(),
            phase: 0,
        }
    }

    pub fn from_letters(letters: impl IntoIterator<Item = (Node, Axis)>) -> Self {
        let mut p = Self::identity();
        for (v, a) in letters {
            p = p.multiply(&Self::single(v, a));
        }
        p
    }

    pub fn get(&self, v: Node) -> Option<Axis> {
        self.letters.get(&v).copied()
    }

    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    pub fn multiply(&self, other: &PauliString) -> PauliString {
        let mut letters = self.letters.clone();
        let mut phase = (self.phase + other.phase) % 4;
        for (&v, &b) in &other.letters {
            match letters.get(&v).copied() {
                None => {
                    letters.insert(v, b);
                }
                Some(a) => {
                    let (c, k) = letter_product(a, b);
                    phase = (phase + k) % 4;
                    match c {
                        Some(c) => letters.insert(v, c),
                        None => letters.remove(&v),
                    };
                }
            }
        }
        PauliString { letters, phase }
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .letters
            .iter()
            .filter(|(v, a)| other.get(**v).is_some_and(|b| b != **a))
            .count();
        anti % 2 == 0
    }

    /// Letters only, phase dropped.
    pub fn same_letters(&self, other: &PauliString) -> bool {
        self.letters == other.letters
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = ["", "i", "-", "-i"][self.phase as usize];
        if self.letters.is_empty() {
            return write!(f, "{sign}I");
        }
        write!(f, "{sign}")?;
        let parts: Vec<String> = self.letters.iter().map(|(v, a)| format!("{a:?}{v}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// `K_u = X_u ∏_{w ∈ N(u)} Z_w` on a bare graph, no input check.
pub fn graph_stabilizer(g: &Graph, u: Node) -> Result<PauliString> {
    let mut p = PauliString::single(u, Axis::X);
    for &w in g.try_neighbors(u)? {
        p.letters.insert(w, Axis::Z);
    }
    Ok(p)
}

pub fn elementary_stabilizer(og: &OpenGraph, u: Node) -> Result<PauliString> {
    if og.inputs.contains(&u) {
        return Err(Error::InputNode(u));
    }
    graph_stabilizer(&og.graph, u)
}

/// A unit cell together with the `q5` and `q6` of the cell to its north.
#[derive(Clone, Debug)]
pub struct CellContext {
    pub open: OpenGraph,
    pub q: [Node; 7],
    pub north: Option<(Node, Node)>,
}

impl CellContext {
    /// Ids `1..=7` are `q1..q7`; the north cell's `q5` and `q6` are 8 and 9.
    pub fn new(with_north: bool) -> Self {
        let mut edges = vec![(1, 3), (2, 3), (3, 6), (4, 6), (5, 6), (5, 7)];
        let mut nodes: Vec<Node> = (1..=7).collect();
        if with_north {
            nodes.extend([8, 9]);
            edges.extend([(8, 6), (8, 9)]);
        }
        let g = Graph::from_edges(&nodes, &edges).expect("fixed cell");
        let open = OpenGraph::new(g, [1, 7].into(), [6, 7].into()).expect("fixed cell");
        CellContext {
            open,
            q: [1, 2, 3, 4, 5, 6, 7],
            north: with_north.then_some((8, 9)),
        }
    }

    pub fn name(&self, v: Node) -> String {
        match v {
            8 if self.north.is_some() => "5'".into(),
            9 if self.north.is_some() => "6'".into(),
            _ => v.to_string(),
        }
    }

    pub fn k(&self, v: Node) -> PauliString {
        graph_stabilizer(&self.open.graph, v).expect("cell node")
    }

    /// Pauli measurements of the cell: `q1`, `q3` in `Y`, `q4`, `q5`, `5'`
    /// as given.
    pub fn pauli_bases(&self, b4: Axis, b5: Axis, b5p: Option<Axis>) -> BTreeMap<Node, Axis> {
        let mut m: BTreeMap<Node, Axis> = [(1, Axis::Y), (3, Axis::Y), (4, b4), (5, b5)].into();
        if let (Some((n5, _)), Some(b)) = (self.north, b5p) {
            m.insert(n5, b);
        }
        m
    }

    /// Renders letters with the cell's names, e.g. `Y4 Y5 Y5' Y6 Z3 Z6' Z7`,
    /// sorted by letter then name.
    pub fn render(&self, p: &PauliString) -> String {
        let mut parts: Vec<(usize, String)> =
            p.letters.iter().map(|(&v, &a)| (a.index(), format!("{a:?}{}", self.name(v)))).collect();
        parts.sort();
        parts.into_iter().map(|(_, s)| s).collect::<Vec<_>>().join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrectionRule {
    pub target: Node,
    /// Product of these elementary stabilizers.
    pub factors: Vec<Node>,
    pub stabilizer: PauliString,
    pub depends_on: Vec<Node>,
    /// Rotated-plane qubits whose angle sign the rule flips.
    pub flips_angle_of: Vec<Node>,
}

fn product(ctx: &CellContext, factors: &[Node]) -> PauliString {
    factors
        .iter()
        .fold(PauliString::identity(), |acc, &v| acc.multiply(&ctx.k(v)))
}

/// `Q3` for the given bases of `q4`, `q5` and the north `q5`; `None` for
/// `b5p` means the cell sits on the northern border.
pub fn unit_cell_correction_table(b4: Axis, b5: Axis, b5p: Option<Axis>) -> Result<CorrectionRule> {
    for b in [Some(b4), Some(b5), b5p].into_iter().flatten() {
        if b == Axis::X {
            return Err(Error::Precondition("cell qubits 4, 5 and 5' are measured in Y or Z".into()));
        }
    }
    if b4 == Axis::Z && b5 == Axis::Y {
        return Err(Error::Precondition(format!(
            "basis combination (Z, Y, {}) is not supported",
            b5p.map_or("-".into(), |b| format!("{b:?}"))
        )));
    }
    let ctx = CellContext::new(b5p.is_some());
    let mut factors = Vec::new();
    if b4 == Axis::Y {
        factors.push(4);
    }
    if b5 == Axis::Y {
        factors.push(5);
    }
    if b5p == Some(Axis::Y) {
        factors.push(8);
    }
    factors.push(6);
    Ok(CorrectionRule {
        target: 3,
        stabilizer: product(&ctx, &factors),
        factors,
        depends_on: vec![3],
        flips_angle_of: Vec::new(),
    })
}

/// `Q1..Q5` of one cell. `q2` is the only rotated measurement; a rule whose
/// letter on `q2` is `Z` or `Y` flips its angle.
pub fn unit_cell_corrections(
    ctx: &CellContext,
    b4: Axis,
    b5: Axis,
    b5p: Option<Axis>,
) -> Result<BTreeMap<Node, CorrectionRule>> {
    if ctx.north.is_some() != b5p.is_some() {
        return Err(Error::Precondition("north basis given iff the cell has a north neighbor".into()));
    }
    let q3 = unit_cell_correction_table(b4, b5, b5p)?;
    let mut out = BTreeMap::new();
    let mut add = |target: Node, factors: Vec<Node>| {
        let stabilizer = product(ctx, &factors);
        let flips = match stabilizer.get(2) {
            Some(Axis::Y | Axis::Z) if target != 2 => vec![2],
            _ => vec![],
        };
        out.insert(
            target,
            CorrectionRule {
                target,
                factors,
                stabilizer,
                depends_on: vec![target],
                flips_angle_of: flips,
            },
        );
    };
    let mut q1 = vec![3];
    q1.extend(&q3.factors);
    add(1, q1);
    let mut q2 = vec![2];
    q2.extend(&q3.factors);
    add(2, q2);
    add(3, q3.factors.clone());
    add(4, vec![4]);
    add(5, vec![5]);
    Ok(out)
}

/// Measured qubits of the cell whose letter in `rule` differs from their
/// measurement axis, other than the target. Outputs and the rotated `q2` are
/// not measured in a Pauli basis and are skipped.
pub fn restriction_mismatches(rule: &CorrectionRule, bases: &BTreeMap<Node, Axis>) -> Vec<Node> {
    rule.stabilizer
        .letters
        .iter()
        .filter(|(v, a)| **v != rule.target && bases.get(v).is_some_and(|b| b != *a))
        .map(|(v, _)| *v)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_letter_products() {
        let x = PauliString::single(0, Axis::X);
        let y = PauliString::single(0, Axis::Y);
        assert_eq!(x.multiply(&x), PauliString::identity());
        let xy = x.multiply(&y);
        assert_eq!((xy.get(0), xy.phase), (Some(Axis::Z), 1));
        let yx = y.multiply(&x);
        assert_eq!((yx.get(0), yx.phase), (Some(Axis::Z), 3));
    }

    #[test]
    fn path_stabilizer() {
        let g = Graph::from_edges(&[1, 2, 3], &[(1, 2), (2, 3)]).unwrap();
        let og = OpenGraph::new(g, [1].into(), [3].into()).unwrap();
        let k = elementary_stabilizer(&og, 2).unwrap();
        assert_eq!(k.to_string(), "Z1 X2 Z3");
        assert_eq!(elementary_stabilizer(&og, 1), Err(Error::InputNode(1)));
    }

    #[test]
    fn table_rows_render_as_listed() {
        let ctx = CellContext::new(true);
        let r = unit_cell_correction_table(Axis::Y, Axis::Y, Some(Axis::Y)).unwrap();
        assert_eq!(ctx.render(&r.stabilizer), "Y4 Y5 Y5' Y6 Z3 Z6' Z7");
        let r = unit_cell_correction_table(Axis::Z, Axis::Z, Some(Axis::Z)).unwrap();
        assert_eq!(ctx.render(&r.stabilizer), "X6 Z3 Z4 Z5 Z5'");
        assert!(unit_cell_correction_table(Axis::Z, Axis::Y, Some(Axis::Z)).is_err());
    }

    #[test]
    fn q1_flips_the_rotated_angle() {
        let ctx = CellContext::new(true);
        let rules = unit_cell_corrections(&ctx, Axis::Y, Axis::Y, Some(Axis::Y)).unwrap();
        assert_eq!(rules[&1].stabilizer.get(1), Some(Axis::Z));
        assert_eq!(rules[&1].flips_angle_of, vec![2]);
        assert_eq!(rules[&2].stabilizer.get(2), Some(Axis::X));
    }
}

// SPDX-License-Identifier: Apache-2.0
//! Gflow and Pauli flow: verification, the layered gflow finder, correction
//! sets for a fixed order, and exhaustive oracles.
//!
//! A partial order is carried as a layer index per node: `u ≺ v` iff
//! `layer(u) > layer(v)`. Layer 0 holds the maximal elements, which for a
//! maximally delayed gflow are exactly the outputs.

pub mod brute;
pub mod catalog;
pub mod theorems;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::graph::{Axis, LabeledOpenGraph, MeasurementLabel, Node, NodeSet, Plane};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowCandidate {
    pub correction: BTreeMap<Node, NodeSet>,
    pub layers: BTreeMap<Node, usize>,
}

impl FlowCandidate {
    pub fn precedes(&self, u: Node, v: Node) -> bool {
        self.layers[&u] > self.layers[&v]
    }

    pub fn depth(&self) -> usize {
        self.layers.values().copied().max().map_or(0, |m| m + 1)
    }

    /// Node sets per layer index, empty layers included.
    pub fn layer_sets(&self) -> Vec<NodeSet> {
        let mut out = vec![NodeSet::new(); self.depth()];
        for (&v, &l) in &self.layers {
            out[l].insert(v);
        }
        out
    }

    /// `|Ṽ_k|` for the layering the order induces (empty indices skipped).
    pub fn cumulative_layer_sizes(&self) -> Vec<usize> {
        let mut acc = 0;
        self.layer_sets()
            .into_iter()
            .filter(|s| !s.is_empty())
            .map(|s| {
                acc += s.len();
                acc
            })
            .collect()
    }

    /// Non-outputs sorted so that earlier nodes in the order come first.
    pub fn measurement_order(&self, log: &LabeledOpenGraph) -> Vec<Node> {
        let mut order: Vec<Node> = log.labels.keys().copied().collect();
        order.sort_by_key(|v| (std::cmp::Reverse(self.layers[v]), *v));
        order
    }
}

/// First violated condition, named by its letter in the flow definition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: String,
    pub node: Node,
    pub witness: Option<Node>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.witness {
            Some(w) => write!(f, "condition {} fails at node {} (witness {w})", self.condition, self.node),
            None => write!(f, "condition {} fails at node {}", self.condition, self.node),
        }
    }
}

pub type FlowCheck = std::result::Result<(), Violation>;

fn check_domain(log: &LabeledOpenGraph, cand: &FlowCandidate) -> Result<()> {
    let non_out = log.open.non_outputs();
    let dom: NodeSet = cand.correction.keys().copied().collect();
    if dom != non_out {
        return Err(Error::MalformedCandidate(
            "correction must be defined exactly on the non-outputs".into(),
        ));
    }
    let covered: NodeSet = cand.layers.keys().copied().collect();
    if covered != log.graph().node_set() {
        return Err(Error::MalformedCandidate("layers must cover every node".into()));
    }
    for (u, s) in &cand.correction {
        if let Some(v) = s.iter().find(|v| !log.graph().contains(**v)) {
            return Err(Error::MalformedCandidate(format!("g({u}) contains unknown node {v}")));
        }
    }
    Ok(())
}

fn fail(condition: &str, node: Node, witness: Option<Node>) -> FlowCheck {
    Err(Violation {
        condition: condition.into(),
        node,
        witness,
    })
}

/// Checks the gflow conditions (a)–(e) literally. Axis labels are not planes,
/// so any of them is reported as a `label` violation.
pub fn verify_gflow(log: &LabeledOpenGraph, cand: &FlowCandidate) -> Result<FlowCheck> {
    check_domain(log, cand)?;
    for (&u, g) in &cand.correction {
        if let Some(&v) = g.iter().find(|v| log.inputs().contains(v)) {
            return Ok(fail("codomain", u, Some(v)));
        }
        let odd = log.graph().odd_neighborhood(g);
        if let Some(&v) = g.iter().find(|&&v| v != u && !cand.precedes(u, v)) {
            return Ok(fail("a", u, Some(v)));
        }
        if let Some(&v) = odd.iter().find(|&&v| v != u && !cand.precedes(u, v)) {
            return Ok(fail("b", u, Some(v)));
        }
        let (in_g, in_odd) = (g.contains(&u), odd.contains(&u));
        let ok = match log.labels[&u] {
            MeasurementLabel::Plane(Plane::XY, _) => !in_g && in_odd,
            MeasurementLabel::Plane(Plane::XZ, _) => in_g && in_odd,
            MeasurementLabel::Plane(Plane::YZ, _) => in_g && !in_odd,
            MeasurementLabel::Axis(_) => return Ok(fail("label", u, None)),
        };
        if !ok {
            let letter = match log.labels[&u] {
                MeasurementLabel::Plane(Plane::XY, _) => "c",
                MeasurementLabel::Plane(Plane::XZ, _) => "d",
                _ => "e",
            };
            return Ok(fail(letter, u, None));
        }
    }
    Ok(Ok(()))
}

fn in_xy(l: Option<&MeasurementLabel>) -> bool {
    matches!(l, Some(MeasurementLabel::Axis(Axis::X | Axis::Y)))
}

fn in_yz(l: Option<&MeasurementLabel>) -> bool {
    matches!(l, Some(MeasurementLabel::Axis(Axis::Y | Axis::Z)))
}

/// Whether `(in_p, in_odd)` at `u` itself satisfies the label condition.
fn self_condition(label: &MeasurementLabel, in_p: bool, in_odd: bool) -> bool {
    match label {
        MeasurementLabel::Plane(Plane::XY, _) => !in_p && in_odd,
        MeasurementLabel::Plane(Plane::XZ, _) => in_p && in_odd,
        MeasurementLabel::Plane(Plane::YZ, _) => in_p && !in_odd,
        MeasurementLabel::Axis(Axis::X) => in_odd,
        MeasurementLabel::Axis(Axis::Y) => in_p != in_odd,
        MeasurementLabel::Axis(Axis::Z) => in_p,
    }
}

fn self_letter(label: &MeasurementLabel) -> &'static str {
    match label {
        MeasurementLabel::Plane(Plane::XY, _) => "d",
        MeasurementLabel::Plane(Plane::XZ, _) => "e",
        MeasurementLabel::Plane(Plane::YZ, _) => "f",
        MeasurementLabel::Axis(Axis::X) => "g",
        MeasurementLabel::Axis(Axis::Y) => "h",
        MeasurementLabel::Axis(Axis::Z) => "i",
    }
}

/// Checks the Pauli-flow conditions (a)–(i) literally. Outputs carry no label
/// and so never fall under the X/Y or Y/Z exemptions.
pub fn verify_pauli_flow(log: &LabeledOpenGraph, cand: &FlowCandidate) -> Result<FlowCheck> {
    check_domain(log, cand)?;
    for (&u, p) in &cand.correction {
        if let Some(&v) = p.iter().find(|v| log.inputs().contains(v)) {
            return Ok(fail("codomain", u, Some(v)));
        }
        let odd = log.graph().odd_neighborhood(p);
        for &v in p {
            if v != u && !in_xy(log.label(v)) && !cand.precedes(u, v) {
                return Ok(fail("a", u, Some(v)));
            }
        }
        for &v in &odd {
            if v != u && !in_yz(log.label(v)) && !cand.precedes(u, v) {
                return Ok(fail("b", u, Some(v)));
            }
        }
        for v in log.graph().nodes() {
            if v != u
                && log.label(v).is_some_and(|l| l.is_axis(Axis::Y))
                && !cand.precedes(u, v)
                && p.contains(&v) != odd.contains(&v)
            {
                return Ok(fail("c", u, Some(v)));
            }
        }
        let label = &log.labels[&u];
        if !self_condition(label, p.contains(&u), odd.contains(&u)) {
            return Ok(fail(self_letter(label), u, None));
        }
    }
    Ok(Ok(()))
}

/// Maximally delayed gflow by layers: outputs form layer 0, and layer `k+1`
/// holds every unprocessed node with a correction set inside the processed
/// non-inputs (plus itself for XZ and YZ) whose odd neighborhood meets the
/// unprocessed nodes exactly as its plane requires. `None` when no gflow
/// exists, including whenever a label is a Pauli axis.
pub fn find_maximally_delayed_gflow(log: &LabeledOpenGraph) -> Option<FlowCandidate> {
    if log.has_axis_labels() {
        return None;
    }
    let g = log.graph();
    let mut processed: NodeSet = log.outputs().clone();
    let mut cand = FlowCandidate::default();
    for &o in log.outputs() {
        cand.layers.insert(o, 0);
    }
    let mut layer = 0;
    loop {
        let rest: Vec<Node> = g.nodes().filter(|v| !processed.contains(v)).collect();
        if rest.is_empty() {
            return Some(cand);
        }
        layer += 1;
        let pool: Vec<Node> = processed
            .iter()
            .copied()
            .filter(|v| !log.inputs().contains(v))
            .collect();
        let mut a = BitMatrix::zeros(rest.len(), pool.len());
        for (r, &w) in rest.iter().enumerate() {
            for (c, &k) in pool.iter().enumerate() {
                if g.has_edge(w, k) {
                    a.set(r, c, true);
                }
            }
        }
        let mut found = Vec::new();
        for &u in &rest {
            let label = log.labels[&u];
            let plane = match label {
                MeasurementLabel::Plane(p, _) => p,
                MeasurementLabel::Axis(_) => unreachable!(),
            };
            let with_self = plane != Plane::XY;
            if with_self && log.inputs().contains(&u) {
                continue;
            }
            let b: Vec<bool> = rest
                .iter()
                .map(|&w| {
                    let target = w == u && plane != Plane::YZ;
                    let from_self = with_self && g.has_edge(u, w);
                    target ^ from_self
                })
                .collect();
            if let Some(x) = a.solve(&b).expect("dimensions agree") {
                let mut set: NodeSet = pool
                    .iter()
                    .zip(&x)
                    .filter(|(_, &bit)| bit)
                    .map(|(&k, _)| k)
                    .collect();
                if with_self {
                    set.insert(u);
                }
                found.push((u, set));
            }
        }
        if found.is_empty() {
            return None;
        }
        for (u, set) in found {
            processed.insert(u);
            cand.layers.insert(u, layer);
            cand.correction.insert(u, set);
        }
    }
}

/// Correction sets for a supplied layering, solved node by node over GF(2)
/// against the Pauli-flow conditions. With plane labels only these are the
/// gflow conditions. `None` if some node admits no correction set.
pub fn solve_corrections_for_layers(
    log: &LabeledOpenGraph,
    layers: &BTreeMap<Node, usize>,
) -> Result<Option<FlowCandidate>> {
    let g = log.graph();
    if layers.keys().copied().collect::<NodeSet>() != g.node_set() {
        return Err(Error::MalformedCandidate("layers must cover every node".into()));
    }
    let vars: Vec<Node> = log.open.non_inputs().into_iter().collect();
    let col: BTreeMap<Node, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut cand = FlowCandidate {
        correction: BTreeMap::new(),
        layers: layers.clone(),
    };
    for (&u, label) in &log.labels {
        let mut rows: Vec<(Vec<usize>, bool)> = Vec::new();
        let member = |v: Node| col.get(&v).map(|&c| vec![c]).unwrap_or_default();
        let odd_row = |v: Node| -> Vec<usize> {
            g.neighbors(v).iter().filter_map(|w| col.get(w).copied()).collect()
        };
        for v in g.nodes() {
            if v == u || layers[&u] > layers[&v] {
                continue;
            }
            let lv = log.label(v);
            if !in_xy(lv) {
                rows.push((member(v), false));
            }
            if !in_yz(lv) {
                rows.push((odd_row(v), false));
            }
            if lv.is_some_and(|l| l.is_axis(Axis::Y)) {
                let mut r = member(v);
                r.extend(odd_row(v));
                rows.push((r, false));
            }
        }
        match label {
            MeasurementLabel::Plane(Plane::XY, _) => {
                rows.push((member(u), false));
                rows.push((odd_row(u), true));
            }
            MeasurementLabel::Plane(Plane::XZ, _) => {
                rows.push((member(u), true));
                rows.push((odd_row(u), true));
            }
            MeasurementLabel::Plane(Plane::YZ, _) => {
                rows.push((member(u), true));
                rows.push((odd_row(u), false));
            }
            MeasurementLabel::Axis(Axis::X) => rows.push((odd_row(u), true)),
            MeasurementLabel::Axis(Axis::Y) => {
                let mut r = member(u);
                r.extend(odd_row(u));
                rows.push((r, true));
            }
            MeasurementLabel::Axis(Axis::Z) => rows.push((member(u), true)),
        }
        let mut a = BitMatrix::zeros(rows.len(), vars.len());
        let mut b = Vec::with_capacity(rows.len());
        for (r, (cols, rhs)) in rows.iter().enumerate() {
            for &c in cols {
                a.flip(r, c);
            }
            b.push(*rhs);
        }
        let Some(x) = a.solve(&b)? else {
            return Ok(None);
        };
        cand.correction.insert(
            u,
            vars.iter().zip(&x).filter(|(_, &bit)| bit).map(|(&v, _)| v).collect(),
        );
    }
    Ok(Some(cand))
}

/// `g(v) = {v}` with the non-outputs in layer 1 and the outputs in layer 0.
pub fn construct_rl_gflow(log: &LabeledOpenGraph) -> Result<FlowCandidate> {
    if !log.inputs().is_subset(log.outputs()) {
        return Err(Error::Precondition("inputs must be outputs".into()));
    }
    if !log.lambda_all_yz() {
        return Err(Error::Precondition("every label must be YZ".into()));
    }
    if !log.open.is_register_logic() {
        return Err(Error::Precondition("open graph is not register-logic".into()));
    }
    let mut cand = FlowCandidate::default();
    for v in log.graph().nodes() {
        if log.outputs().contains(&v) {
            cand.layers.insert(v, 0);
        } else {
            cand.layers.insert(v, 1);
            cand.correction.insert(v, [v].into());
        }
    }
    Ok(cand)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, OpenGraph};

    fn log(
        nodes: &[Node],
        edges: &[(Node, Node)],
        inputs: &[Node],
        outputs: &[Node],
        labels: &[(Node, MeasurementLabel)],
    ) -> LabeledOpenGraph {
        let og = OpenGraph::new(
            Graph::from_edges(nodes, edges).unwrap(),
            inputs.iter().copied().collect(),
            outputs.iter().copied().collect(),
        )
        .unwrap();
        LabeledOpenGraph::new(og, labels.iter().copied().collect()).unwrap()
    }

    fn cand(corr: &[(Node, &[Node])], layers: &[(Node, usize)]) -> FlowCandidate {
        FlowCandidate {
            correction: corr.iter().map(|(u, s)| (*u, s.iter().copied().collect())).collect(),
            layers: layers.iter().copied().collect(),
        }
    }

    #[test]
    fn flattened_layers_break_condition_b() {
        let l = log(&[1, 2, 3], &[(1, 3), (2, 3)], &[2], &[2, 3], &[(1, MeasurementLabel::yz(0.1))]);
        let good = cand(&[(1, &[1])], &[(1, 1), (2, 0), (3, 0)]);
        assert_eq!(verify_gflow(&l, &good).unwrap(), Ok(()));
        let flat = cand(&[(1, &[1])], &[(1, 0), (2, 0), (3, 0)]);
        assert_eq!(verify_gflow(&l, &flat).unwrap().unwrap_err().condition, "b");
    }

    #[test]
    fn domain_mismatch_is_malformed() {
        let l = log(&[1, 2], &[(1, 2)], &[], &[2], &[(1, MeasurementLabel::yz(0.0))]);
        let c = cand(&[], &[(1, 1), (2, 0)]);
        assert!(verify_gflow(&l, &c).is_err());
    }

    #[test]
    fn finder_handles_teleport_and_trivial_cases() {
        let l = log(&[1, 2], &[(1, 2)], &[1], &[2], &[(1, MeasurementLabel::xy(0.0))]);
        let f = find_maximally_delayed_gflow(&l).unwrap();
        assert_eq!(f.correction[&1], [2].into());
        let bare = log(&[1], &[], &[1], &[1], &[]);
        assert_eq!(find_maximally_delayed_gflow(&bare).unwrap().depth(), 1);
    }

    #[test]
    fn input_in_yz_plane_has_no_gflow() {
        let l = log(&[1, 2], &[(1, 2)], &[1], &[2], &[(1, MeasurementLabel::yz(0.0))]);
        assert!(find_maximally_delayed_gflow(&l).is_none());
    }

    #[test]
    fn layered_solver_reproduces_teleport() {
        let l = log(&[1, 2], &[(1, 2)], &[1], &[2], &[(1, MeasurementLabel::xy(0.0))]);
        let c = solve_corrections_for_layers(&l, &[(1, 1), (2, 0)].into()).unwrap().unwrap();
        assert_eq!(verify_pauli_flow(&l, &c).unwrap(), Ok(()));
        assert!(solve_corrections_for_layers(&l, &[(1, 0), (2, 0)].into()).unwrap().is_none());
    }

    #[test]
    fn rl_construction_rejects_non_rl_graphs() {
        let l = log(&[1, 2, 3], &[(1, 2), (2, 3)], &[], &[3], &[
            (1, MeasurementLabel::yz(0.0)),
            (2, MeasurementLabel::yz(0.0)),
        ]);
        assert!(construct_rl_gflow(&l).is_err());
        let single = log(&[1, 2], &[(1, 2)], &[2], &[2], &[(1, MeasurementLabel::yz(0.3))]);
        let c = construct_rl_gflow(&single).unwrap();
        assert_eq!(verify_gflow(&single, &c).unwrap(), Ok(()));
    }
}

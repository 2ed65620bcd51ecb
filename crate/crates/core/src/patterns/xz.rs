// SPDX-License-Identifier: Apache-2.0
//! XZ-plane constructions: the hexagonal grid reduced to a triangular grid
//! with XZ labels, and gate gadgets on sparse triangular-grid subgraphs.
//!
//! The thorn is the path `1-2-3-4-5-6` with the extra edge `3-5`; `1` is the
//! input, `6` the output, `1, 2, 3, 5` are measured in `X` and the apex `4`
//! in `XZ(θ)`. It implements `R_Y(θ - π/2) H` up to Paulis.
//!
//! The two-wire patch runs two five-qubit paths `a1..a5` and `b1..b5`, every
//! path qubit but the last measured in `X`, and joins `a3` to `b3` through
//! `m1-m2`. Measuring `m1, m2` in `X` gives `CZ`, in `Z` the identity.
//! Attaching the segment at `b2` instead of `b3` gives `CNOT` with `a` as
//! control.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::clifford::{hadamard_matrix, rotation, LocalCliffordFrame};
use crate::error::{Error, Result};
use crate::flow::FlowCandidate;
use crate::graph::grids::{hexagonal, HexLayout};
use crate::graph::rewrite::measure_pauli_rewrite;
use crate::graph::{Axis, Graph, LabeledOpenGraph, MeasurementLabel, Node, NodeSet, OpenGraph, Plane};
use crate::pattern::Pattern;
use crate::patterns::{layers_from_groups, pattern_for_layers};
use crate::sim::linalg::{self, Matrix};

/// The hexagonal grid after its Y and Z pre-measurements.
#[derive(Clone, Debug)]
pub struct HexReduction {
    pub layout: HexLayout,
    /// Triangular grid on the surviving kept sites.
    pub graph: Graph,
    /// Tags of the survivors in the all-outcome-0 branch.
    pub frame: LocalCliffordFrame,
    /// Kept sites of the first row and column, measured in `Z`.
    pub removed: Vec<Node>,
    /// Survivors in the last column.
    pub outputs: Vec<Node>,
    /// Physical `YZ` labels of the other survivors.
    pub physical: BTreeMap<Node, MeasurementLabel>,
    /// The same measurements seen through the tags, all `XZ`.
    pub labels: BTreeMap<Node, MeasurementLabel>,
    /// `+1` where `YZ(θ)` became `XZ(θ)`, `-1` where it became `XZ(-θ)`.
    pub signs: BTreeMap<Node, i8>,
    /// Prepares the tagged triangular grid from `|+⟩` on every site: Y on one
    /// sublattice, then Z on the first row and column, corrected so every
    /// branch leaves the outcome-0 state.
    pub pattern: Pattern,
    pub flow: FlowCandidate,
    /// Triangular grid with the merged labels; no inputs.
    pub xz: LabeledOpenGraph,
}

pub fn reduce_hexagonal_to_xz(rows: usize, cols: usize) -> Result<HexReduction> {
    reduce_hexagonal_to_xz_with(rows, cols, |k| 0.1 + 0.13 * k as f64)
}

/// `angle(k)` is the physical `YZ` angle of the `k`-th measured survivor in
/// id order.
pub fn reduce_hexagonal_to_xz_with(rows: usize, cols: usize, angle: impl Fn(usize) -> f64) -> Result<HexReduction> {
    if rows < 2 || cols < 3 {
        return Err(Error::Precondition(format!("{rows}x{cols} hexagonal grid is too small")));
    }
    let layout = hexagonal(rows, cols)?;
    let mut g = layout.open.graph.clone();
    let mut frame = LocalCliffordFrame::new();
    for &u in &layout.measured {
        (g, frame) = measure_pauli_rewrite(&g, &frame, u, Axis::Y, None, 0)?;
    }
    let removed: Vec<Node> = layout
        .kept
        .iter()
        .copied()
        .filter(|v| {
            let (r, c) = layout.coords[v];
            r == 0 || c == 0
        })
        .collect();
    for &u in &removed {
        (g, frame) = measure_pauli_rewrite(&g, &frame, u, Axis::Z, None, 0)?;
    }
    let outputs: Vec<Node> = g.nodes().filter(|v| layout.coords[v].1 == cols - 1).collect();
    let measured: Vec<Node> = g.nodes().filter(|v| !outputs.contains(v)).collect();
    if outputs.is_empty() || measured.is_empty() {
        return Err(Error::Precondition(format!("{rows}x{cols} hexagonal grid leaves no wire")));
    }
    let mut physical = BTreeMap::new();
    let mut labels = BTreeMap::new();
    let mut signs = BTreeMap::new();
    for (k, &v) in measured.iter().enumerate() {
        let theta = angle(k);
        let phys = MeasurementLabel::yz(theta);
        let (merged, flip) = frame.get(v).pull_label(&phys);
        let MeasurementLabel::Plane(Plane::XZ, a) = merged else {
            return Err(Error::Precondition(format!(
                "tag {} on {v} does not turn YZ into XZ",
                frame.get(v)
            )));
        };
        if flip {
            return Err(Error::Precondition(format!("tag on {v} flips the outcome")));
        }
        let sign = if (a - theta).abs() < 1e-9 { 1 } else { -1 };
        physical.insert(v, phys);
        labels.insert(v, merged);
        signs.insert(v, sign);
    }
    let out_set: NodeSet = outputs.iter().copied().collect();
    let xz = LabeledOpenGraph::new(OpenGraph::new(g.clone(), NodeSet::new(), out_set)?, labels.clone())?;

    let survivors: Vec<Node> = g.nodes().collect();
    let prep_out: NodeSet = survivors.iter().copied().collect();
    let mut prep_labels = BTreeMap::new();
    for &u in &layout.measured {
        prep_labels.insert(u, MeasurementLabel::Axis(Axis::Y));
    }
    for &u in &removed {
        prep_labels.insert(u, MeasurementLabel::Axis(Axis::Z));
    }
    let prep = LabeledOpenGraph::new(
        OpenGraph::new(layout.open.graph.clone(), NodeSet::new(), prep_out)?,
        prep_labels,
    )?;
    let groups = vec![
        layout.measured.iter().copied().collect(),
        removed.clone(),
        survivors.clone(),
    ];
    let (pattern, flow) = pattern_for_layers(
        &format!("hex{rows}x{cols}"),
        &prep,
        &layers_from_groups(&groups),
        Vec::new(),
        survivors,
    )?;
    Ok(HexReduction {
        layout,
        graph: g,
        frame,
        removed,
        outputs,
        physical,
        labels,
        signs,
        pattern,
        flow,
        xz,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum XzGate {
    /// One thorn with apex angle `θ`.
    Thorn(f64),
    /// Thorn at `θ = 0`.
    Identity,
    /// Thorn at `θ = π/2`.
    H,
    /// Two thorns, `π/2` then `π/2 - α`.
    Ry(f64),
    Cz,
    /// The two-wire patch with `Z` on the middle of the segment.
    CzIdle,
    Cnot,
}

/// A gadget pattern and the gate it should implement up to Paulis.
#[derive(Clone, Debug)]
pub struct XzGadget {
    pub gate: XzGate,
    pub pattern: Pattern,
    pub flow: FlowCandidate,
    pub target: Matrix,
}

pub fn thorn_matrix(theta: f64) -> Matrix {
    linalg::single(&(rotation(Axis::Y, theta - FRAC_PI_2) * hadamard_matrix()))
}

fn cnot() -> Matrix {
    let o = Complex64::new(1.0, 0.0);
    let z = Complex64::new(0.0, 0.0);
    Matrix::from_row_slice(4, 4, &[o, z, z, z, z, o, z, z, z, z, z, o, z, z, o, z])
}

struct Builder {
    nodes: Vec<Node>,
    edges: Vec<(Node, Node)>,
    labels: BTreeMap<Node, MeasurementLabel>,
    order: Vec<Node>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            nodes: Vec::new(),
            edges: Vec::new(),
            labels: BTreeMap::new(),
            order: Vec::new(),
        }
    }

    fn node(&mut self) -> Node {
        let v = self.nodes.len() as Node + 1;
        self.nodes.push(v);
        v
    }

    fn measure(&mut self, v: Node, l: MeasurementLabel) {
        self.labels.insert(v, l);
        self.order.push(v);
    }

    /// A thorn from `input`; returns its output.
    fn thorn(&mut self, input: Node, theta: f64) -> Node {
        let q: Vec<Node> = std::iter::once(input).chain((0..5).map(|_| self.node())).collect();
        for w in q.windows(2) {
            self.edges.push((w[0], w[1]));
        }
        self.edges.push((q[2], q[4]));
        for (k, &v) in q[..5].iter().enumerate() {
            let l = if k == 3 {
                MeasurementLabel::xz(theta)
            } else {
                MeasurementLabel::Axis(Axis::X)
            };
            self.measure(v, l);
        }
        q[5]
    }

    fn path(&mut self) -> Vec<Node> {
        let q: Vec<Node> = (0..5).map(|_| self.node()).collect();
        for w in q.windows(2) {
            self.edges.push((w[0], w[1]));
        }
        q
    }

    fn finish(self, name: &str, inputs: Vec<Node>, outputs: Vec<Node>) -> Result<(Pattern, FlowCandidate)> {
        let g = Graph::from_edges(&self.nodes, &self.edges)?;
        let og = OpenGraph::new(g, inputs.iter().copied().collect(), outputs.iter().copied().collect())?;
        let log = LabeledOpenGraph::new(og, self.labels)?;
        let mut groups: Vec<Vec<Node>> = self.order.iter().map(|&v| vec![v]).collect();
        groups.push(outputs.clone());
        pattern_for_layers(name, &log, &layers_from_groups(&groups), inputs, outputs)
    }
}

pub fn build_xz_triangular_gadgets(gate: XzGate) -> Result<XzGadget> {
    let mut b = Builder::new();
    let (name, inputs, outputs, target) = match gate {
        XzGate::Thorn(_) | XzGate::Identity | XzGate::H => {
            let t = match gate {
                XzGate::Thorn(t) => t,
                XzGate::H => FRAC_PI_2,
                _ => 0.0,
            };
            let i = b.node();
            let o = b.thorn(i, t);
            let target = match gate {
                XzGate::Identity => linalg::identity(2),
                XzGate::H => linalg::single(&hadamard_matrix()),
                _ => thorn_matrix(t),
            };
            ("thorn".to_string(), vec![i], vec![o], target)
        }
        XzGate::Ry(a) => {
            let i = b.node();
            let m = b.thorn(i, FRAC_PI_2);
            let o = b.thorn(m, FRAC_PI_2 - a);
            ("ry".into(), vec![i], vec![o], linalg::single(&rotation(Axis::Y, a)))
        }
        XzGate::Cz | XzGate::CzIdle | XzGate::Cnot => {
            let a = b.path();
            let c = b.path();
            let m1 = b.node();
            let m2 = b.node();
            let foot = if gate == XzGate::Cnot { c[1] } else { c[2] };
            b.edges.extend([(a[2], m1), (m1, m2), (m2, foot)]);
            let mid = if gate == XzGate::CzIdle { Axis::Z } else { Axis::X };
            b.measure(m1, MeasurementLabel::Axis(mid));
            b.measure(m2, MeasurementLabel::Axis(mid));
            for k in 0..4 {
                b.measure(a[k], MeasurementLabel::Axis(Axis::X));
                b.measure(c[k], MeasurementLabel::Axis(Axis::X));
            }
            let target = match gate {
                XzGate::Cz => linalg::cz(0, 1, 2),
                XzGate::CzIdle => linalg::identity(4),
                _ => cnot(),
            };
            ("patch".into(), vec![a[0], c[0]], vec![a[4], c[4]], target)
        }
    };
    let (pattern, flow) = b.finish(&format!("xz_{name}"), inputs, outputs)?;
    Ok(XzGadget {
        gate,
        pattern,
        flow,
        target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interior_survivors_merge_to_xz() {
        let r = reduce_hexagonal_to_xz(4, 5).unwrap();
        assert!(!r.labels.is_empty());
        assert!(r.labels.values().all(|l| l.is_plane(Plane::XZ)));
        assert_eq!(r.signs.len(), r.labels.len());
        assert!(reduce_hexagonal_to_xz(1, 5).is_err());
    }

    #[test]
    fn gadgets_build() {
        for g in [XzGate::H, XzGate::Ry(0.3), XzGate::Cz, XzGate::Cnot, XzGate::CzIdle] {
            let p = build_xz_triangular_gadgets(g).unwrap();
            assert!(p.pattern.graph.labels.values().all(|l| !l.is_plane(Plane::XY) && !l.is_plane(Plane::YZ)));
        }
    }
}

// SPDX-License-Identifier: Apache-2.0
//! Reference states for checking graph rewrites: bare and frame-dressed
//! graph states, and graph states with Pauli measurements projected out.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::clifford::LocalCliffordFrame;
use crate::error::{Error, Result};
use crate::graph::{Axis, Graph, MeasurementLabel, Node, NodeSet};
use crate::sim::state::{eigenvector, StateVector};

/// `|G⟩` on ascending node ids.
pub fn graph_state(g: &Graph) -> StateVector {
    let order: Vec<Node> = g.nodes().collect();
    let mut s = StateVector::plus(&order);
    for (a, b) in g.edges() {
        s.apply_cz(a, b).expect("graph nodes");
    }
    s
}

/// `(⊗ C_v)|G⟩`; tags on nodes outside `g` are an error.
pub fn dressed_state(g: &Graph, frame: &LocalCliffordFrame) -> Result<StateVector> {
    let mut s = graph_state(g);
    for (v, c) in frame.iter() {
        if !g.contains(v) {
            return Err(Error::UnknownNode(v));
        }
        s.apply_1q(v, &c.matrix())?;
    }
    Ok(s)
}

/// Projects the Pauli outcomes `steps` out of `|G⟩`, building the state
/// lazily so only the qubits near the current measurement are held. The
/// result is normalized, on the surviving nodes in ascending order, and
/// `None` when the branch has zero probability.
pub fn project_graph_state(g: &Graph, steps: &[(Node, Axis, u8)], cap: usize) -> Result<Option<StateVector>> {
    let h = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
    let mut s = StateVector::scalar();
    let mut prepared = NodeSet::new();
    let mut applied: BTreeSet<(Node, Node)> = BTreeSet::new();
    let prepare = |s: &mut StateVector, v: Node, prepared: &mut NodeSet| -> Result<()> {
        if prepared.insert(v) {
            if s.num_qubits() + 1 > cap {
                return Err(Error::QubitCap {
                    need: s.num_qubits() + 1,
                    cap,
                });
            }
            s.push_qubit(v, [h, h]);
        }
        Ok(())
    };
    let mut measured = NodeSet::new();
    for &(u, axis, outcome) in steps {
        if measured.contains(&u) {
            return Err(Error::Precondition(format!("node {u} is measured twice")));
        }
        prepare(&mut s, u, &mut prepared)?;
        for &w in g.try_neighbors(u)? {
            prepare(&mut s, w, &mut prepared)?;
            if applied.insert((u.min(w), u.max(w))) {
                s.apply_cz(u, w)?;
            }
        }
        s = s.project(u, eigenvector(&MeasurementLabel::Axis(axis), outcome))?;
        measured.insert(u);
        let n = s.norm_sqr();
        if n < 1e-24 {
            return Ok(None);
        }
        s.scale(Complex64::new(1.0 / n.sqrt(), 0.0));
    }
    for v in g.nodes() {
        if !measured.contains(&v) {
            prepare(&mut s, v, &mut prepared)?;
        }
    }
    for (a, b) in g.edges() {
        if applied.insert((a, b)) {
            s.apply_cz(a, b)?;
        }
    }
    let order: Vec<Node> = g.nodes().filter(|v| !measured.contains(v)).collect();
    Ok(Some(s.reordered(&order)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::LocalClifford;

    #[test]
    fn edge_state_amplitudes() {
        let g = Graph::from_edges(&[1, 2], &[(1, 2)]).unwrap();
        let a: Vec<f64> = graph_state(&g).amplitudes().iter().map(|z| z.re).collect();
        for (x, y) in a.iter().zip([0.5, 0.5, 0.5, -0.5]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn z_projection_matches_deletion() {
        let g = Graph::from_edges(&[1, 2, 3], &[(1, 2), (2, 3)]).unwrap();
        let s = project_graph_state(&g, &[(2, Axis::Z, 0)], 10).unwrap().unwrap();
        let bare = graph_state(&Graph::from_edges(&[1, 3], &[]).unwrap());
        assert!((s.fidelity(&bare).unwrap() - 1.0).abs() < 1e-12);
        let s1 = project_graph_state(&g, &[(2, Axis::Z, 1)], 10).unwrap().unwrap();
        let mut f = LocalCliffordFrame::new();
        f.set(1, LocalClifford::pauli(Axis::Z));
        f.set(3, LocalClifford::pauli(Axis::Z));
        let want = dressed_state(&Graph::from_edges(&[1, 3], &[]).unwrap(), &f).unwrap();
        assert!((s1.fidelity(&want).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn isolated_x_minus_is_impossible() {
        let g = Graph::from_edges(&[1], &[]).unwrap();
        assert!(project_graph_state(&g, &[(1, Axis::X, 1)], 4).unwrap().is_none());
    }
}

// SPDX-License-Identifier: Apache-2.0
//! Pauli measurements on frame-dressed graph states.
//!
//! The frame `C` dresses the graph state as `(⊗ C_v)|G⟩`. Measuring axis `A`
//! on `u` is measuring `C_u† A C_u = ±A'` on the bare state, after which the
//! bare-graph rule for `A'` applies. The bare rules used here:
//!
//! * `Z`: delete `u`; outcome 1 leaves `Z` on every neighbor.
//! * `Y`: complement at `u`, then delete it; neighbors pick up `exp(-iπ/4 Z)`
//!   for outcome 0 and `exp(+iπ/4 Z)` for outcome 1.
//! * `X` with special neighbor `b0`: complement at `b0`, `u`, `b0` in turn,
//!   then delete `u`. Outcome 0 leaves `exp(+iπ/4 Y)` on `b0` and `Z` on
//!   `N(u) \ N(b0) \ {b0}`; outcome 1 leaves `exp(-iπ/4 Y)` on `b0` and `Z` on
//!   `N(b0) \ N(u) \ {u}`.
//!
//! The statevector tests in `tests/rewrite_oracle.rs` pin these down.

use crate::clifford::{LocalClifford, LocalCliffordFrame};
use crate::error::{Error, Result};
use crate::graph::{Axis, Graph, MeasurementLabel, Node, NodeSet};

/// Measures `axis` on `u` with the given outcome and returns the reduced graph
/// and frame. For `X`, `b0` defaults to the smallest neighbor of `u` in the
/// bare graph.
pub fn measure_pauli_rewrite(
    graph: &Graph,
    frame: &LocalCliffordFrame,
    u: Node,
    axis: Axis,
    b0: Option<Node>,
    outcome: u8,
) -> Result<(Graph, LocalCliffordFrame)> {
    let nu: NodeSet = graph.try_neighbors(u)?.clone();
    let (bare, flip) = frame.get(u).pull_label(&MeasurementLabel::Axis(axis));
    let MeasurementLabel::Axis(bare_axis) = bare else {
        unreachable!("Cliffords map axes to axes")
    };
    let m = (outcome & 1) ^ u8::from(flip);
    let mut g = graph.clone();
    let mut byproducts: Vec<(Node, LocalClifford)> = Vec::new();
    match bare_axis {
        Axis::Z => {
            if m == 1 {
                byproducts.extend(nu.iter().map(|&b| (b, LocalClifford::pauli(Axis::Z))));
            }
        }
        Axis::Y => {
            g = g.local_complement(u)?;
            let root = LocalClifford::sqrt_pauli(Axis::Z, m == 1);
            byproducts.extend(nu.iter().map(|&b| (b, root)));
        }
        Axis::X => {
            if nu.is_empty() {
                if m == 1 {
                    return Err(Error::ZeroProbability { node: u, outcome });
                }
            } else {
                let b0 = match b0 {
                    Some(b) if nu.contains(&b) => b,
                    None => *nu.iter().next().unwrap(),
                    other => return Err(Error::BadB0(u, other)),
                };
                let nb: NodeSet = graph.neighbors(b0).clone();
                g = g.local_complement(b0)?.local_complement(u)?.local_complement(b0)?;
                let z = LocalClifford::pauli(Axis::Z);
                if m == 0 {
                    byproducts.push((b0, LocalClifford::sqrt_pauli(Axis::Y, true)));
                    byproducts.extend(
                        nu.iter()
                            .filter(|&&b| b != b0 && !nb.contains(&b))
                            .map(|&b| (b, z)),
                    );
                } else {
                    byproducts.push((b0, LocalClifford::sqrt_pauli(Axis::Y, false)));
                    byproducts.extend(
                        nb.iter()
                            .filter(|&&b| b != u && !nu.contains(&b))
                            .map(|&b| (b, z)),
                    );
                }
            }
        }
    }
    g.remove_node(u)?;
    let mut f = frame.clone();
    f.remove(u);
    for (v, c) in byproducts {
        f.then_inner(v, &c);
    }
    Ok((g, f))
}

/// Folds a stabilizer `K_u = X_u ∏ Z_w` of the bare graph into the frame; the
/// dressed state does not change.
pub fn absorb_stabilizer(graph: &Graph, frame: &mut LocalCliffordFrame, u: Node) -> Result<()> {
    let nu = graph.try_neighbors(u)?.clone();
    frame.then_inner(u, &LocalClifford::pauli(Axis::X));
    for w in nu {
        frame.then_inner(w, &LocalClifford::pauli(Axis::Z));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_on_an_edge_leaves_a_bare_survivor() {
        let g = Graph::from_edges(&[1, 2], &[(1, 2)]).unwrap();
        let (h, f) = measure_pauli_rewrite(&g, &LocalCliffordFrame::new(), 1, Axis::Z, None, 0).unwrap();
        assert_eq!(h.node_set(), [2].into());
        assert!(f.is_empty());
        let (_, f1) = measure_pauli_rewrite(&g, &LocalCliffordFrame::new(), 1, Axis::Z, None, 1).unwrap();
        assert_eq!(f1.get(2), LocalClifford::pauli(Axis::Z));
    }

    #[test]
    fn b0_must_be_a_neighbor() {
        let g = Graph::from_edges(&[1, 2, 3], &[(1, 2)]).unwrap();
        let r = measure_pauli_rewrite(&g, &LocalCliffordFrame::new(), 1, Axis::X, Some(3), 0);
        assert_eq!(r, Err(Error::BadB0(1, Some(3))));
    }

    #[test]
    fn unknown_node_is_an_error() {
        let g = Graph::from_edges(&[1], &[]).unwrap();
        assert!(measure_pauli_rewrite(&g, &LocalCliffordFrame::new(), 9, Axis::Z, None, 0).is_err());
    }
}

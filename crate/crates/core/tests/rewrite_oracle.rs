// SPDX-License-Identifier: Apache-2.0
//! Pauli-measurement graph rewrites against dense projection.

use mbqc_core::clifford::{LocalClifford, LocalCliffordFrame};
use mbqc_core::graph::rewrite::{absorb_stabilizer, measure_pauli_rewrite};
use mbqc_core::graph::{Axis, Graph, MeasurementLabel, Node};
use mbqc_core::sim::state::eigenvector;
use mbqc_core::sim::{dressed_state, graph_state, project_graph_state};
use mbqc_core::Error;
use proptest::prelude::*;

fn build(n: usize, mask: u64) -> Graph {
    let nodes: Vec<Node> = (0..n as Node).collect();
    let mut edges = Vec::new();
    let mut k = 0;
    for a in 0..n {
        for b in a + 1..n {
            if mask >> k & 1 == 1 {
                edges.push((a as Node, b as Node));
            }
            k += 1;
        }
    }
    Graph::from_edges(&nodes, &edges).unwrap()
}

fn frame(n: usize, tags: &[usize]) -> LocalCliffordFrame {
    let all: Vec<LocalClifford> = LocalClifford::all().collect();
    let mut f = LocalCliffordFrame::new();
    for v in 0..n {
        f.set(v as Node, all[tags[v] % all.len()]);
    }
    f
}

fn case() -> impl Strategy<Value = (usize, u64, Vec<usize>, usize, usize, u8, usize)> {
    (1usize..=8).prop_flat_map(|n| {
        (
            Just(n),
            any::<u64>(),
            prop::collection::vec(0usize..24, n),
            0..n,
            0usize..3,
            0u8..2,
            0usize..8,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn rewrite_matches_projection((n, mask, tags, u, a, outcome, pick) in case()) {
        let g = build(n, mask);
        let f = frame(n, &tags);
        let u = u as Node;
        let axis = Axis::from_index(a);
        let nbrs: Vec<Node> = g.neighbors(u).iter().copied().collect();
        let b0 = (!nbrs.is_empty()).then(|| nbrs[pick % nbrs.len()]);
        let before = dressed_state(&g, &f).unwrap();
        let post = before.measure_forced(u, &MeasurementLabel::Axis(axis), outcome).unwrap();
        let p = post.norm_sqr();
        match measure_pauli_rewrite(&g, &f, u, axis, b0, outcome) {
            Ok((h, f2)) => {
                prop_assert!(p > 1e-12, "rewrite succeeded on a zero-probability branch");
                let want = dressed_state(&h, &f2).unwrap();
                let fid = want.fidelity(&post).unwrap();
                prop_assert!(fid > 1.0 - 1e-9, "fidelity {fid}");
            }
            Err(Error::ZeroProbability { .. }) => prop_assert!(p < 1e-12),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn absorbed_stabilizer_keeps_the_state((n, mask, tags, u, _a, _o, _p) in case()) {
        let g = build(n, mask);
        let mut f = frame(n, &tags);
        let before = dressed_state(&g, &f).unwrap();
        absorb_stabilizer(&g, &mut f, u as Node).unwrap();
        let after = dressed_state(&g, &f).unwrap();
        prop_assert!(before.fidelity(&after).unwrap() > 1.0 - 1e-9);
    }

    #[test]
    fn lazy_projection_matches_dense((n, mask, _t, u, a, outcome, _p) in case()) {
        let g = build(n, mask);
        let axis = Axis::from_index(a);
        let u = u as Node;
        let dense = graph_state(&g)
            .measure_forced(u, &MeasurementLabel::Axis(axis), outcome)
            .unwrap();
        match project_graph_state(&g, &[(u, axis, outcome)], 16).unwrap() {
            Some(s) => prop_assert!(s.fidelity(&dense).unwrap() > 1.0 - 1e-9),
            None => prop_assert!(dense.norm_sqr() < 1e-12),
        }
    }
}

#[test]
fn y_on_a_star_center_completes_the_leaves() {
    let g = build(4, 0b000111);
    let (h, f) = measure_pauli_rewrite(&g, &LocalCliffordFrame::new(), 0, Axis::Y, None, 0).unwrap();
    assert_eq!(h.edge_count(), 3);
    for v in 1..4 {
        assert!(!f.get(v).is_identity());
    }
    let post = graph_state(&g)
        .measure_forced(0, &MeasurementLabel::Axis(Axis::Y), 0)
        .unwrap();
    assert!(dressed_state(&h, &f).unwrap().fidelity(&post).unwrap() > 1.0 - 1e-12);
}

#[test]
fn eigenvectors_of_axes() {
    let e = eigenvector(&MeasurementLabel::Axis(Axis::Z), 1);
    assert!(e[0].norm() < 1e-12 && (e[1].norm() - 1.0).abs() < 1e-12);
}

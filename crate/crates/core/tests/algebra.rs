// SPDX-License-Identifier: Apache-2.0
//! GF(2) solving, graph identities and Pauli algebra against brute force.

use mbqc_core::gf2::BitMatrix;
use mbqc_core::graph::{odd_symmetric_difference_law_check, rl_closed_under_non_output_lc, Axis, Graph, Node, NodeSet, OpenGraph};
use mbqc_core::pauli::{graph_stabilizer, PauliString};
use mbqc_core::sim::graph_state;
use mbqc_core::sim::linalg::pauli_string_matrix;
use mbqc_core::sim::run::stabilizer_residual;
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize, bits: &[bool]) -> BitMatrix {
    let rs: Vec<Vec<bool>> = (0..rows).map(|r| bits[r * cols..(r + 1) * cols].to_vec()).collect();
    BitMatrix::from_rows(&rs).unwrap()
}

fn vec_of(mask: usize, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

fn graph(n: usize, mask: u64) -> Graph {
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

fn subset(mask: u64, n: usize) -> NodeSet {
    (0..n as Node).filter(|&v| mask >> v & 1 == 1).collect()
}

fn system() -> impl Strategy<Value = (usize, usize, Vec<bool>, usize)> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        (Just(r), Just(c), prop::collection::vec(any::<bool>(), r * c), 0usize..1 << r)
    })
}

fn axis() -> impl Strategy<Value = Option<Axis>> {
    prop_oneof![Just(None), Just(Some(Axis::X)), Just(Some(Axis::Y)), Just(Some(Axis::Z))]
}

fn pauli(width: usize) -> impl Strategy<Value = PauliString> {
    (prop::collection::vec(axis(), width), 0u8..4).prop_map(|(letters, phase)| {
        let mut p = PauliString::from_letters(
            letters
                .into_iter()
                .enumerate()
                .filter_map(|(w, a)| a.map(|a| (w as Node, a))),
        );
        p.phase = phase;
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn solve_matches_exhaustive_search((r, c, bits, bmask) in system()) {
        let a = matrix(r, c, &bits);
        let b = vec_of(bmask, r);
        let solutions: Vec<Vec<bool>> = (0..1usize << c)
            .map(|m| vec_of(m, c))
            .filter(|x| a.mul_vec(x).unwrap() == b)
            .collect();
        match a.solve(&b).unwrap() {
            Some(x) => prop_assert_eq!(a.mul_vec(&x).unwrap(), b),
            None => prop_assert!(solutions.is_empty()),
        }
        let kernel = (0..1usize << c).filter(|&m| a.mul_vec(&vec_of(m, c)).unwrap().iter().all(|&v| !v)).count();
        prop_assert_eq!(kernel, 1usize << (c - a.rank()));
        let basis = a.kernel_basis();
        prop_assert_eq!(basis.len(), c - a.rank());
        for v in basis {
            prop_assert!(a.mul_vec(&v).unwrap().iter().all(|&x| !x));
        }
    }

    #[test]
    fn odd_neighbourhood_is_linear(n in 1usize..=8, e in any::<u64>(), a in any::<u64>(), b in any::<u64>()) {
        let g = graph(n, e);
        prop_assert!(odd_symmetric_difference_law_check(&g, &subset(a, n), &subset(b, n)));
    }

    #[test]
    fn local_complement_is_an_involution(n in 1usize..=8, e in any::<u64>(), u in 0usize..8) {
        let g = graph(n, e);
        let u = (u % n) as Node;
        let twice = g.local_complement(u).unwrap().local_complement(u).unwrap();
        prop_assert_eq!(twice.edges(), g.edges());
    }

    #[test]
    fn register_logic_survives_non_output_complement(n in 2usize..=7, e in any::<u64>(), k in 1usize..7, u in 0usize..7) {
        let k = k.min(n - 1);
        let full = graph(n, e);
        let edges: Vec<(Node, Node)> = full
            .edges()
            .into_iter()
            .filter(|&(a, b)| (a as usize) < k || (b as usize) < k)
            .collect();
        let nodes: Vec<Node> = (0..n as Node).collect();
        let g = Graph::from_edges(&nodes, &edges).unwrap();
        let outputs: NodeSet = (0..k as Node).collect();
        let inputs: NodeSet = [0].into();
        let og = OpenGraph::new(g, inputs, outputs).unwrap();
        prop_assert!(og.is_register_logic());
        let u = (k + u % (n - k)) as Node;
        prop_assert!(rl_closed_under_non_output_lc(&og, u).unwrap());
    }

    #[test]
    fn graph_stabilizers_fix_the_graph_state(n in 1usize..=7, e in any::<u64>()) {
        let g = graph(n, e);
        let s = graph_state(&g);
        for u in g.nodes() {
            let k = graph_stabilizer(&g, u).unwrap();
            prop_assert!(stabilizer_residual(&s, &k).unwrap() < 1e-10);
        }
    }

    #[test]
    fn pauli_product_matches_matrices(p in pauli(3), q in pauli(3)) {
        let lhs = pauli_string_matrix(&p.multiply(&q), 3);
        let rhs = pauli_string_matrix(&p, 3) * pauli_string_matrix(&q, 3);
        prop_assert!((lhs - &rhs).norm() < 1e-12);
        let pq = pauli_string_matrix(&p, 3) * pauli_string_matrix(&q, 3);
        let qp = pauli_string_matrix(&q, 3) * pauli_string_matrix(&p, 3);
        prop_assert_eq!(p.commutes_with(&q), (pq - qp).norm() < 1e-12);
    }
}

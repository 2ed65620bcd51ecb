// SPDX-License-Identifier: Apache-2.0
//! Every construction against its intended unitary on the simulator.

use mbqc_core::graph::grids::{generate_grid, GridKind};
use mbqc_core::pattern::{ParityFlavor, Pattern};
use mbqc_core::patterns::{
    build_alternating_series_with, build_beveled_cluster, build_beveled_cluster_with, build_brl_pattern,
    build_xz_triangular_gadgets, cell_gate_table, compile_gates, inverse_walsh, reduce_hexagonal_to_xz,
    reduce_triangular_to_lhz, unit_cell_pattern, walsh_coefficients, CellGate, DiagonalSpec, ParityStage, WordGate,
    XzGate,
};
use mbqc_core::sim::linalg::{diagonal, equal_up_to_pauli, matrix_fidelity};
use mbqc_core::sim::run::{check_determinism, extract_unitary, DeterminismOptions};
use proptest::prelude::*;

fn deterministic(p: &Pattern) -> bool {
    let opts = DeterminismOptions {
        trials: 2,
        seed: 1,
        exhaustive_limit: 12,
        sampled_branches: 24,
    };
    let r = check_determinism(p, &opts).unwrap();
    r.deterministic
}

fn equal(a: &mbqc_core::sim::linalg::Matrix, b: &mbqc_core::sim::linalg::Matrix) -> bool {
    matrix_fidelity(a, b) > 1.0 - 1e-9
}

#[test]
fn beveled_cluster_has_n_squared_plus_2n_nodes() {
    for n in 1..=6 {
        let og = generate_grid(GridKind::BeveledCluster, &[n]).unwrap();
        assert_eq!(og.graph.node_count(), n * n + 2 * n);
    }
    for n in 2..=6 {
        assert_eq!(build_beveled_cluster(n).unwrap().graph.graph().node_count(), n * n + 2 * n);
    }
}

#[test]
fn lhz_reduction_implements_the_parity_stage() {
    for n in 2..=4 {
        let r = reduce_triangular_to_lhz(n).unwrap();
        let u = extract_unitary(&r.pattern, None).unwrap();
        assert!(equal(&u, &ParityStage::ramp(n).unitary(n, ParityFlavor::Z)), "n = {n}");
        assert!(deterministic(&r.pattern), "n = {n}");
    }
}

#[test]
fn beveled_and_alternating_match_their_targets() {
    for n in 2..=3 {
        let s = build_beveled_cluster_with(n, &ParityStage::ramp(n)).unwrap();
        assert!(equal(&extract_unitary(&s.pattern, None).unwrap(), &s.target()));
        assert!(deterministic(&s.pattern));
    }
    let s = build_alternating_series_with(2, &[ParityStage::ramp(2), ParityStage::ramp(2)]).unwrap();
    assert!(equal(&extract_unitary(&s.pattern, None).unwrap(), &s.target()));
    assert!(deterministic(&s.pattern));
}

#[test]
fn every_cell_gate_is_its_matrix_up_to_a_pauli_on_every_branch() {
    for g in cell_gate_table(0.7) {
        let p = unit_cell_pattern(g).unwrap();
        let m = p.measured_nodes();
        for k in 0..1usize << m.len() {
            let out = m.iter().enumerate().map(|(j, &v)| (v, (k >> j & 1) as u8)).collect();
            let u = extract_unitary(&p, Some(&out)).unwrap();
            assert!(equal_up_to_pauli(&u, &g.matrix()).is_some(), "{} branch {k}", g.name());
        }
    }
}

#[test]
fn cell_correction_inverts_every_branch_for_gates_without_s() {
    for g in [CellGate::I, CellGate::H, CellGate::HRy(0.4)] {
        let p = unit_cell_pattern(g).unwrap();
        let m = p.measured_nodes();
        for k in 0..1usize << m.len() {
            let mut bits = [0u8; 6];
            let out = m
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    let b = (k >> j & 1) as u8;
                    bits[j + 1] = b;
                    (v, b)
                })
                .collect();
            let u = extract_unitary(&p, Some(&out)).unwrap();
            assert!(equal(&(g.correction_matrix(&bits) * u), &g.matrix()), "{} bits {bits:?}", g.name());
        }
    }
}

#[test]
fn gadgets_implement_their_targets() {
    for g in [
        XzGate::Thorn(0.4),
        XzGate::Identity,
        XzGate::H,
        XzGate::Ry(0.3),
        XzGate::Cz,
        XzGate::CzIdle,
        XzGate::Cnot,
    ] {
        let gad = build_xz_triangular_gadgets(g).unwrap();
        let u = extract_unitary(&gad.pattern, None).unwrap();
        assert!(equal_up_to_pauli(&u, &gad.target).is_some(), "{g:?}");
        assert!(deterministic(&gad.pattern), "{g:?}");
    }
}

#[test]
fn hex_reduction_is_deterministic() {
    let h = reduce_hexagonal_to_xz(3, 4).unwrap();
    assert!(h.pattern.validate().is_ok());
    assert!(deterministic(&h.pattern));
}

#[test]
fn pattern_json_round_trips() {
    let pats = [
        build_beveled_cluster(3).unwrap(),
        unit_cell_pattern(CellGate::HRy(0.25)).unwrap(),
        build_brl_pattern(&DiagonalSpec::from_alpha(&[0.1, 0.2, -0.7, 1.3]).unwrap()).unwrap(),
    ];
    for p in pats {
        let text = p.to_json();
        let back = Pattern::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
    }
}

fn word_gate(wires: usize) -> impl Strategy<Value = WordGate> {
    let w = 0..wires;
    let t = -3.0f64..3.0;
    prop_oneof![
        w.clone().prop_map(WordGate::S),
        w.clone().prop_map(WordGate::H),
        w.clone().prop_map(WordGate::I),
        (t.clone(), w.clone()).prop_map(|(t, w)| WordGate::HRy(t, w)),
        (t, w).prop_map(|(t, w)| WordGate::Ry(t, w)),
    ]
}

fn word() -> impl Strategy<Value = (usize, Vec<WordGate>)> {
    (1usize..=2).prop_flat_map(|width| {
        let gate = if width == 2 {
            prop_oneof![4 => word_gate(2), 1 => Just(WordGate::Cz(0, 1))].boxed()
        } else {
            word_gate(1).boxed()
        };
        (Just(width), prop::collection::vec(gate, 1..=3))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn walsh_round_trips(alpha in prop::collection::vec(-3.0f64..3.0, 8)) {
        let back = inverse_walsh(&walsh_coefficients(&alpha).unwrap()).unwrap();
        for (a, b) in alpha.iter().zip(&back) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn brl_pattern_implements_the_diagonal(alpha in prop::collection::vec(-3.0f64..3.0, 4..=4)) {
        let p = build_brl_pattern(&DiagonalSpec::from_alpha(&alpha).unwrap()).unwrap();
        prop_assert!(equal(&extract_unitary(&p, None).unwrap(), &diagonal(&alpha)));
        prop_assert!(deterministic(&p));
    }

    #[test]
    fn compiled_words_match((width, gates) in word()) {
        let cc = compile_gates(&gates, width).unwrap();
        let u = extract_unitary(&cc.pattern, None).unwrap();
        prop_assert!(equal(&u, &cc.target()), "{gates:?}");
    }
}

// SPDX-License-Identifier: Apache-2.0
//! Flow finding and checking against exhaustive search, and the catalog.

use mbqc_core::flow::brute::{brute_force_gflow, brute_force_pauli_flow, max_cumulative_layer_sizes};
use mbqc_core::flow::catalog::{check_catalog, entries, source, CatalogEntry};
use mbqc_core::flow::theorems::{check_exhaustive, check_theorem_suite, random_samples};
use mbqc_core::flow::{construct_rl_gflow, find_maximally_delayed_gflow, verify_gflow, verify_pauli_flow, FlowCandidate};
use mbqc_core::graph::io::GraphJson;
use proptest::prelude::*;
use serde_json::Value;

#[test]
fn finder_agrees_with_brute_force_and_is_maximally_delayed() {
    for log in random_samples(300, 6, 11) {
        let found = find_maximally_delayed_gflow(&log);
        let brute = brute_force_gflow(&log, 8).unwrap();
        assert_eq!(found.is_some(), brute.is_some(), "{:?}", GraphJson::from_labeled(&log));
        if let Some(f) = found {
            assert!(verify_gflow(&log, &f).unwrap().is_ok());
            let best = max_cumulative_layer_sizes(&log, 8).unwrap().unwrap();
            assert_eq!(f.cumulative_layer_sizes(), best, "{:?}", GraphJson::from_labeled(&log));
            let outputs: Vec<_> = log.outputs().iter().copied().collect();
            let layer0: Vec<_> = f.layers.iter().filter(|(_, &l)| l == 0).map(|(&v, _)| v).collect();
            assert_eq!(layer0, outputs);
        }
    }
}

#[test]
fn gflow_is_a_pauli_flow() {
    for log in random_samples(200, 6, 3) {
        if let Some(f) = find_maximally_delayed_gflow(&log) {
            assert!(verify_pauli_flow(&log, &f).unwrap().is_ok());
            assert!(brute_force_pauli_flow(&log, 6).unwrap().is_some());
        }
    }
}

#[test]
fn register_logic_construction_verifies_when_hypotheses_hold() {
    let mut exercised = 0;
    for log in random_samples(300, 7, 5) {
        let og = &log.open;
        if og.is_register_logic() && log.lambda_all_yz() && og.inputs.is_subset(&og.outputs) {
            let f = construct_rl_gflow(&log).unwrap();
            assert!(verify_gflow(&log, &f).unwrap().is_ok());
            exercised += 1;
        }
    }
    assert!(exercised > 20);
}

#[test]
fn theorem_suite_small_run_is_clean() {
    let r = check_exhaustive(3, 6);
    assert!(r.passed(), "{:?}", r.violations);
    let r = check_theorem_suite(&random_samples(150, 6, 9), 6);
    assert!(r.passed(), "{:?}", r.violations);
    assert!(r.exercised.values().all(|&n| n > 0), "{:?}", r.exercised);
}

#[test]
fn catalog_reproduces_every_verdict() {
    for rep in check_catalog().unwrap() {
        assert!(rep.passed(), "{}: {:?}", rep.name, rep.checks);
    }
}

#[test]
fn catalog_files_round_trip() {
    for e in entries() {
        let raw: Value = serde_json::from_str(source(&e.name).unwrap()).unwrap();
        let back: CatalogEntry = serde_json::from_value(serde_json::to_value(&e).unwrap()).unwrap();
        assert_eq!(back, e);
        let j = GraphJson::from_labeled(&e.labeled().unwrap());
        let stored: GraphJson = serde_json::from_value(raw["graph"].clone()).unwrap();
        let stored = GraphJson::from_labeled(&stored.to_labeled().unwrap());
        assert_eq!(serde_json::to_string(&j).unwrap(), serde_json::to_string(&stored).unwrap(), "{}", e.name);
    }
}

#[test]
fn fig4a_corrects_one_by_itself() {
    let e = entries().into_iter().find(|e| e.name == "fig4a").unwrap();
    let f = find_maximally_delayed_gflow(&e.labeled().unwrap()).unwrap();
    assert_eq!(f.correction[&1], [1].into());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn candidate_json_round_trips(seed in any::<u64>()) {
        for log in random_samples(3, 6, seed) {
            if let Some(f) = find_maximally_delayed_gflow(&log) {
                let back: FlowCandidate = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
                prop_assert_eq!(back, f);
            }
            let j = GraphJson::from_labeled(&log);
            let text = serde_json::to_string(&j).unwrap();
            let again = GraphJson::from_labeled(&serde_json::from_str::<GraphJson>(&text).unwrap().to_labeled().unwrap());
            prop_assert_eq!(serde_json::to_string(&again).unwrap(), text);
        }
    }

    #[test]
    fn a_perturbed_gflow_is_caught_or_still_valid(seed in any::<u64>(), pick in any::<usize>()) {
        for log in random_samples(2, 6, seed) {
            let Some(mut f) = find_maximally_delayed_gflow(&log) else { continue };
            let keys: Vec<_> = f.correction.keys().copied().collect();
            if keys.is_empty() {
                continue;
            }
            let v = keys[pick % keys.len()];
            let target = log.graph().nodes().nth(pick % log.graph().node_count()).unwrap();
            let g = f.correction.get_mut(&v).unwrap();
            if !g.remove(&target) {
                g.insert(target);
            }
            let ours = verify_gflow(&log, &f).unwrap().is_ok();
            let brute = brute_force_gflow(&log, 8).unwrap().is_some();
            prop_assert!(!ours || brute);
        }
    }
}

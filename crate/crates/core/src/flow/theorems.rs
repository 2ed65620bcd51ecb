// SPDX-License-Identifier: Apache-2.0
//! Structural features of labeled open graphs and the implications between
//! them, checked over sample families.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::flow::brute::brute_force_pauli_flow;
use crate::flow::find_maximally_delayed_gflow;
use crate::graph::{Axis, Graph, LabeledOpenGraph, MeasurementLabel, Node, NodeSet, OpenGraph};

/// Flow flags are `None` when the oracle could not decide them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeatureProfile {
    pub i_subset_o: bool,
    pub i_equals_o: bool,
    pub io_same_size: bool,
    pub lambda_all_yz: bool,
    pub lambda_subset_yz: bool,
    pub is_rl: bool,
    pub is_brl: bool,
    pub bipartite: bool,
    pub bipartite_inputs_part: bool,
    pub components_touch_io: bool,
    pub has_gflow: Option<bool>,
    pub has_pauli_flow: Option<bool>,
}

/// Every connected component holds an input or an output.
pub fn components_touch_io(og: &OpenGraph) -> bool {
    let mut seen: NodeSet = og.inputs.union(&og.outputs).copied().collect();
    let mut stack: Vec<Node> = seen.iter().copied().collect();
    while let Some(v) = stack.pop() {
        for &w in og.graph.neighbors(v) {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == og.graph.node_count()
}

pub fn feature_profile(log: &LabeledOpenGraph, pauli_cap: usize) -> FeatureProfile {
    let og = &log.open;
    let has_gflow = find_maximally_delayed_gflow(log).is_some();
    let has_pauli_flow = match brute_force_pauli_flow(log, pauli_cap) {
        Ok(found) => Some(found.is_some()),
        Err(_) if has_gflow => Some(true),
        Err(_) if !log.has_axis_labels() => Some(false),
        Err(_) => None,
    };
    FeatureProfile {
        i_subset_o: og.inputs.is_subset(&og.outputs),
        i_equals_o: og.inputs == og.outputs,
        io_same_size: og.inputs.len() == og.outputs.len(),
        lambda_all_yz: log.lambda_all_yz(),
        lambda_subset_yz: log.lambda_subset_yz(),
        is_rl: og.is_register_logic(),
        is_brl: og.is_bipartite_register_logic(),
        bipartite: og.graph.is_bipartite(),
        bipartite_inputs_part: og.is_bipartite_with_inputs_as_part(),
        components_touch_io: components_touch_io(og),
        has_gflow: Some(has_gflow),
        has_pauli_flow,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteViolation {
    pub sample: usize,
    pub statement: String,
    pub profile: FeatureProfile,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub samples: usize,
    pub undecided: usize,
    /// Samples on which each statement's hypothesis held.
    pub exercised: BTreeMap<String, usize>,
    pub violations: Vec<SuiteViolation>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Each statement as (name, hypothesis, conclusion). The register-logic
/// characterizations assume every component meets `I ∪ O`.
fn statements(p: &FeatureProfile, gflow: bool, pauli: Option<bool>) -> Vec<(&'static str, bool, bool)> {
    let mut out = vec![
        ("lemma1", gflow && p.lambda_all_yz, p.i_subset_o),
        ("thm2", p.i_subset_o && p.lambda_all_yz && p.is_rl, gflow),
        ("gflow_implies_pauli_flow", gflow, pauli != Some(false)),
    ];
    if p.components_touch_io {
        out.push(("thm1", p.i_equals_o && gflow, p.lambda_all_yz && p.is_rl));
        out.push(("thm3", p.i_equals_o && p.lambda_all_yz, gflow == p.is_rl));
    }
    if let Some(pf) = pauli {
        out.push(("lemma5", pf && p.lambda_subset_yz, true));
    }
    out
}

fn lemma5_holds(log: &LabeledOpenGraph) -> bool {
    log.inputs()
        .iter()
        .all(|v| log.outputs().contains(v) || log.label(*v).is_some_and(|l| l.is_axis(Axis::Y)))
}

impl SuiteReport {
    /// Checks one sample and records any violated statement.
    pub fn record(&mut self, log: &LabeledOpenGraph, pauli_cap: usize) {
        let i = self.samples;
        self.samples += 1;
        let p = feature_profile(log, pauli_cap);
        let gflow = p.has_gflow.unwrap_or(false);
        if p.has_pauli_flow.is_none() {
            self.undecided += 1;
        }
        for (name, hyp, concl) in statements(&p, gflow, p.has_pauli_flow) {
            let concl = if name == "lemma5" { lemma5_holds(log) } else { concl };
            if hyp {
                *self.exercised.entry(name.to_string()).or_default() += 1;
                if !concl {
                    self.violations.push(SuiteViolation {
                        sample: i,
                        statement: name.to_string(),
                        profile: p.clone(),
                    });
                }
            }
        }
    }
}

pub fn check_theorem_suite(samples: &[LabeledOpenGraph], pauli_cap: usize) -> SuiteReport {
    let mut report = SuiteReport::default();
    for log in samples {
        report.record(log, pauli_cap);
    }
    report
}

/// The suite over every sample of [`for_each_exhaustive_sample`].
pub fn check_exhaustive(max_nodes: usize, pauli_cap: usize) -> SuiteReport {
    let mut report = SuiteReport::default();
    for_each_exhaustive_sample(max_nodes, |log| report.record(&log, pauli_cap));
    report
}

const SAMPLE_ANGLE: f64 = 0.37;

fn open_from_mask(n: usize, edge_mask: u64, imask: u32, omask: u32) -> OpenGraph {
    let nodes: Vec<Node> = (0..n as Node).collect();
    let mut edges = Vec::new();
    let mut k = 0;
    for a in 0..n as Node {
        for b in a + 1..n as Node {
            if edge_mask >> k & 1 == 1 {
                edges.push((a, b));
            }
            k += 1;
        }
    }
    let pick = |m: u32| (0..n as Node).filter(|v| m >> v & 1 == 1).collect();
    OpenGraph::new(Graph::from_edges(&nodes, &edges).expect("simple graph"), pick(imask), pick(omask))
        .expect("nodes exist")
}

fn label_choices(sets: &[&[MeasurementLabel]], count: usize) -> Vec<Vec<MeasurementLabel>> {
    let mut out: Vec<Vec<MeasurementLabel>> = Vec::new();
    for set in sets {
        let mut acc = vec![Vec::new()];
        for _ in 0..count {
            acc = acc
                .into_iter()
                .flat_map(|prefix: Vec<MeasurementLabel>| {
                    set.iter().map(move |l| {
                        let mut p = prefix.clone();
                        p.push(*l);
                        p
                    })
                })
                .collect();
        }
        for combo in acc {
            if !out.contains(&combo) {
                out.push(combo);
            }
        }
    }
    out
}

pub fn exhaustive_samples(max_nodes: usize) -> Vec<LabeledOpenGraph> {
    let mut out = Vec::new();
    for_each_exhaustive_sample(max_nodes, |l| out.push(l));
    out
}

/// Visits all labeled open graphs on `1..=max_nodes` nodes, every input and
/// output subset, with the non-outputs labeled from `{XY, XZ, YZ}` or from
/// `{YZ, Y, Z}`.
pub fn for_each_exhaustive_sample(max_nodes: usize, mut visit: impl FnMut(LabeledOpenGraph)) {
    let planes = [
        MeasurementLabel::xy(SAMPLE_ANGLE),
        MeasurementLabel::xz(SAMPLE_ANGLE),
        MeasurementLabel::yz(SAMPLE_ANGLE),
    ];
    let yz_family = [
        MeasurementLabel::yz(SAMPLE_ANGLE),
        MeasurementLabel::Axis(Axis::Y),
        MeasurementLabel::Axis(Axis::Z),
    ];
    for n in 1..=max_nodes {
        let pairs = n * (n - 1) / 2;
        let mut by_count: BTreeMap<usize, Vec<Vec<MeasurementLabel>>> = BTreeMap::new();
        for e in 0..1u64 << pairs {
            for omask in 0..1u32 << n {
                for imask in 0..1u32 << n {
                    let og = open_from_mask(n, e, imask, omask);
                    let non_out: Vec<Node> = og.non_outputs().into_iter().collect();
                    let choices = by_count
                        .entry(non_out.len())
                        .or_insert_with(|| label_choices(&[&planes, &yz_family], non_out.len()));
                    for combo in choices.iter() {
                        let labels = non_out.iter().copied().zip(combo.iter().copied()).collect();
                        visit(LabeledOpenGraph::new(og.clone(), labels).expect("labels cover non-outputs"));
                    }
                }
            }
        }
    }
}

fn random_label(rng: &mut ChaCha8Rng) -> MeasurementLabel {
    let t = rng.gen_range(-3.0..3.0);
    match rng.gen_range(0..6) {
        0 => MeasurementLabel::xy(t),
        1 => MeasurementLabel::xz(t),
        2 => MeasurementLabel::yz(t),
        3 => MeasurementLabel::Axis(Axis::X),
        4 => MeasurementLabel::Axis(Axis::Y),
        _ => MeasurementLabel::Axis(Axis::Z),
    }
}

/// Random labeled open graphs on `2..=max_nodes` nodes. A third of them are
/// register-logic with YZ labels and `I ⊆ O`, so the hypotheses of the
/// positive statements are exercised.
pub fn random_samples(count: usize, max_nodes: usize, seed: u64) -> Vec<LabeledOpenGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let n = rng.gen_range(2..=max_nodes.max(2));
        let nodes: Vec<Node> = (0..n as Node).collect();
        let structured = rng.gen_bool(1.0 / 3.0);
        let mut order = nodes.clone();
        order.shuffle(&mut rng);
        let n_out = rng.gen_range(1..=n);
        let outputs: NodeSet = order[..n_out].iter().copied().collect();
        let inputs: NodeSet = if structured {
            outputs.iter().copied().filter(|_| rng.gen_bool(0.6)).collect()
        } else {
            nodes.iter().copied().filter(|_| rng.gen_bool(0.4)).collect()
        };
        let mut edges = Vec::new();
        for a in 0..n as Node {
            for b in a + 1..n as Node {
                let both_measured = !outputs.contains(&a) && !outputs.contains(&b);
                if structured && both_measured {
                    continue;
                }
                if rng.gen_bool(0.45) {
                    edges.push((a, b));
                }
            }
        }
        let og = OpenGraph::new(Graph::from_edges(&nodes, &edges).expect("simple graph"), inputs, outputs)
            .expect("nodes exist");
        let labels = og
            .non_outputs()
            .into_iter()
            .map(|v| {
                let l = if structured {
                    MeasurementLabel::yz(rng.gen_range(-3.0..3.0))
                } else {
                    random_label(&mut rng)
                };
                (v, l)
            })
            .collect();
        out.push(LabeledOpenGraph::new(og, labels).expect("labels cover non-outputs"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_counts() {
        assert_eq!(exhaustive_samples(1).len(), 12);
        assert_eq!(exhaustive_samples(2).len() - 12, 2 * 4 * (1 + 2 * 5 + 17));
    }

    #[test]
    fn random_samples_are_reproducible() {
        assert_eq!(random_samples(20, 7, 3), random_samples(20, 7, 3));
    }

    #[test]
    fn small_suite_passes() {
        let r = check_theorem_suite(&exhaustive_samples(3), 6);
        assert!(r.passed(), "{:?}", r.violations.first());
        assert!(r.exercised["thm2"] > 0);
    }
}

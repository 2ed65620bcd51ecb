// SPDX-License-Identifier: Apache-2.0
//! Pattern execution over branches, determinism checks and unitary
//! extraction.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{LabeledOpenGraph, MeasurementLabel, Node};
use crate::pattern::{parse_axis, parity, Command, Pattern};
use crate::sim::linalg::{fix_phase, Matrix};
use crate::sim::state::StateVector;

pub const DEFAULT_MAX_QUBITS: usize = 20;
const ZERO_BRANCH: f64 = 1e-24;

/// Simulator qubit cap from `MBQC_MAX_QUBITS`, default 20.
pub fn max_qubits() -> usize {
    std::env::var("MBQC_MAX_QUBITS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_QUBITS)
}

#[derive(Clone, Debug, PartialEq)]
pub enum BranchPolicy {
    /// Every branch with nonzero probability, outcome 0 first.
    All,
    /// Recorded outcomes per node; unlisted nodes record 0.
    Forced(BTreeMap<Node, u8>),
    Random(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchResult {
    pub outcomes: BTreeMap<Node, u8>,
    /// Normalized output state in the pattern's output order.
    pub state: StateVector,
    pub probability: f64,
}

/// Raw branch: the state is left unnormalized.
struct RawBranch {
    outcomes: BTreeMap<Node, u8>,
    state: StateVector,
}

/// Non-inputs in `|+⟩`, then `CZ` on every edge.
pub fn prepare_graph_state(log: &LabeledOpenGraph, input: &StateVector) -> Result<StateVector> {
    let order: Vec<Node> = log.inputs().iter().copied().collect();
    let set: crate::graph::NodeSet = input.order().iter().copied().collect();
    if set != *log.inputs() || input.num_qubits() != order.len() {
        return Err(Error::Dimension("input state must live on the inputs".into()));
    }
    let mut s = input.clone();
    let h = 1.0 / 2f64.sqrt();
    for v in log.open.non_inputs() {
        s.push_qubit(v, [Complex64::new(h, 0.0); 2]);
    }
    for (a, b) in log.graph().edges() {
        s.apply_cz(a, b)?;
    }
    Ok(s)
}

fn effective_label(
    pattern: &Pattern,
    node: Node,
    sign_bits: &[Node],
    base: f64,
    outcomes: &BTreeMap<Node, u8>,
) -> Result<MeasurementLabel> {
    let label = pattern
        .graph
        .label(node)
        .ok_or_else(|| Error::Pattern(format!("output {node} is measured")))?;
    Ok(match label.angle() {
        Some(_) => {
            let s = parity(outcomes, sign_bits)?;
            label.with_angle(if s == 1 { -base } else { base })
        }
        None => *label,
    })
}

fn run_raw(pattern: &Pattern, input: &StateVector, policy: &BranchPolicy, cap: usize) -> Result<Vec<RawBranch>> {
    let mut start = input.reordered(&pattern.input_order)?;
    if start.num_qubits() > cap {
        return Err(Error::QubitCap {
            need: start.num_qubits(),
            cap,
        });
    }
    let norm0 = start.norm_sqr();
    if norm0 == 0.0 {
        return Err(Error::Dimension("input state is zero".into()));
    }
    start.scale(Complex64::new(1.0 / norm0.sqrt(), 0.0));
    let mut rng = match policy {
        BranchPolicy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    let h = 1.0 / 2f64.sqrt();
    let mut out = Vec::new();
    let mut stack = vec![(0usize, start, BTreeMap::new())];
    while let Some((mut pc, mut state, mut outcomes)) = stack.pop() {
        let mut alive = true;
        while pc < pattern.commands.len() {
            match &pattern.commands[pc] {
                Command::Prepare { node } => {
                    if state.num_qubits() + 1 > cap {
                        return Err(Error::QubitCap {
                            need: state.num_qubits() + 1,
                            cap,
                        });
                    }
                    state.push_qubit(*node, [Complex64::new(h, 0.0); 2]);
                }
                Command::Entangle { nodes: [a, b] } => state.apply_cz(*a, *b)?,
                Command::Correct {
                    node,
                    pauli,
                    bits,
                    constant,
                } => {
                    if parity(&outcomes, bits)? ^ u8::from(*constant) == 1 {
                        state.apply_pauli(*node, parse_axis(pauli)?)?;
                    }
                }
                Command::Measure { node, angle, .. } => {
                    let label = effective_label(pattern, *node, &angle.sign_bits, angle.base_angle, &outcomes)?;
                    let flip = parity(&outcomes, &angle.offset_bits)? ^ u8::from(angle.offset_constant);
                    let branch = |s: u8| state.measure_forced(*node, &label, s ^ flip);
                    match policy {
                        BranchPolicy::All => {
                            let one = branch(1)?;
                            if one.norm_sqr() > ZERO_BRANCH {
                                let mut o = outcomes.clone();
                                o.insert(*node, 1);
                                stack.push((pc + 1, one, o));
                            }
                            let zero = branch(0)?;
                            if zero.norm_sqr() > ZERO_BRANCH {
                                outcomes.insert(*node, 0);
                                state = zero;
                            } else {
                                alive = false;
                                break;
                            }
                        }
                        BranchPolicy::Forced(bits) => {
                            let s = bits.get(node).copied().unwrap_or(0) & 1;
                            state = branch(s)?;
                            outcomes.insert(*node, s);
                        }
                        BranchPolicy::Random(_) => {
                            let zero = branch(0)?;
                            let p0 = zero.norm_sqr() / state.norm_sqr();
                            let r: f64 = rng.as_mut().expect("seeded").gen();
                            if r < p0 {
                                state = zero;
                                outcomes.insert(*node, 0);
                            } else {
                                state = branch(1)?;
                                outcomes.insert(*node, 1);
                            }
                        }
                    }
                }
            }
            pc += 1;
        }
        if alive {
            out.push(RawBranch {
                outcomes,
                state: state.reordered(&pattern.output_order)?,
            });
        }
    }
    Ok(out)
}

/// Runs `pattern` on `input` (any qubit order over the inputs) with the
/// simulator cap from [`max_qubits`].
pub fn run_pattern(pattern: &Pattern, input: &StateVector, policy: &BranchPolicy) -> Result<Vec<BranchResult>> {
    run_pattern_capped(pattern, input, policy, max_qubits())
}

pub fn run_pattern_capped(
    pattern: &Pattern,
    input: &StateVector,
    policy: &BranchPolicy,
    cap: usize,
) -> Result<Vec<BranchResult>> {
    run_raw(pattern, input, policy, cap).map(|raw| {
        raw.into_iter()
            .map(|b| {
                let probability = b.state.norm_sqr();
                let mut state = b.state;
                state.normalize();
                BranchResult {
                    outcomes: b.outcomes,
                    state,
                    probability,
                }
            })
            .collect()
    })
}

/// The linear map of one branch (default: all outcomes 0) on the inputs,
/// scaled to be unitary when the branch is, with the first nonzero entry of
/// the first column made positive real. Rows and columns follow the output
/// and input orders, big-endian.
pub fn extract_unitary(pattern: &Pattern, outcomes: Option<&BTreeMap<Node, u8>>) -> Result<Matrix> {
    let k = pattern.input_order.len();
    let m = pattern.output_order.len();
    let policy = BranchPolicy::Forced(outcomes.cloned().unwrap_or_default());
    let mut mat = DMatrix::from_element(1 << m, 1 << k, Complex64::new(0.0, 0.0));
    for col in 0..1usize << k {
        let bits: Vec<u8> = (0..k).map(|j| ((col >> (k - 1 - j)) & 1) as u8).collect();
        let input = StateVector::basis(&pattern.input_order, &bits);
        let raw = run_raw(pattern, &input, &policy, max_qubits())?;
        let st = &raw[0].state;
        for (row, a) in st.amplitudes().iter().enumerate() {
            mat[(row, col)] = *a;
        }
    }
    let fro = mat.iter().map(|x| x.norm_sqr()).sum::<f64>();
    if fro < 1e-30 {
        return Err(Error::ZeroProbability { node: 0, outcome: 0 });
    }
    mat *= Complex64::new(((1usize << k) as f64 / fro).sqrt(), 0.0);
    Ok(fix_phase(&mat))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DeterminismReport {
    pub deterministic: bool,
    pub trials: usize,
    pub branches_checked: usize,
    pub min_fidelity: f64,
    pub max_probability_error: f64,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeterminismOptions {
    /// Trial 0 keeps the pattern's angles; later trials draw new base angles
    /// for every plane-labeled node.
    pub trials: usize,
    pub seed: u64,
    /// Above this many measurements, branches are sampled instead.
    pub exhaustive_limit: usize,
    pub sampled_branches: usize,
}

impl Default for DeterminismOptions {
    fn default() -> Self {
        DeterminismOptions {
            trials: 1,
            seed: 0,
            exhaustive_limit: 12,
            sampled_branches: 64,
        }
    }
}

/// All branches agree with the first up to global phase, for a random input
/// state per trial. Sampled branches are not checked for total probability.
pub fn check_determinism(pattern: &Pattern, opts: &DeterminismOptions) -> Result<DeterminismReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut rep = DeterminismReport {
        deterministic: true,
        trials: opts.trials,
        min_fidelity: 1.0,
        ..Default::default()
    };
    let exhaustive = pattern.measured_nodes().len() <= opts.exhaustive_limit;
    for trial in 0..opts.trials {
        let p = if trial == 0 {
            pattern.clone()
        } else {
            let angles = pattern
                .plane_nodes()
                .into_iter()
                .map(|v| (v, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)))
                .collect();
            pattern.with_base_angles(&angles)?
        };
        let input = StateVector::random(&p.input_order, &mut rng);
        let branches = if exhaustive {
            let b = run_pattern(&p, &input, &BranchPolicy::All)?;
            let total: f64 = b.iter().map(|x| x.probability).sum();
            rep.max_probability_error = rep.max_probability_error.max((total - 1.0).abs());
            if (total - 1.0).abs() > 1e-9 {
                rep.deterministic = false;
                rep.failures.push(format!("trial {trial}: branch probabilities sum to {total}"));
            }
            b
        } else {
            let mut b = Vec::new();
            for _ in 0..opts.sampled_branches {
                b.extend(run_pattern(&p, &input, &BranchPolicy::Random(rng.gen()))?);
            }
            b
        };
        rep.branches_checked += branches.len();
        let first = &branches[0].state;
        for br in &branches[1..] {
            let f = first.fidelity(&br.state)?;
            rep.min_fidelity = rep.min_fidelity.min(f);
            if f < 1.0 - 1e-9 {
                rep.deterministic = false;
                if rep.failures.len() < 8 {
                    rep.failures.push(format!("trial {trial}: branch {:?} has fidelity {f}", br.outcomes));
                }
            }
        }
    }
    Ok(rep)
}

/// `‖P|ψ⟩ − |ψ⟩‖` for a Pauli string.
pub fn stabilizer_residual(state: &StateVector, p: &crate::pauli::PauliString) -> Result<f64> {
    let mut t = state.clone();
    t.apply_pauli_string(p)?;
    let d: f64 = t
        .amplitudes()
        .iter()
        .zip(state.amplitudes())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    Ok(d.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::FlowCandidate;
    use crate::graph::{Graph, OpenGraph};
    use crate::pattern::pattern_from_flow;
    use crate::sim::linalg::{matrix_fidelity, single};

    fn teleport(angle: f64) -> Pattern {
        let og = OpenGraph::new(Graph::from_edges(&[1, 2], &[(1, 2)]).unwrap(), [1].into(), [2].into()).unwrap();
        let log = LabeledOpenGraph::new(og, [(1, MeasurementLabel::xy(angle))].into()).unwrap();
        let flow = FlowCandidate {
            correction: [(1, [2].into())].into(),
            layers: [(1, 1), (2, 0)].into(),
        };
        pattern_from_flow("teleport", &log, &flow, vec![1], vec![2]).unwrap()
    }

    #[test]
    fn teleport_is_hadamard_on_both_branches() {
        let p = teleport(0.0);
        let h = single(&crate::clifford::hadamard_matrix());
        for b in 0..2u8 {
            let u = extract_unitary(&p, Some(&[(1, b)].into())).unwrap();
            assert!(matrix_fidelity(&u, &h) > 1.0 - 1e-12);
        }
        let rep = check_determinism(&p, &DeterminismOptions { trials: 5, ..Default::default() }).unwrap();
        assert!(rep.deterministic, "{rep:?}");
    }

    #[test]
    fn empty_pattern_returns_input() {
        let og = OpenGraph::new(Graph::from_edges(&[1], &[]).unwrap(), [1].into(), [1].into()).unwrap();
        let log = LabeledOpenGraph::new(og, BTreeMap::new()).unwrap();
        let flow = FlowCandidate {
            correction: BTreeMap::new(),
            layers: [(1, 0)].into(),
        };
        let p = pattern_from_flow("empty", &log, &flow, vec![1], vec![1]).unwrap();
        let input = StateVector::random(&[1], &mut rand::thread_rng());
        let r = run_pattern(&p, &input, &BranchPolicy::All).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].probability - 1.0).abs() < 1e-12);
        assert!((r[0].state.fidelity(&input).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qubit_cap_is_enforced() {
        let p = teleport(0.3);
        let input = StateVector::plus(&[1]);
        assert_eq!(
            run_pattern_capped(&p, &input, &BranchPolicy::All, 1).unwrap_err(),
            Error::QubitCap { need: 2, cap: 1 }
        );
    }
}

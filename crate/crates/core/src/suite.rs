// SPDX-License-Identifier: Apache-2.0
//! The regression suite: ten criteria over the catalog, the flow theorems,
//! the pattern builders and the simulator.
//!
//! Literal claims that the simulator contradicts stay failing checks; they
//! are flagged through [`KNOWN_DISCREPANCIES`] so callers can tell them from
//! regressions.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::clifford::{hadamard_matrix, pauli_matrix, rotation, s_matrix, Mat2};
use crate::error::Result;
use crate::flow::brute::{brute_force_gflow, DEFAULT_GFLOW_CAP, DEFAULT_PAULI_CAP};
use crate::flow::catalog::check_catalog;
use crate::flow::theorems::{check_exhaustive, check_theorem_suite, random_samples, SuiteReport};
use crate::flow::{find_maximally_delayed_gflow, verify_gflow, verify_pauli_flow};
use crate::graph::grids::{generate_grid, unit_cell, GridKind};
use crate::graph::{Axis, MeasurementLabel, Node, Plane};
use crate::pattern::{ParityFlavor, Pattern};
use crate::patterns::{
    build_alternating_series_with, build_beveled_cluster_with, build_brl_pattern, build_xz_triangular_gadgets,
    cell_gate_table, compile_unit_cell_circuit, reduce_hexagonal_to_xz, reduce_triangular_to_lhz, unit_cell_flow,
    unit_cell_pattern, CellGate, DiagonalSpec, ParityStage, XzGate,
};
use crate::pauli::{elementary_stabilizer, unit_cell_correction_table, unit_cell_corrections, CellContext};
use crate::sim::linalg::{self, equal_up_to_pauli, matrix_fidelity, Matrix};
use crate::sim::oracle::{dressed_state, graph_state, project_graph_state};
use crate::sim::run::{
    check_determinism, extract_unitary, max_qubits, prepare_graph_state, run_pattern, stabilizer_residual,
    BranchPolicy, DeterminismOptions,
};
use crate::sim::StateVector;

const TOL: f64 = 1e-9;

/// Check ids whose failure is a documented disagreement between a literal
/// claim and the simulation.
pub const KNOWN_DISCREPANCIES: &[&str] = &["5.S", "5.CZ", "8.thorn-0", "8.thorn-pi/2"];

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "figure catalog"),
    (2, "theorem suite"),
    (3, "gflow finder vs brute force"),
    (4, "diagonal round trip"),
    (5, "unit-cell gate table"),
    (6, "triangle patch to LHZ"),
    (7, "unit-cell correction stabilizers"),
    (8, "XZ merge and triangular gadgets"),
    (9, "beveled-cluster count"),
    (10, "simulator hygiene"),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteCheck {
    pub id: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub known_discrepancy: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub checks: Vec<SuiteCheck>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CriterionReport {
    pub fn failures(&self) -> impl Iterator<Item = &SuiteCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Every failing check is a known discrepancy.
    pub fn only_known_failures(&self) -> bool {
        self.failures().all(|c| c.known_discrepancy)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub exhaustive_nodes: usize,
    pub random_graphs: usize,
    pub random_max_nodes: usize,
    pub oracle_graphs: usize,
    pub diagonal_samples: usize,
    pub angle_samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 7,
            exhaustive_nodes: 4,
            random_graphs: 1000,
            random_max_nodes: 7,
            oracle_graphs: 500,
            diagonal_samples: 50,
            angle_samples: 10,
        }
    }
}

#[derive(Default)]
struct Checks(Vec<SuiteCheck>);

impl Checks {
    fn push(&mut self, id: impl Into<String>, passed: bool, detail: impl Into<String>) {
        let id = id.into();
        let known_discrepancy = KNOWN_DISCREPANCIES.contains(&id.as_str());
        self.0.push(SuiteCheck {
            id,
            passed,
            detail: detail.into(),
            known_discrepancy,
        });
    }

    /// One check summarizing `failures` out of `total` cases.
    fn tally(&mut self, id: impl Into<String>, total: usize, failures: &[String], extra: &str) {
        let mut detail = format!("{}/{} ok", total - failures.len(), total);
        if !extra.is_empty() {
            detail = format!("{detail}, {extra}");
        }
        if let Some(f) = failures.first() {
            detail = format!("{detail}; first failure: {f}");
        }
        self.push(id, failures.is_empty(), detail);
    }

    /// Records an error as a failed check instead of aborting the criterion.
    fn guard(&mut self, id: &str, r: Result<()>) {
        if let Err(e) = r {
            self.push(id, false, format!("error: {e}"));
        }
    }
}

pub fn run_criterion(id: u8, opts: &SuiteOptions) -> CriterionReport {
    let start = Instant::now();
    let mut c = Checks::default();
    match id {
        1 => catalog(&mut c),
        2 => theorems(&mut c, opts),
        3 => oracle(&mut c, opts),
        4 => diagonal(&mut c, opts),
        5 => gate_table(&mut c, opts),
        6 => lhz(&mut c),
        7 => correction_stabilizers(&mut c),
        8 => xz(&mut c, opts),
        9 => beveled_count(&mut c),
        10 => hygiene(&mut c, opts),
        _ => c.push("criterion", false, format!("no criterion {id}")),
    }
    let title = CRITERIA
        .iter()
        .find(|(k, _)| *k == id)
        .map_or("unknown", |(_, t)| *t)
        .to_string();
    CriterionReport {
        id,
        title,
        passed: !c.0.is_empty() && c.0.iter().all(|x| x.passed),
        checks: c.0,
        elapsed: start.elapsed(),
    }
}

/// Criteria run on separate threads; the reports come back in id order.
pub fn run_suite(ids: &[u8], opts: &SuiteOptions) -> Vec<CriterionReport> {
    std::thread::scope(|s| {
        let handles: Vec<_> = ids.iter().map(|&k| s.spawn(move || run_criterion(k, opts))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("criterion thread panicked"))
            .collect()
    })
}

fn catalog(c: &mut Checks) {
    let reports = match check_catalog() {
        Ok(r) => r,
        Err(e) => return c.push("catalog", false, format!("error: {e}")),
    };
    let mut counts = (0, 0);
    for r in reports.iter().filter(|r| r.name.starts_with("fig4") || r.name.starts_with("fig5")) {
        if r.name.starts_with("fig4") {
            counts.0 += 1;
        } else {
            counts.1 += 1;
        }
        let failed: Vec<&str> = r.checks.iter().filter(|k| !k.passed).map(|k| k.what.as_str()).collect();
        let detail = if failed.is_empty() {
            format!("{} checks", r.checks.len())
        } else {
            format!("failed: {}", failed.join("; "))
        };
        c.push(format!("1.{}", r.name), r.passed(), detail);
    }
    c.push(
        "1.entries",
        counts == (9, 2),
        format!("{} entries of the first group, {} of the second", counts.0, counts.1),
    );
}

fn suite_summary(r: &SuiteReport) -> String {
    let exercised: Vec<String> = r.exercised.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    let mut s = format!(
        "{} samples, {} undecided, {} violations, exercised [{}]",
        r.samples,
        r.undecided,
        r.violations.len(),
        exercised.join(" ")
    );
    if let Some(v) = r.violations.first() {
        s = format!("{s}; first: sample {} breaks {}", v.sample, v.statement);
    }
    s
}

fn theorems(c: &mut Checks, opts: &SuiteOptions) {
    let ex = check_exhaustive(opts.exhaustive_nodes, DEFAULT_PAULI_CAP);
    c.push(
        format!("2.exhaustive-{}", opts.exhaustive_nodes),
        ex.passed(),
        suite_summary(&ex),
    );
    let samples = random_samples(opts.random_graphs, opts.random_max_nodes, opts.seed);
    let rnd = check_theorem_suite(&samples, DEFAULT_PAULI_CAP);
    c.push(format!("2.random-{}", opts.random_graphs), rnd.passed(), suite_summary(&rnd));
}

fn oracle(c: &mut Checks, opts: &SuiteOptions) {
    let samples = random_samples(opts.oracle_graphs, opts.random_max_nodes, opts.seed.wrapping_add(1));
    let (mut agree, mut verified, mut layer0) = (Vec::new(), Vec::new(), Vec::new());
    let mut delayed = Vec::new();
    let mut with_flow = 0;
    for (k, log) in samples.iter().enumerate() {
        let found = find_maximally_delayed_gflow(log);
        match brute_force_gflow(log, DEFAULT_GFLOW_CAP) {
            Ok(b) if b.is_some() == found.is_some() => {
                if let (Some(b), Some(f)) = (&b, &found) {
                    let (ours, best) = (f.cumulative_layer_sizes(), b.cumulative_layer_sizes());
                    let n = log.graph().node_count();
                    if (0..best.len()).any(|i| ours.get(i).copied().unwrap_or(n) < best[i]) {
                        delayed.push(format!("sample {k}: {ours:?} vs {best:?}"));
                    }
                }
            }
            Ok(b) => agree.push(format!("sample {k}: finder {} brute {}", found.is_some(), b.is_some())),
            Err(e) => agree.push(format!("sample {k}: {e}")),
        }
        let Some(f) = found else { continue };
        with_flow += 1;
        match verify_gflow(log, &f) {
            Ok(Ok(())) => {}
            Ok(Err(v)) => verified.push(format!("sample {k}: {v}")),
            Err(e) => verified.push(format!("sample {k}: {e}")),
        }
        if f.layer_sets().first() != Some(log.outputs()) {
            layer0.push(format!("sample {k}"));
        }
    }
    let extra = format!("{with_flow} with gflow");
    c.tally("3.existence", samples.len(), &agree, &extra);
    c.tally("3.maximal-delay", with_flow, &delayed, "");
    c.tally("3.verified", with_flow, &verified, "");
    c.tally("3.layer0-is-O", with_flow, &layer0, "");
}

/// Every outcome assignment of the measured nodes, outcome 0 first.
fn all_branches(p: &Pattern) -> Vec<BTreeMap<Node, u8>> {
    let m = p.measured_nodes();
    (0..1usize << m.len())
        .map(|k| {
            m.iter()
                .enumerate()
                .map(|(j, &v)| (v, ((k >> (m.len() - 1 - j)) & 1) as u8))
                .collect()
        })
        .collect()
}

/// Least fidelity over branches between the branch map and `want(branch)`.
fn worst_branch(p: &Pattern, want: impl Fn(&BTreeMap<Node, u8>) -> Matrix) -> Result<f64> {
    let mut worst = 1f64;
    for b in all_branches(p) {
        let got = extract_unitary(p, Some(&b))?;
        worst = worst.min(matrix_fidelity(&got, &want(&b)));
    }
    Ok(worst)
}

fn diagonal(c: &mut Checks, opts: &SuiteOptions) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(2));
    for n in 1..=3usize {
        let mut failures = Vec::new();
        let mut min_f = 1f64;
        for k in 0..opts.diagonal_samples {
            let alpha: Vec<f64> = (0..1 << n).map(|_| rng.gen_range(-PI..PI)).collect();
            let target = linalg::diagonal(&alpha);
            let r = DiagonalSpec::from_alpha(&alpha)
                .and_then(|s| build_brl_pattern(&s))
                .and_then(|p| worst_branch(&p, |_| target.clone()));
            match r {
                Ok(f) => {
                    min_f = min_f.min(f);
                    if f < 1.0 - TOL {
                        failures.push(format!("sample {k}: fidelity {f}"));
                    }
                }
                Err(e) => failures.push(format!("sample {k}: {e}")),
            }
        }
        c.tally(
            format!("4.n{n}"),
            opts.diagonal_samples,
            &failures,
            &format!("min fidelity {min_f:.12}"),
        );
    }
}

fn cell_bits(b: &BTreeMap<Node, u8>) -> [u8; 6] {
    let mut out = [0u8; 6];
    for j in 1..=5 {
        out[j] = b[&(j as Node)];
    }
    out
}

fn sdg_variant(g: CellGate) -> Option<Matrix> {
    let sdg = s_matrix().adjoint();
    match g {
        CellGate::S => Some(linalg::kron(&linalg::single(&sdg), &linalg::identity(2))),
        CellGate::Cz => {
            let s = linalg::single(&sdg);
            Some(linalg::cz(0, 1, 2) * linalg::kron(&s, &s))
        }
        _ => None,
    }
}

fn gate_table(c: &mut Checks, opts: &SuiteOptions) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(3));
    let thetas: Vec<f64> = (0..opts.angle_samples).map(|_| rng.gen_range(-PI..PI)).collect();
    let mut rows: Vec<(String, Vec<CellGate>)> = vec![
        ("5.I".into(), vec![CellGate::I]),
        ("5.S".into(), vec![CellGate::S]),
        ("5.H".into(), vec![CellGate::H]),
        ("5.HRY".into(), thetas.iter().map(|&t| CellGate::HRy(t)).collect()),
        ("5.CZ".into(), vec![CellGate::Cz]),
    ];
    for (id, gates) in rows.drain(..) {
        let r: Result<()> = (|| {
            let mut total = 0;
            let mut failures = Vec::new();
            let mut alt = true;
            for g in &gates {
                let p = unit_cell_pattern(*g)?;
                for b in all_branches(&p) {
                    total += 1;
                    let bits = cell_bits(&b);
                    let got = extract_unitary(&p, Some(&b))?;
                    let want = g.correction_matrix(&bits) * g.matrix();
                    let f = matrix_fidelity(&got, &want);
                    if f < 1.0 - TOL {
                        failures.push(format!("{} bits {:?} fidelity {f:.6}", g.name(), &bits[1..]));
                    }
                    if let Some(v) = sdg_variant(*g) {
                        alt &= matrix_fidelity(&got, &(g.correction_matrix(&bits) * v)) > 1.0 - TOL;
                    }
                }
            }
            let extra = if sdg_variant(gates[0]).is_some() {
                format!("same formula with S replaced by S† holds on every branch: {alt}")
            } else {
                String::new()
            };
            c.tally(id.as_str(), total, &failures, &extra);
            Ok(())
        })();
        c.guard(&id, r);
    }
    let r: Result<()> = (|| {
        let (_, ids) = unit_cell()?;
        let flow = unit_cell_flow(&ids);
        for g in cell_gate_table(0.3) {
            let p = unit_cell_pattern(g)?;
            let v = verify_pauli_flow(&p.graph, &flow)?;
            let detail = match &v {
                Ok(()) => String::new(),
                Err(e) => e.to_string(),
            };
            c.push(format!("5.pauli-flow-{}", g.name()), v.is_ok(), detail);
        }
        Ok(())
    })();
    c.guard("5.pauli-flow", r);
}

fn lhz(c: &mut Checks) {
    for n in 2..=5usize {
        let id = format!("6.n{n}");
        let r: Result<()> = (|| {
            let r = reduce_triangular_to_lhz(n)?;
            let pairs = n * (n - 1) / 2;
            let topo = r.graph.node_count() == n + pairs
                && r.pairs.len() == pairs
                && r.pattern.graph.open.is_bipartite_register_logic();
            c.push(
                format!("{id}.topology"),
                topo,
                format!("{} bases, {} parity qubits", n, r.pairs.len()),
            );
            let steps: Vec<_> = r.steps.iter().map(|&(u, _)| (u, Axis::X, 0)).collect();
            let qubits = r.patch.open.graph.node_count();
            let got = project_graph_state(&r.patch.open.graph, &steps, qubits)?;
            let want = dressed_state(&r.graph, &r.frame)?;
            let f = match got {
                Some(s) => s.fidelity(&want)?,
                None => 0.0,
            };
            c.push(
                format!("{id}.oracle"),
                f > 1.0 - TOL,
                format!("{qubits}-qubit patch, fidelity {f:.12}"),
            );
            let flow = find_maximally_delayed_gflow(&r.pattern.graph);
            let ok = r.pattern.graph.inputs() == r.pattern.graph.outputs()
                && flow.as_ref().is_some_and(|f| matches!(verify_gflow(&r.pattern.graph, f), Ok(Ok(()))));
            c.push(format!("{id}.gflow"), ok, "");
            let u = extract_unitary(&r.pattern, None)?;
            let f = matrix_fidelity(&u, &ParityStage::ramp(n).unitary(n, ParityFlavor::Z));
            c.push(format!("{id}.unitary"), f > 1.0 - TOL, format!("fidelity {f:.12}"));
            Ok(())
        })();
        c.guard(&id, r);
    }
}

/// Rows of the `Q3` table: bases of 4, 5, 5' and the explicit letters.
const Q3_ROWS: [(Axis, Axis, Axis, &str); 6] = [
    (Axis::Y, Axis::Y, Axis::Y, "Y4 Y5 Y5' Y6 Z3 Z6' Z7"),
    (Axis::Y, Axis::Y, Axis::Z, "X6 Y4 Y5 Z3 Z5' Z7"),
    (Axis::Y, Axis::Z, Axis::Y, "X6 Y4 Y5' Z3 Z5 Z6'"),
    (Axis::Y, Axis::Z, Axis::Z, "Y4 Y6 Z3 Z5 Z5'"),
    (Axis::Z, Axis::Z, Axis::Y, "Y5' Y6 Z3 Z4 Z5 Z6'"),
    (Axis::Z, Axis::Z, Axis::Z, "X6 Z3 Z4 Z5 Z5'"),
];

fn letter_set(s: &str) -> std::collections::BTreeSet<String> {
    s.split_whitespace().map(str::to_string).collect()
}

fn axis_letter(a: Axis) -> char {
    ['X', 'Y', 'Z'][a.index()]
}

fn correction_stabilizers(c: &mut Checks) {
    for (b4, b5, b5p, explicit) in Q3_ROWS {
        let row = format!("{}{}{}", axis_letter(b4), axis_letter(b5), axis_letter(b5p));
        let id = format!("7.row-{row}");
        let r: Result<()> = (|| {
            // A border cell has no 5', so only the rows with 5' in Z reduce to it.
            let variants: &[bool] = if b5p == Axis::Z { &[true, false] } else { &[true] };
            for &north in variants {
                let ctx = CellContext::new(north);
                let rule = unit_cell_correction_table(b4, b5, north.then_some(b5p))?;
                let want = if north {
                    letter_set(explicit)
                } else {
                    letter_set(explicit).into_iter().filter(|l| !l.contains('\'')).collect()
                };
                let got = letter_set(&ctx.render(&rule.stabilizer));
                let tag = if north { "" } else { "-border" };
                c.push(
                    format!("{id}{tag}.letters"),
                    got == want,
                    format!("{} with phase i^{}", ctx.render(&rule.stabilizer), rule.stabilizer.phase),
                );
                let state = graph_state(&ctx.open.graph);
                let rules = unit_cell_corrections(&ctx, b4, b5, north.then_some(b5p))?;
                let mut worst = 0f64;
                for q in rules.values() {
                    worst = worst.max(stabilizer_residual(&state, &q.stabilizer)?);
                }
                c.push(
                    format!("{id}{tag}.invariant"),
                    worst < TOL,
                    format!("{} rules, max residual {worst:.2e}", rules.len()),
                );
            }
            Ok(())
        })();
        c.guard(&id, r);
    }
    for word in ["H;H", "S;HRY(0.7)", "I;H"] {
        let id = format!("7.two-column-{word}");
        let r: Result<()> = (|| {
            let cc = compile_unit_cell_circuit(word, 1)?;
            let opts = DeterminismOptions {
                trials: 3,
                exhaustive_limit: 16,
                ..Default::default()
            };
            let rep = check_determinism(&cc.pattern, &opts)?;
            let f = matrix_fidelity(&extract_unitary(&cc.pattern, None)?, &cc.target());
            c.push(
                id.as_str(),
                rep.deterministic && f > 1.0 - TOL && cc.columns.len() == 2,
                format!(
                    "{} columns, {} branches, min fidelity {:.12}, target fidelity {f:.12}",
                    cc.columns.len(),
                    rep.branches_checked,
                    rep.min_fidelity
                ),
            );
            Ok(())
        })();
        c.guard(&id, r);
    }
}

/// Measures qubit 0 of `psi` after `pre`, against `label` on `psi` itself.
fn channels_agree(psi: &StateVector, pre: &[Mat2], lhs: &MeasurementLabel, rhs: &MeasurementLabel) -> Result<f64> {
    let v = psi.order()[0];
    let mut dressed = psi.clone();
    for m in pre {
        dressed.apply_1q(v, m)?;
    }
    let mut worst = 0f64;
    for o in 0..2 {
        let (pa, sa) = dressed.measure(v, lhs, o)?;
        let (pb, sb) = psi.measure(v, rhs, o)?;
        worst = worst.max((pa - pb).abs());
        if pb > 1e-12 {
            worst = worst.max(1.0 - sa.fidelity(&sb)?);
        }
    }
    Ok(worst)
}

fn gadget_zero_pauli(g: XzGate) -> Result<(Option<String>, Matrix)> {
    let gad = build_xz_triangular_gadgets(g)?;
    let u = extract_unitary(&gad.pattern, None)?;
    Ok((equal_up_to_pauli(&u, &gad.target).map(|p| p.to_string()), u))
}

fn xz(c: &mut Checks, opts: &SuiteOptions) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(4));
    let (s, z) = (s_matrix(), pauli_matrix(Axis::Z));
    let r: Result<()> = (|| {
        let (mut w1, mut w2) = (0f64, 0f64);
        for _ in 0..20 {
            let t = rng.gen_range(-PI..PI);
            let psi = StateVector::random(&[0, 1, 2], &mut rng);
            w1 = w1.max(channels_agree(&psi, &[s], &MeasurementLabel::yz(t), &MeasurementLabel::xz(t))?);
            w2 = w2.max(channels_agree(
                &psi,
                &[z, s],
                &MeasurementLabel::yz(t),
                &MeasurementLabel::xz(-t),
            )?);
        }
        c.push("8.merge-S", w1 < TOL, format!("max deviation {w1:.2e} over 20 states"));
        c.push("8.merge-SZ", w2 < TOL, format!("max deviation {w2:.2e} over 20 states"));
        for cbit in 0..2 {
            let lhs = linalg::single(&rotation(Axis::Y, if cbit == 0 { FRAC_PI_2 } else { -FRAC_PI_2 }));
            let pauli = if cbit == 1 { pauli_matrix(Axis::X) } else { z };
            let rhs = linalg::single(&(pauli * hadamard_matrix()));
            let f = matrix_fidelity(&lhs, &rhs);
            c.push(format!("8.ry-identity-c{cbit}"), f > 1.0 - TOL, format!("fidelity {f:.12}"));
        }
        Ok(())
    })();
    c.guard("8.merge", r);

    let r: Result<()> = (|| {
        let h = linalg::single(&hadamard_matrix());
        let id = linalg::identity(2);
        for (cid, theta, name, want) in [("8.thorn-0", 0.0, "H", &h), ("8.thorn-pi/2", FRAC_PI_2, "I", &id)] {
            let (_, u) = gadget_zero_pauli(XzGate::Thorn(theta))?;
            let got = equal_up_to_pauli(&u, want);
            let other = if equal_up_to_pauli(&u, &h).is_some() {
                "Pauli·H"
            } else if equal_up_to_pauli(&u, &id).is_some() {
                "Pauli·I"
            } else {
                "neither"
            };
            c.push(
                cid,
                got.is_some(),
                format!("expected Pauli·{name}, simulation gives {other}"),
            );
        }
        let mut failures = Vec::new();
        for _ in 0..opts.angle_samples {
            let t = rng.gen_range(-PI..PI);
            let gad = build_xz_triangular_gadgets(XzGate::Thorn(t))?;
            let w = branch_pauli_failures(&gad.pattern, &gad.target)?;
            if w > 0 {
                failures.push(format!("θ = {t}: {w} branches"));
            }
        }
        c.tally("8.thorn-random", opts.angle_samples, &failures, "all branches Pauli·R_Y(θ-π/2)H");
        for (cid, g) in [
            ("8.cz-patch", XzGate::Cz),
            ("8.idle-patch", XzGate::CzIdle),
            ("8.cnot-patch", XzGate::Cnot),
            ("8.ry-gadget", XzGate::Ry(rng.gen_range(-PI..PI))),
            ("8.h-gadget", XzGate::H),
        ] {
            let gad = build_xz_triangular_gadgets(g)?;
            let branches = all_branches(&gad.pattern).len();
            let bad = branch_pauli_failures(&gad.pattern, &gad.target)?;
            c.push(cid, bad == 0, format!("{}/{} branches match up to Pauli", branches - bad, branches));
        }
        Ok(())
    })();
    c.guard("8.gadgets", r);

    let r: Result<()> = (|| {
        let hex = reduce_hexagonal_to_xz(4, 5)?;
        let all_xz = hex.labels.values().all(|l| l.is_plane(Plane::XZ));
        let tags_ok = hex.frame.iter().all(|(_, t)| ["Z", "S", "Sdg"].contains(&t.name()));
        c.push(
            "8.hex-merge",
            all_xz && tags_ok && hex.graph.node_count() > 0,
            format!(
                "{} survivors, {} merged labels, tags {:?}",
                hex.graph.node_count(),
                hex.labels.len(),
                hex.frame.iter().map(|(_, t)| t.name()).collect::<std::collections::BTreeSet<_>>()
            ),
        );
        Ok(())
    })();
    c.guard("8.hex", r);
}

/// Branches whose map is not a Pauli times `target`.
fn branch_pauli_failures(p: &Pattern, target: &Matrix) -> Result<usize> {
    let mut bad = 0;
    for b in all_branches(p) {
        if equal_up_to_pauli(&extract_unitary(p, Some(&b))?, target).is_none() {
            bad += 1;
        }
    }
    Ok(bad)
}

fn beveled_count(c: &mut Checks) {
    for n in 1..=6usize {
        let r = generate_grid(GridKind::BeveledCluster, &[n]);
        let (ok, detail) = match r {
            Ok(og) => (
                og.graph.node_count() == n * n + 2 * n
                    && og.inputs.len() == n
                    && og.outputs.len() == n
                    && og.inputs.is_disjoint(&og.outputs),
                format!("{} nodes, want {}", og.graph.node_count(), n * n + 2 * n),
            ),
            Err(e) => (false, format!("error: {e}")),
        };
        c.push(format!("9.n{n}"), ok, detail);
    }
}

/// The patterns built by the other criteria, small enough to enumerate.
fn suite_patterns(opts: &SuiteOptions) -> Result<Vec<Pattern>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(5));
    let mut out = Vec::new();
    for n in 1..=3usize {
        let alpha: Vec<f64> = (0..1 << n).map(|_| rng.gen_range(-PI..PI)).collect();
        out.push(build_brl_pattern(&DiagonalSpec::from_alpha(&alpha)?)?);
    }
    for g in cell_gate_table(0.4) {
        out.push(unit_cell_pattern(g)?);
    }
    for n in 2..=4 {
        out.push(reduce_triangular_to_lhz(n)?.pattern);
    }
    out.push(build_beveled_cluster_with(2, &ParityStage::ramp(2))?.pattern);
    out.push(build_alternating_series_with(2, &[ParityStage::ramp(2), ParityStage::ramp(2)])?.pattern);
    out.push(compile_unit_cell_circuit("H;HRY(0.7)", 1)?.pattern);
    for g in [XzGate::Thorn(0.3), XzGate::Ry(0.5), XzGate::Cz, XzGate::Cnot] {
        out.push(build_xz_triangular_gadgets(g)?.pattern);
    }
    out.push(reduce_hexagonal_to_xz(3, 4)?.pattern);
    Ok(out)
}

fn hygiene(c: &mut Checks, opts: &SuiteOptions) {
    let patterns = match suite_patterns(opts) {
        Ok(p) => p,
        Err(e) => return c.push("10.build", false, format!("error: {e}")),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(6));
    let (mut prob_fail, mut stab_fail) = (Vec::new(), Vec::new());
    let (mut worst_p, mut worst_k, mut checks) = (0f64, 0f64, 0usize);
    for p in &patterns {
        let r: Result<()> = (|| {
            let input = StateVector::random(&p.input_order, &mut rng);
            let branches = run_pattern(p, &input, &BranchPolicy::All)?;
            let total: f64 = branches.iter().map(|b| b.probability).sum();
            worst_p = worst_p.max((total - 1.0).abs());
            if (total - 1.0).abs() > TOL {
                prob_fail.push(format!("{}: {total}", p.name));
            }
            let plus = StateVector::plus(&p.graph.inputs().iter().copied().collect::<Vec<_>>());
            let state = prepare_graph_state(&p.graph, &plus)?;
            for u in p.graph.open.non_inputs() {
                let k = elementary_stabilizer(&p.graph.open, u)?;
                let res = stabilizer_residual(&state, &k)?;
                checks += 1;
                worst_k = worst_k.max(res);
                if res > TOL {
                    stab_fail.push(format!("{}: K_{u} residual {res:.2e}", p.name));
                }
            }
            Ok(())
        })();
        if let Err(e) = r {
            prob_fail.push(format!("{}: {e}", p.name));
        }
    }
    c.tally(
        "10.probabilities",
        patterns.len(),
        &prob_fail,
        &format!("max deviation {worst_p:.2e}, cap {} qubits", max_qubits()),
    );
    c.tally("10.stabilizers", checks, &stab_fail, &format!("max residual {worst_k:.2e}"));
}

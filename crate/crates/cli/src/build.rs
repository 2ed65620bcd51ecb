// SPDX-License-Identifier: Apache-2.0
//! `mbqc build`, `mbqc compile` and `mbqc table`.

use std::path::{Path, PathBuf};

use mbqc_core::flow::{construct_rl_gflow, verify_gflow, verify_pauli_flow, FlowCandidate};
use mbqc_core::graph::grids::{generate_grid, unit_cell};
use mbqc_core::graph::io::{to_dot, GraphJson};
use mbqc_core::graph::Axis;
use mbqc_core::pattern::Pattern;
use mbqc_core::patterns::{
    build_alternating_series_with, build_beveled_cluster_with, build_brl_pattern, build_xz_triangular_gadgets,
    cell_gate_table, compile_unit_cell_circuit, reduce_hexagonal_to_xz, reduce_triangular_to_lhz, unit_cell_flow,
    unit_cell_pattern, CellGate, DiagonalSpec, ParityStage, XzGate,
};
use mbqc_core::pauli::{unit_cell_correction_table, CellContext};
use mbqc_core::sim::linalg::{equal_up_to_pauli, matrix_fidelity};
use mbqc_core::sim::run::extract_unitary;
use serde_json::{json, Value};

use crate::input::{parse_call, parse_list};
use crate::report::{matrix_json, tidy, CmdResult, Failure, Recorder};
use crate::{BuildWhat, OutArgs};

fn read_numbers(path: &Path, rec: &mut Recorder) -> Result<Vec<f64>, Failure> {
    let src = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    rec.input(src.as_bytes());
    Ok(serde_json::from_str(&src)?)
}

pub fn parse_cell_gate(s: &str) -> Result<CellGate, Failure> {
    Ok(match parse_call(s)? {
        (n, None) if n == "i" => CellGate::I,
        (n, None) if n == "s" => CellGate::S,
        (n, None) if n == "h" => CellGate::H,
        (n, Some(t)) if n == "hry" => CellGate::HRy(t),
        (n, None) if n == "cz" => CellGate::Cz,
        _ => return Err(Failure::usage(format!("unknown cell gate {s:?}; use I, S, H, HRY(θ) or CZ"))),
    })
}

pub fn parse_xz_gate(s: &str) -> Result<XzGate, Failure> {
    Ok(match parse_call(s)? {
        (n, Some(t)) if n == "thorn" => XzGate::Thorn(t),
        (n, None) if n == "identity" => XzGate::Identity,
        (n, None) if n == "h" => XzGate::H,
        (n, Some(a)) if n == "ry" => XzGate::Ry(a),
        (n, None) if n == "cz" => XzGate::Cz,
        (n, None) if n == "cz-idle" => XzGate::CzIdle,
        (n, None) if n == "cnot" => XzGate::Cnot,
        _ => {
            return Err(Failure::usage(format!(
                "unknown gadget {s:?}; use thorn(θ), identity, h, ry(α), cz, cz-idle or cnot"
            )))
        }
    })
}

/// File stem from a construction name: `cell_HRY(0.3)` becomes `cell_HRY_0.3`.
fn stem(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
        .collect();
    s.trim_end_matches('_').to_string()
}

fn paths(out: &OutArgs, name: &str) -> (PathBuf, PathBuf) {
    let json = out.out.clone().unwrap_or_else(|| PathBuf::from(format!("{}.json", stem(name))));
    let dot = out.dot.clone().unwrap_or_else(|| json.with_extension("dot"));
    (json, dot)
}

fn write_pair(out: &OutArgs, name: &str, json_text: &str, dot_text: &str) -> Result<Value, Failure> {
    let (jp, dp) = paths(out, name);
    std::fs::write(&jp, format!("{json_text}\n"))?;
    std::fs::write(&dp, dot_text)?;
    Ok(json!({ "json": jp.display().to_string(), "dot": dp.display().to_string() }))
}

/// Writes the pattern, checks its declared flow and summarizes it.
fn emit(
    rec: &mut Recorder,
    out: &OutArgs,
    p: &Pattern,
    flow: Option<(&FlowCandidate, bool)>,
    extra: Value,
) -> Result<Value, Failure> {
    emit_as(rec, out, &p.name, p, flow, extra)
}

fn emit_as(
    rec: &mut Recorder,
    out: &OutArgs,
    file_name: &str,
    p: &Pattern,
    flow: Option<(&FlowCandidate, bool)>,
    extra: Value,
) -> Result<Value, Failure> {
    rec.check("pattern validates", p.validate().is_ok(), "");
    if let Some((f, pauli)) = flow {
        let v = if pauli {
            verify_pauli_flow(&p.graph, f)?
        } else {
            verify_gflow(&p.graph, f)?
        };
        let name = if pauli { "declared pauli flow verifies" } else { "declared gflow verifies" };
        rec.check(name, v.is_ok(), v.err().map(|e| e.to_string()).unwrap_or_default());
    }
    let files = write_pair(out, file_name, &p.to_json(), &to_dot(&p.graph.open, &p.graph.labels))?;
    Ok(json!({
        "name": p.name,
        "nodes": p.graph.graph().node_count(),
        "edges": p.graph.graph().edge_count(),
        "inputs": p.input_order,
        "outputs": p.output_order,
        "measured": p.measured_nodes().len(),
        "parity_labels": p.parity_labels.len(),
        "global_phase": tidy(p.global_phase),
        "files": files,
        "construction": extra,
    }))
}

pub fn run(what: BuildWhat, out: &OutArgs, timings: bool) -> CmdResult {
    let mut rec = Recorder::new("build");
    let result = match what {
        BuildWhat::Brl {
            alpha_file,
            alpha,
            beta_file,
        } => {
            let spec = match (alpha_file, alpha, beta_file) {
                (Some(p), _, _) => DiagonalSpec::from_alpha(&read_numbers(&p, &mut rec)?)?,
                (_, Some(s), _) => {
                    rec.input(s.as_bytes());
                    DiagonalSpec::from_alpha(&parse_list::<f64>(&s)?)?
                }
                (_, _, Some(p)) => DiagonalSpec::from_beta(read_numbers(&p, &mut rec)?)?,
                _ => return Err(Failure::usage("pass --alpha-file, --alpha or --beta-file")),
            };
            let p = build_brl_pattern(&spec)?;
            let flow = construct_rl_gflow(&p.graph)?;
            let beta: Vec<f64> = spec.beta.iter().map(|&b| tidy(b)).collect();
            emit(&mut rec, out, &p, Some((&flow, false)), json!({ "beta": beta }))?
        }
        BuildWhat::Lhz { n } => {
            rec.input(format!("lhz {n}").as_bytes());
            let r = reduce_triangular_to_lhz(n)?;
            let flow = construct_rl_gflow(&r.pattern.graph)?;
            let pairs: Vec<Value> = r.pairs.iter().map(|(v, (i, j))| json!([v, i, j])).collect();
            let extra = json!({
                "patch_nodes": r.patch.open.graph.node_count(),
                "x_measurements": r.steps.len(),
                "pairs": pairs,
            });
            emit(&mut rec, out, &r.pattern, Some((&flow, false)), extra)?
        }
        BuildWhat::Beveled { n } => {
            rec.input(format!("beveled {n}").as_bytes());
            let s = build_beveled_cluster_with(n, &ParityStage::ramp(n))?;
            emit(&mut rec, out, &s.pattern, Some((&s.flow, true)), json!({ "stages": 1 }))?
        }
        BuildWhat::Alternating { n, depth } => {
            rec.input(format!("alternating {n} {depth}").as_bytes());
            let s = build_alternating_series_with(n, &vec![ParityStage::ramp(n); depth])?;
            emit(&mut rec, out, &s.pattern, Some((&s.flow, true)), json!({ "stages": depth }))?
        }
        BuildWhat::Cell { gate } => {
            rec.input(gate.as_bytes());
            let g = parse_cell_gate(&gate)?;
            let p = unit_cell_pattern(g)?;
            let (_, ids) = unit_cell()?;
            let flow = unit_cell_flow(&ids);
            emit(&mut rec, out, &p, Some((&flow, true)), json!({ "gate": g.name() }))?
        }
        BuildWhat::Hex { rows, cols } => {
            rec.input(format!("hex {rows} {cols}").as_bytes());
            let h = reduce_hexagonal_to_xz(rows, cols)?;
            let xz_outputs: Vec<_> = h.outputs.clone();
            let extra = json!({
                "triangular_nodes": h.graph.node_count(),
                "z_removed": h.removed,
                "xz_outputs": xz_outputs,
                "xz_labels": GraphJson::from_labeled(&h.xz).labels,
                "angle_signs": h.signs,
            });
            emit(&mut rec, out, &h.pattern, Some((&h.flow, true)), extra)?
        }
        BuildWhat::Gadget { gate } => {
            rec.input(gate.as_bytes());
            let g = build_xz_triangular_gadgets(parse_xz_gate(&gate)?)?;
            let extra = json!({ "gate": format!("{:?}", g.gate), "target": matrix_json(&g.target) });
            let file_name = format!("gadget_{}", gate.to_ascii_lowercase());
            emit_as(&mut rec, out, &file_name, &g.pattern, Some((&g.flow, true)), extra)?
        }
        BuildWhat::Grid { kind, dims } => {
            rec.input(format!("grid {kind} {dims}").as_bytes());
            let og = generate_grid(kind.parse()?, &parse_list::<usize>(&dims)?)?;
            let name = format!("{kind}_{}", dims.replace(',', "x"));
            let text = serde_json::to_string_pretty(&GraphJson::from_open(&og))?;
            let files = write_pair(out, &name, &text, &to_dot(&og, &Default::default()))?;
            json!({
                "name": name,
                "nodes": og.graph.node_count(),
                "edges": og.graph.edge_count(),
                "inputs": og.inputs,
                "outputs": og.outputs,
                "files": files,
            })
        }
    };
    Ok(rec.finish(result, timings))
}

pub fn compile(word: &str, width: usize, verify: bool, out: &OutArgs, timings: bool) -> CmdResult {
    let mut rec = Recorder::new("compile");
    rec.input(format!("{word} {width}").as_bytes());
    let cc = compile_unit_cell_circuit(word, width)?;
    let columns: Vec<Vec<String>> = cc
        .columns
        .iter()
        .map(|col| col.iter().map(|g| g.name()).collect())
        .collect();
    let mut extra = json!({ "word": word, "width": width, "columns": columns });
    if verify {
        let u = extract_unitary(&cc.pattern, None)?;
        let f = matrix_fidelity(&u, &cc.target());
        rec.check("unitary equals the word", f > 1.0 - 1e-9, format!("fidelity {}", tidy(f)));
        extra["unitary"] = matrix_json(&u);
    }
    let summary = emit(&mut rec, out, &cc.pattern, Some((&cc.flow, true)), extra)?;
    Ok(rec.finish(summary, timings))
}

/// `X^(...) Z^(...)` with exponents as sums of outcome bits, read off by
/// probing the linear correction map.
fn correction_formula(g: CellGate) -> Vec<String> {
    let probe = |j: Option<usize>| {
        let mut b = [0u8; 6];
        if let Some(j) = j {
            b[j] = 1;
        }
        g.correction(&b)
    };
    let base = probe(None);
    (0..2)
        .map(|w| {
            let part = |comp: usize, letter: &str| {
                let get = |c: [(u8, u8); 2]| if comp == 0 { c[w].0 } else { c[w].1 };
                let mut terms: Vec<String> = Vec::new();
                if get(base) == 1 {
                    terms.push("1".into());
                }
                for j in 1..=5 {
                    if get(probe(Some(j))) != get(base) {
                        terms.push(format!("b{j}"));
                    }
                }
                (!terms.is_empty()).then(|| format!("{letter}^({})", terms.join("+")))
            };
            let s: Vec<String> = [part(0, "X"), part(1, "Z")].into_iter().flatten().collect();
            if s.is_empty() {
                "I".into()
            } else {
                s.join(" ")
            }
        })
        .collect()
}

pub fn table(timings: bool) -> CmdResult {
    let mut rec = Recorder::new("table");
    let cells: Vec<Value> = cell_gate_table(0.3)
        .into_iter()
        .map(|g| {
            let st = g.setting();
            let theta = match g {
                CellGate::HRy(_) => "(-1)^(1+b1) θ".to_string(),
                _ => format!("{}", tidy(st.theta2)),
            };
            let gate = match g {
                CellGate::HRy(_) => "HRY(θ)".to_string(),
                _ => g.name(),
            };
            json!({
                "gate": gate,
                "m4": format!("{:?}", st.m4),
                "m5": format!("{:?}", st.m5),
                "theta2": theta,
                "correction_q6": correction_formula(g)[0],
                "correction_q7": correction_formula(g)[1],
            })
        })
        .collect();
    let mut q3 = Vec::new();
    let rows = [(Axis::Y, Axis::Y), (Axis::Y, Axis::Z), (Axis::Z, Axis::Z)];
    let north = rows
        .iter()
        .flat_map(|&(a, b)| [(a, b, Some(Axis::Y)), (a, b, Some(Axis::Z))]);
    let border = rows.iter().map(|&(a, b)| (a, b, None));
    for (b4, b5, b5p) in north.chain(border) {
        let ctx = CellContext::new(b5p.is_some());
        let rule = unit_cell_correction_table(b4, b5, b5p)?;
        let factors: Vec<String> = rule.factors.iter().map(|&v| format!("K{}", ctx.name(v))).collect();
        q3.push(json!({
            "m4": format!("{b4:?}"),
            "m5": format!("{b5:?}"),
            "m5p": b5p.map_or("-".to_string(), |b| format!("{b:?}")),
            "factors": factors.join(" "),
            "letters": ctx.render(&rule.stabilizer),
            "phase_power_of_i": rule.stabilizer.phase,
        }));
    }
    let zero_branch: Vec<Value> = cell_gate_table(0.3)
        .into_iter()
        .map(|g| {
            let found = unit_cell_pattern(g)
                .and_then(|p| extract_unitary(&p, None))
                .ok()
                .and_then(|u| equal_up_to_pauli(&u, &g.matrix()))
                .map(|p| p.to_string());
            rec.check(format!("{} zero branch is the gate up to a Pauli", g.name()), found.is_some(), "");
            json!({ "gate": g.name(), "zero_branch_pauli": found })
        })
        .collect();
    Ok(rec.finish(
        json!({ "cell_gates": cells, "q3": q3, "simulated_zero_branch": zero_branch }),
        timings,
    ))
}

// SPDX-License-Identifier: Apache-2.0
//! `mbqc flow`.

use mbqc_core::flow::brute::{brute_force_gflow, brute_force_pauli_flow, DEFAULT_GFLOW_CAP, DEFAULT_PAULI_CAP};
use mbqc_core::flow::theorems::feature_profile;
use mbqc_core::flow::{find_maximally_delayed_gflow, verify_gflow, verify_pauli_flow, FlowCandidate};
use serde_json::{json, Value};

use crate::input::read_graph;
use crate::report::{CmdResult, Failure, Recorder};
use crate::FlowMode;

fn flow_json(f: &Option<FlowCandidate>) -> Value {
    match f {
        Some(f) => json!({ "found": true, "flow": f, "cumulative_layer_sizes": f.cumulative_layer_sizes() }),
        None => json!({ "found": false }),
    }
}

pub fn run(mode: FlowMode, timings: bool) -> CmdResult {
    match mode {
        FlowMode::Verify { graph, flow, pauli } => {
            let mut rec = Recorder::new(if pauli { "flow verify --pauli" } else { "flow verify" });
            let g = read_graph(&graph, &mut rec)?;
            let cand: FlowCandidate = match (&flow, &g.entry) {
                (Some(path), _) => {
                    let src = std::fs::read_to_string(path)?;
                    rec.input(src.as_bytes());
                    serde_json::from_str(&src)?
                }
                (None, Some(e)) => e
                    .expect
                    .flow
                    .as_ref()
                    .map(|f| f.candidate())
                    .ok_or_else(|| Failure::usage(format!("{graph} stores no flow; pass --flow")))?,
                (None, None) => return Err(Failure::usage("pass --flow with a candidate")),
            };
            let check = if pauli {
                verify_pauli_flow(&g.graph, &cand)?
            } else {
                verify_gflow(&g.graph, &cand)?
            };
            let kind = if pauli { "pauli flow" } else { "gflow" };
            let violation = check.as_ref().err().map(|v| v.to_string());
            rec.check(kind, check.is_ok(), violation.clone().unwrap_or_default());
            Ok(rec.finish(json!({ "valid": check.is_ok(), "violation": violation }), timings))
        }
        FlowMode::Find { graph } => {
            let mut rec = Recorder::new("flow find");
            let g = read_graph(&graph, &mut rec)?;
            let f = find_maximally_delayed_gflow(&g.graph);
            if f.is_none() {
                eprintln!("no gflow");
            }
            Ok(rec.finish(flow_json(&f), timings))
        }
        FlowMode::Profile { graph, cap } => {
            let mut rec = Recorder::new("flow profile");
            let g = read_graph(&graph, &mut rec)?;
            rec.input(&cap.to_le_bytes());
            let p = feature_profile(&g.graph, cap);
            Ok(rec.finish(serde_json::to_value(p)?, timings))
        }
        FlowMode::Brute { graph, pauli, cap } => {
            let mut rec = Recorder::new(if pauli { "flow brute --pauli" } else { "flow brute" });
            let g = read_graph(&graph, &mut rec)?;
            let cap = cap.unwrap_or(if pauli { DEFAULT_PAULI_CAP } else { DEFAULT_GFLOW_CAP });
            rec.input(&cap.to_le_bytes());
            let f = if pauli {
                brute_force_pauli_flow(&g.graph, cap)?
            } else {
                brute_force_gflow(&g.graph, cap)?
            };
            if f.is_none() {
                eprintln!("no {}", if pauli { "pauli flow" } else { "gflow" });
            }
            Ok(rec.finish(flow_json(&f), timings))
        }
    }
}

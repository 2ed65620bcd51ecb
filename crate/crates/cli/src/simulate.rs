// SPDX-License-Identifier: Apache-2.0
//! `mbqc simulate`.

use std::collections::BTreeMap;

use mbqc_core::graph::Node;
use mbqc_core::patterns::parse_gate_word;
use mbqc_core::sim::linalg::{equal_up_to_pauli, identity, matrix_fidelity};
use mbqc_core::sim::run::{extract_unitary, run_pattern, BranchPolicy};
use mbqc_core::sim::state::StateVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::input::read_pattern;
use crate::report::{matrix_json, tidy, CmdResult, Failure, Recorder};
use crate::SimulateArgs;

fn parse_forced(s: &str) -> Result<BTreeMap<Node, u8>, Failure> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|kv| {
            let bad = || Failure::usage(format!("cannot parse {kv:?}; want node=bit"));
            let (k, v) = kv.split_once('=').ok_or_else(bad)?;
            let node: Node = k.trim().parse().map_err(|_| bad())?;
            match v.trim() {
                "0" => Ok((node, 0)),
                "1" => Ok((node, 1)),
                _ => Err(bad()),
            }
        })
        .collect()
}

fn input_state(spec: &str, order: &[Node], seed: u64) -> Result<StateVector, Failure> {
    match spec {
        "plus" => Ok(StateVector::plus(order)),
        "random" => Ok(StateVector::random(order, &mut ChaCha8Rng::seed_from_u64(seed))),
        s => {
            let bits = s
                .strip_prefix("basis:")
                .ok_or_else(|| Failure::usage(format!("unknown input {s:?}; use plus, random or basis:0101")))?;
            let bits: Vec<u8> = bits
                .chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(Failure::usage(format!("bad basis bit {c:?}"))),
                })
                .collect::<Result<_, _>>()?;
            if bits.len() != order.len() {
                return Err(Failure::usage(format!(
                    "basis state has {} bits for {} inputs",
                    bits.len(),
                    order.len()
                )));
            }
            Ok(StateVector::basis(order, &bits))
        }
    }
}

pub fn run(args: &SimulateArgs, timings: bool) -> CmdResult {
    let mut rec = Recorder::new("simulate");
    let p = read_pattern(&args.pattern, &mut rec)?;
    let policy = match (&args.forced, args.sample) {
        (Some(f), _) => BranchPolicy::Forced(parse_forced(f)?),
        (None, Some(seed)) => BranchPolicy::Random(seed),
        (None, None) if args.all => BranchPolicy::All,
        (None, None) => BranchPolicy::Forced(BTreeMap::new()),
    };
    rec.input(format!("{policy:?} {} {}", args.input, args.seed).as_bytes());
    let input = input_state(&args.input, &p.input_order, args.seed)?;
    let branches = run_pattern(&p, &input, &policy)?;
    let target = match &args.expect {
        Some(word) => {
            let width = p.output_order.len();
            let gates = parse_gate_word(word)?;
            Some(gates.iter().fold(identity(1 << width), |m, g| g.matrix(width) * m))
        }
        None => None,
    };
    let first = &branches[0].state;
    let mut listed = Vec::new();
    let mut min_fid: f64 = 1.0;
    let mut unmatched = 0;
    for b in &branches {
        let f = first.fidelity(&b.state)?;
        min_fid = min_fid.min(f);
        let mut entry = json!({
            "outcomes": b.outcomes,
            "probability": tidy(b.probability),
            "fidelity_to_first": tidy(f),
        });
        if let Some(t) = &target {
            let pauli = equal_up_to_pauli(&extract_unitary(&p, Some(&b.outcomes))?, t);
            unmatched += usize::from(pauli.is_none());
            entry["pauli"] = json!(pauli.map(|q| q.to_string()));
        }
        listed.push(entry);
    }
    let all = matches!(policy, BranchPolicy::All);
    if all {
        let total: f64 = branches.iter().map(|b| b.probability).sum();
        rec.check("probabilities sum to 1", (total - 1.0).abs() < 1e-9, format!("sum {}", tidy(total)));
    }
    if target.is_some() {
        rec.check(
            "every branch is the word up to a Pauli",
            unmatched == 0,
            format!("{unmatched} of {} branches differ", branches.len()),
        );
    }
    let mut result = json!({
        "pattern": p.name,
        "measured": p.measured_nodes().len(),
        "outputs": p.output_order,
        "deterministic": all.then_some(min_fid > 1.0 - 1e-9),
        "branches": listed,
    });
    if args.extract {
        let forced = match &policy {
            BranchPolicy::Forced(m) => Some(m),
            _ => None,
        };
        let u = extract_unitary(&p, forced)?;
        if let Some(t) = &target {
            result["fidelity_to_word"] = json!(tidy(matrix_fidelity(&u, t)));
        }
        result["unitary"] = matrix_json(&u);
    }
    Ok(rec.finish(result, timings))
}

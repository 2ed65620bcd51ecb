// SPDX-License-Identifier: Apache-2.0
//! `mbqc paper-suite`.

use mbqc_core::suite::{run_suite, SuiteOptions, CRITERIA};
use serde_json::json;

use crate::input::parse_list;
use crate::report::{CmdResult, Recorder};
use crate::SuiteArgs;

pub fn run(args: &SuiteArgs, timings: bool) -> (CmdResult, bool) {
    let ids: Vec<u8> = match &args.only {
        Some(s) => match parse_list(s) {
            Ok(v) => v,
            Err(e) => return (Err(e), false),
        },
        None => CRITERIA.iter().map(|c| c.0).collect(),
    };
    if let Some(bad) = ids.iter().find(|i| !CRITERIA.iter().any(|c| c.0 == **i)) {
        return (Err(crate::report::Failure::usage(format!("no criterion {bad}"))), false);
    }
    let opts = SuiteOptions {
        seed: args.seed,
        exhaustive_nodes: args.exhaustive,
        random_graphs: args.random,
        ..SuiteOptions::default()
    };
    let mut rec = Recorder::new("paper-suite");
    rec.input(format!("{ids:?} {opts:?}").as_bytes());
    let reports = run_suite(&ids, &opts);
    let mut all_known = true;
    for r in &reports {
        eprintln!(
            "{} criterion {} {} ({} checks)",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.title,
            r.checks.len()
        );
        for c in r.failures() {
            let tag = if c.known_discrepancy { "known" } else { "unexpected" };
            eprintln!("    {tag}: {} {}", c.id, c.detail);
        }
        all_known &= r.only_known_failures();
        rec.check(format!("criterion {}", r.id), r.passed, r.title.clone());
        rec.time(format!("criterion {}", r.id), r.elapsed.as_secs_f64() * 1e3);
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    eprintln!("{passed}/{} criteria passed", reports.len());
    let report = rec.finish(json!({ "criteria": reports }), timings);
    (Ok(report), args.allow_known && all_known)
}

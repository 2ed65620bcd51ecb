// SPDX-License-Identifier: Apache-2.0
//! Bundled example graphs with their expected flow verdicts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::flow::brute::{brute_force_gflow, brute_force_pauli_flow, DEFAULT_GFLOW_CAP, DEFAULT_PAULI_CAP};
use crate::flow::theorems::feature_profile;
use crate::flow::{find_maximally_delayed_gflow, verify_gflow, verify_pauli_flow, FlowCandidate};
use crate::graph::io::GraphJson;
use crate::graph::{LabeledOpenGraph, Node, NodeSet};

const SOURCES: &[(&str, &str)] = &[
    ("fig1a", include_str!("../../catalog/fig1a.json")),
    ("fig1b", include_str!("../../catalog/fig1b.json")),
    ("fig4a", include_str!("../../catalog/fig4a.json")),
    ("fig4b", include_str!("../../catalog/fig4b.json")),
    ("fig4c", include_str!("../../catalog/fig4c.json")),
    ("fig4d", include_str!("../../catalog/fig4d.json")),
    ("fig4e", include_str!("../../catalog/fig4e.json")),
    ("fig4f", include_str!("../../catalog/fig4f.json")),
    ("fig4g", include_str!("../../catalog/fig4g.json")),
    ("fig4h", include_str!("../../catalog/fig4h.json")),
    ("fig4i", include_str!("../../catalog/fig4i.json")),
    ("fig5a", include_str!("../../catalog/fig5a.json")),
    ("fig5b", include_str!("../../catalog/fig5b.json")),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedFlow {
    pub kind: String,
    pub correction: BTreeMap<Node, NodeSet>,
    pub layers: BTreeMap<Node, usize>,
}

impl ExpectedFlow {
    pub fn candidate(&self) -> FlowCandidate {
        FlowCandidate {
            correction: self.correction.clone(),
            layers: self.layers.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Variant {
    pub remove: Vec<Node>,
    pub gflow: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub gflow: bool,
    pub pauli_flow: bool,
    #[serde(default)]
    pub flow: Option<ExpectedFlow>,
    #[serde(default)]
    pub features: BTreeMap<String, bool>,
    #[serde(default)]
    pub variants: Vec<Variant>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub graph: GraphJson,
    pub expect: Expectation,
}

impl CatalogEntry {
    pub fn labeled(&self) -> Result<LabeledOpenGraph> {
        self.graph.to_labeled()
    }
}

pub fn entries() -> Vec<CatalogEntry> {
    SOURCES
        .iter()
        .map(|(name, src)| {
            serde_json::from_str(src).unwrap_or_else(|e| panic!("catalog entry {name} is malformed: {e}"))
        })
        .collect()
}

pub fn entry(name: &str) -> Option<CatalogEntry> {
    entries().into_iter().find(|e| e.name == name)
}

pub fn source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub what: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub checks: Vec<Check>,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn without(log: &LabeledOpenGraph, remove: &[Node]) -> Result<LabeledOpenGraph> {
    let mut j = GraphJson::from_labeled(log);
    let gone: NodeSet = remove.iter().copied().collect();
    j.nodes.retain(|v| !gone.contains(v));
    j.edges.retain(|e| !gone.contains(&e[0]) && !gone.contains(&e[1]));
    j.inputs.retain(|v| !gone.contains(v));
    j.outputs.retain(|v| !gone.contains(v));
    j.labels.retain(|v, _| !gone.contains(v));
    j.to_labeled()
}

pub fn check_entry(e: &CatalogEntry) -> Result<EntryReport> {
    let log = e.labeled()?;
    let mut checks = Vec::new();
    let mut push = |what: String, passed: bool| checks.push(Check { what, passed });
    let found = find_maximally_delayed_gflow(&log);
    push(format!("finder gflow = {}", e.expect.gflow), found.is_some() == e.expect.gflow);
    if let Some(f) = &found {
        push("found gflow verifies".into(), verify_gflow(&log, f)?.is_ok());
        push("found gflow has layer 0 = O".into(), f.layer_sets()[0] == *log.outputs());
    }
    let brute = brute_force_gflow(&log, DEFAULT_GFLOW_CAP.max(log.open.non_outputs().len()))?;
    push(format!("brute-force gflow = {}", e.expect.gflow), brute.is_some() == e.expect.gflow);
    let pauli = brute_force_pauli_flow(&log, DEFAULT_PAULI_CAP.max(log.open.non_outputs().len()))?;
    push(format!("brute-force Pauli flow = {}", e.expect.pauli_flow), pauli.is_some() == e.expect.pauli_flow);
    if let Some(p) = &pauli {
        push("found Pauli flow verifies".into(), verify_pauli_flow(&log, p)?.is_ok());
    }
    if let Some(flow) = &e.expect.flow {
        let cand = flow.candidate();
        let ok = match flow.kind.as_str() {
            "gflow" => verify_gflow(&log, &cand)?.is_ok(),
            _ => verify_pauli_flow(&log, &cand)?.is_ok(),
        };
        push(format!("stated {} verifies", flow.kind), ok);
        if flow.kind == "gflow" {
            push(
                "stated gflow is also a Pauli flow".into(),
                verify_pauli_flow(&log, &cand)?.is_ok(),
            );
        }
    }
    let profile = serde_json::to_value(feature_profile(&log, DEFAULT_PAULI_CAP))?;
    for (flag, want) in &e.expect.features {
        let got = profile.get(flag).and_then(|v| v.as_bool());
        push(format!("{flag} = {want}"), got == Some(*want));
    }
    for v in &e.expect.variants {
        let reduced = without(&log, &v.remove)?;
        push(
            format!("without {:?}: gflow = {}", v.remove, v.gflow),
            find_maximally_delayed_gflow(&reduced).is_some() == v.gflow
                && brute_force_gflow(&reduced, DEFAULT_GFLOW_CAP)?.is_some() == v.gflow,
        );
    }
    Ok(EntryReport {
        name: e.name.clone(),
        checks,
    })
}

pub fn check_catalog() -> Result<Vec<EntryReport>> {
    entries().iter().map(check_entry).collect()
}

// SPDX-License-Identifier: Apache-2.0
//! Reading graphs, catalog entries and patterns.

use std::path::Path;

use mbqc_core::flow::catalog::{self, CatalogEntry};
use mbqc_core::graph::io::GraphJson;
use mbqc_core::graph::LabeledOpenGraph;
use mbqc_core::pattern::Pattern;
use serde_json::Value;

use crate::report::{Failure, Recorder};

pub struct GraphInput {
    pub graph: LabeledOpenGraph,
    pub entry: Option<CatalogEntry>,
}

/// A file path, or the name of a bundled catalog entry such as `fig4a` or
/// `fig4a.json` when no such file exists.
pub fn read_source(arg: &str) -> Result<String, Failure> {
    let p = Path::new(arg);
    if p.exists() {
        return Ok(std::fs::read_to_string(p)?);
    }
    let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or(arg);
    catalog::source(stem)
        .map(str::to_string)
        .ok_or_else(|| Failure::usage(format!("{arg}: no such file or catalog entry")))
}

/// Plain graph JSON or a catalog entry, which wraps one under `graph`.
pub fn read_graph(arg: &str, rec: &mut Recorder) -> Result<GraphInput, Failure> {
    let src = read_source(arg)?;
    rec.input(src.as_bytes());
    let v: Value = serde_json::from_str(&src)?;
    if v.get("graph").is_some() && v.get("expect").is_some() {
        let entry: CatalogEntry = serde_json::from_value(v)?;
        return Ok(GraphInput {
            graph: entry.labeled()?,
            entry: Some(entry),
        });
    }
    let j: GraphJson = serde_json::from_value(v)?;
    Ok(GraphInput {
        graph: j.to_labeled()?,
        entry: None,
    })
}

pub fn read_pattern(path: &Path, rec: &mut Recorder) -> Result<Pattern, Failure> {
    let src = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    rec.input(src.as_bytes());
    Ok(Pattern::from_json(&src)?)
}

/// `name` or `name(x)`, lowercased, with the optional number.
pub fn parse_call(s: &str) -> Result<(String, Option<f64>), Failure> {
    let s = s.trim();
    let bad = || Failure::usage(format!("cannot parse {s:?}"));
    match s.find('(') {
        None => Ok((s.to_ascii_lowercase(), None)),
        Some(i) => {
            let inner = s[i + 1..].strip_suffix(')').ok_or_else(bad)?;
            let x: f64 = inner.trim().parse().map_err(|_| bad())?;
            Ok((s[..i].trim().to_ascii_lowercase(), Some(x)))
        }
    }
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, Failure> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Failure::usage(format!("cannot parse {x:?} in {s:?}")))
        })
        .collect()
}

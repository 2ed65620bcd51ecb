// SPDX-License-Identifier: Apache-2.0
//! JSON and DOT forms of (labeled) open graphs.
//!
//! ```json
//! {"nodes":[1,2,3],"edges":[[1,3],[2,3]],"inputs":[2],"outputs":[2,3],
//!  "labels":{"1":{"kind":"YZ","angle":0.5}}}
//! ```
//!
//! Label kinds are `XY`, `XZ`, `YZ` (with `angle`) and `X`, `Y`, `Z`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, LabeledOpenGraph, MeasurementLabel, Node, OpenGraph};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
}

impl From<&MeasurementLabel> for LabelJson {
    fn from(l: &MeasurementLabel) -> Self {
        LabelJson {
            kind: l.kind().to_string(),
            angle: l.angle(),
        }
    }
}

impl LabelJson {
    pub fn to_label(&self, v: Node) -> Result<MeasurementLabel> {
        MeasurementLabel::from_kind(&self.kind, self.angle).map_err(|m| Error::BadLabel(v, m))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub nodes: Vec<Node>,
    pub edges: Vec<[Node; 2]>,
    #[serde(default)]
    pub inputs: Vec<Node>,
    #[serde(default)]
    pub outputs: Vec<Node>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<Node, LabelJson>,
}

impl GraphJson {
    pub fn from_open(og: &OpenGraph) -> Self {
        GraphJson {
            nodes: og.graph.nodes().collect(),
            edges: og.graph.edges().into_iter().map(|(a, b)| [a, b]).collect(),
            inputs: og.inputs.iter().copied().collect(),
            outputs: og.outputs.iter().copied().collect(),
            labels: BTreeMap::new(),
        }
    }

    pub fn from_labeled(log: &LabeledOpenGraph) -> Self {
        let mut j = Self::from_open(&log.open);
        j.labels = log.labels.iter().map(|(&v, l)| (v, l.into())).collect();
        j
    }

    pub fn to_open(&self) -> Result<OpenGraph> {
        let edges: Vec<(Node, Node)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        let g = Graph::from_edges(&self.nodes, &edges)?;
        OpenGraph::new(
            g,
            self.inputs.iter().copied().collect(),
            self.outputs.iter().copied().collect(),
        )
    }

    pub fn to_labeled(&self) -> Result<LabeledOpenGraph> {
        let labels = self
            .labels
            .iter()
            .map(|(&v, l)| Ok((v, l.to_label(v)?)))
            .collect::<Result<_>>()?;
        LabeledOpenGraph::new(self.to_open()?, labels)
    }
}

pub fn labeled_from_json(s: &str) -> Result<LabeledOpenGraph> {
    serde_json::from_str::<GraphJson>(s)?.to_labeled()
}

pub fn labeled_to_json(log: &LabeledOpenGraph) -> String {
    serde_json::to_string_pretty(&GraphJson::from_labeled(log)).expect("serializable")
}

fn color(l: Option<&MeasurementLabel>) -> &'static str {
    match l.map(MeasurementLabel::kind) {
        Some("XY") => "red",
        Some("XZ") => "orange",
        Some("YZ") => "blue",
        Some("X") => "darkgreen",
        Some("Y") => "purple",
        Some("Z") => "gray40",
        _ => "black",
    }
}

/// Inputs are double circles, outputs dashed, label kind sets the color.
pub fn to_dot(og: &OpenGraph, labels: &BTreeMap<Node, MeasurementLabel>) -> String {
    let mut s = String::from("graph G {\n  node [shape=circle];\n");
    for v in og.graph.nodes() {
        let l = labels.get(&v);
        let shape = if og.inputs.contains(&v) { "doublecircle" } else { "circle" };
        let style = if og.outputs.contains(&v) { "dashed" } else { "solid" };
        let text = l.map_or(String::new(), |l| format!("\\n{}", l.kind()));
        let _ = writeln!(
            s,
            "  {v} [label=\"{v}{text}\", shape={shape}, style={style}, color={}];",
            color(l)
        );
    }
    for (a, b) in og.graph.edges() {
        let _ = writeln!(s, "  {a} -- {b};");
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let txt = r#"{"nodes":[1,2,3],"edges":[[1,3],[2,3]],"inputs":[2],"outputs":[2,3],
                      "labels":{"1":{"kind":"YZ","angle":0.5}}}"#;
        let log = labeled_from_json(txt).unwrap();
        assert_eq!(labeled_from_json(&labeled_to_json(&log)).unwrap(), log);
    }

    #[test]
    fn unknown_kind_is_a_label_error() {
        let txt = r#"{"nodes":[1,2],"edges":[[1,2]],"inputs":[],"outputs":[2],
                      "labels":{"1":{"kind":"QQ"}}}"#;
        assert!(matches!(labeled_from_json(txt), Err(Error::BadLabel(1, _))));
    }

    #[test]
    fn dot_marks_inputs_and_outputs() {
        let log = labeled_from_json(
            r#"{"nodes":[1,2],"edges":[[1,2]],"inputs":[1],"outputs":[2],"labels":{"1":{"kind":"XY","angle":0}}}"#,
        )
        .unwrap();
        let d = to_dot(&log.open, &log.labels);
        assert!(d.contains("1 [label=\"1\\nXY\", shape=doublecircle, style=solid, color=red]"));
        assert!(d.contains("style=dashed"));
        assert!(d.contains("1 -- 2;"));
    }
}

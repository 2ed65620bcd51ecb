// SPDX-License-Identifier: Apache-2.0
//! Measurement patterns: command lists with adaptive angles and outcome
//! corrections, their JSON form, and the standard construction from a flow.
//!
//! ```json
//! {"op":"prepare","node":2}
//! {"op":"entangle","nodes":[1,2]}
//! {"op":"measure","node":1,"kind":"XY","angle":{"base_angle":0.3,"sign_bits":[],"offset_bits":[]}}
//! {"op":"correct","node":2,"pauli":"X","bits":[1],"constant":false}
//! ```
//!
//! A measurement uses the angle `(-1)^s · base_angle`, where `s` is the parity
//! of the outcomes in `sign_bits`. The recorded outcome is the observed
//! eigenvalue bit (0 for `+1`) xor the parity of `offset_bits` xor
//! `offset_constant`. A correction applies its Pauli when the parity of its
//! bits xor `constant` is 1.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::FlowCandidate;
use crate::graph::io::GraphJson;
use crate::graph::{sym_diff, Axis, LabeledOpenGraph, MeasurementLabel, Node, NodeSet, Plane};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveAngle {
    #[serde(default)]
    pub base_angle: f64,
    #[serde(default)]
    pub sign_bits: Vec<Node>,
    #[serde(default)]
    pub offset_bits: Vec<Node>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub offset_constant: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Command {
    Prepare {
        node: Node,
    },
    Entangle {
        nodes: [Node; 2],
    },
    Measure {
        node: Node,
        kind: String,
        angle: AdaptiveAngle,
    },
    Correct {
        node: Node,
        pauli: String,
        #[serde(default)]
        bits: Vec<Node>,
        #[serde(default)]
        constant: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParityFlavor {
    Z,
    X,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityLabel {
    pub support: Vec<Node>,
    pub flavor: ParityFlavor,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Pattern {
    pub name: String,
    pub graph: LabeledOpenGraph,
    pub input_order: Vec<Node>,
    pub output_order: Vec<Node>,
    pub commands: Vec<Command>,
    pub layers: Option<BTreeMap<Node, usize>>,
    pub parity_labels: BTreeMap<Node, ParityLabel>,
    pub global_phase: f64,
}

#[derive(Serialize, Deserialize)]
struct PatternJson {
    #[serde(default)]
    name: String,
    graph: GraphJson,
    input_order: Vec<Node>,
    output_order: Vec<Node>,
    commands: Vec<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    layers: Option<BTreeMap<Node, usize>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    parity_labels: BTreeMap<Node, ParityLabel>,
    #[serde(default)]
    global_phase: f64,
}

pub(crate) fn parse_axis(s: &str) -> Result<Axis> {
    match s {
        "X" => Ok(Axis::X),
        "Y" => Ok(Axis::Y),
        "Z" => Ok(Axis::Z),
        _ => Err(Error::Pattern(format!("unknown Pauli {s:?}"))),
    }
}

pub(crate) fn axis_name(a: Axis) -> &'static str {
    ["X", "Y", "Z"][a.index()]
}

/// Parity of recorded outcomes over `bits`.
pub fn parity(outcomes: &BTreeMap<Node, u8>, bits: &[Node]) -> Result<u8> {
    bits.iter().try_fold(0u8, |acc, v| {
        outcomes
            .get(v)
            .map(|b| acc ^ b)
            .ok_or_else(|| Error::Pattern(format!("bit of node {v} is read before it is measured")))
    })
}

impl Pattern {
    pub fn to_json(&self) -> String {
        let j = PatternJson {
            name: self.name.clone(),
            graph: GraphJson::from_labeled(&self.graph),
            input_order: self.input_order.clone(),
            output_order: self.output_order.clone(),
            commands: self.commands.clone(),
            layers: self.layers.clone(),
            parity_labels: self.parity_labels.clone(),
            global_phase: self.global_phase,
        };
        serde_json::to_string_pretty(&j).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Pattern> {
        let j: PatternJson = serde_json::from_str(s)?;
        let p = Pattern {
            name: j.name,
            graph: j.graph.to_labeled()?,
            input_order: j.input_order,
            output_order: j.output_order,
            commands: j.commands,
            layers: j.layers,
            parity_labels: j.parity_labels,
            global_phase: j.global_phase,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn measured_nodes(&self) -> Vec<Node> {
        self.commands
            .iter()
            .filter_map(|c| match c {
                Command::Measure { node, .. } => Some(*node),
                _ => None,
            })
            .collect()
    }

    /// Checks that the command list is executable and agrees with the graph.
    pub fn validate(&self) -> Result<()> {
        let g = self.graph.graph();
        let set = |v: &[Node]| v.iter().copied().collect::<NodeSet>();
        if set(&self.input_order) != *self.graph.inputs() || self.input_order.len() != self.graph.inputs().len() {
            return Err(Error::Pattern("input order must list each input once".into()));
        }
        if set(&self.output_order) != *self.graph.outputs() || self.output_order.len() != self.graph.outputs().len()
        {
            return Err(Error::Pattern("output order must list each output once".into()));
        }
        let mut live: NodeSet = self.graph.inputs().clone();
        let mut used: NodeSet = live.clone();
        let mut measured: NodeSet = NodeSet::new();
        let mut entangled: BTreeSet<(Node, Node)> = BTreeSet::new();
        let need = |v: Node, live: &NodeSet| {
            if live.contains(&v) {
                Ok(())
            } else {
                Err(Error::Pattern(format!("node {v} is used while not live")))
            }
        };
        let known = |bits: &[Node], measured: &NodeSet| match bits.iter().find(|b| !measured.contains(b)) {
            Some(b) => Err(Error::Pattern(format!("bit of node {b} is read before it is measured"))),
            None => Ok(()),
        };
        for c in &self.commands {
            match c {
                Command::Prepare { node } => {
                    if !g.contains(*node) || !used.insert(*node) {
                        return Err(Error::Pattern(format!("node {node} cannot be prepared")));
                    }
                    live.insert(*node);
                }
                Command::Entangle { nodes: [a, b] } => {
                    need(*a, &live)?;
                    need(*b, &live)?;
                    if !g.has_edge(*a, *b) || !entangled.insert((*a.min(b), *a.max(b))) {
                        return Err(Error::Pattern(format!("edge {a}-{b} is not a fresh graph edge")));
                    }
                }
                Command::Measure { node, kind, angle } => {
                    need(*node, &live)?;
                    let label = self
                        .graph
                        .label(*node)
                        .ok_or_else(|| Error::Pattern(format!("output {node} is measured")))?;
                    if label.kind() != kind {
                        return Err(Error::Pattern(format!("node {node} is measured as {kind}, labeled {label}")));
                    }
                    if let Some(t) = label.angle() {
                        if (t - angle.base_angle).abs() > 1e-12 {
                            return Err(Error::Pattern(format!("node {node}: base angle disagrees with label")));
                        }
                    }
                    known(&angle.sign_bits, &measured)?;
                    known(&angle.offset_bits, &measured)?;
                    live.remove(node);
                    measured.insert(*node);
                }
                Command::Correct { node, pauli, bits, .. } => {
                    need(*node, &live)?;
                    parse_axis(pauli)?;
                    known(bits, &measured)?;
                }
            }
        }
        if measured != self.graph.open.non_outputs() {
            return Err(Error::Pattern("every non-output must be measured exactly once".into()));
        }
        if live != *self.graph.outputs() {
            return Err(Error::Pattern("outputs must be live at the end".into()));
        }
        if entangled.len() != g.edge_count() {
            return Err(Error::Pattern("every graph edge must be entangled".into()));
        }
        Ok(())
    }

    /// Copy with new base angles on the given plane-labeled nodes.
    pub fn with_base_angles(&self, angles: &BTreeMap<Node, f64>) -> Result<Pattern> {
        let mut p = self.clone();
        for (&v, &t) in angles {
            let l = p
                .graph
                .labels
                .get_mut(&v)
                .ok_or_else(|| Error::Pattern(format!("node {v} has no label")))?;
            *l = l.with_angle(t);
        }
        for c in &mut p.commands {
            if let Command::Measure { node, angle, .. } = c {
                if let Some(t) = angles.get(node) {
                    angle.base_angle = *t;
                }
            }
        }
        Ok(p)
    }

    pub fn plane_nodes(&self) -> Vec<Node> {
        self.graph
            .labels
            .iter()
            .filter(|(_, l)| l.angle().is_some())
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn push_correction(&mut self, node: Node, pauli: Axis, bits: Vec<Node>, constant: bool) {
        self.commands.push(Command::Correct {
            node,
            pauli: axis_name(pauli).into(),
            bits,
            constant,
        });
    }
}

/// Sign and offset dependencies of a measurement under byproduct `X^x Z^z`.
pub fn adaptation(label: &MeasurementLabel, x: &NodeSet, z: &NodeSet) -> (NodeSet, NodeSet) {
    let xz = sym_diff(x, z);
    match label {
        MeasurementLabel::Plane(Plane::XY, _) => (x.clone(), z.clone()),
        MeasurementLabel::Plane(Plane::YZ, _) => (z.clone(), x.clone()),
        MeasurementLabel::Plane(Plane::XZ, _) => (xz, x.clone()),
        MeasurementLabel::Axis(Axis::X) => (NodeSet::new(), z.clone()),
        MeasurementLabel::Axis(Axis::Y) => (NodeSet::new(), xz),
        MeasurementLabel::Axis(Axis::Z) => (NodeSet::new(), x.clone()),
    }
}

/// Symbolic Pauli byproducts per live node, as sets of outcome nodes.
#[derive(Clone, Debug, Default)]
pub struct Byproducts {
    pub x: BTreeMap<Node, NodeSet>,
    pub z: BTreeMap<Node, NodeSet>,
}

impl Byproducts {
    pub fn of(&self, v: Node) -> (NodeSet, NodeSet) {
        (
            self.x.get(&v).cloned().unwrap_or_default(),
            self.z.get(&v).cloned().unwrap_or_default(),
        )
    }

    pub fn toggle(&mut self, v: Node, a: Axis, bit: Node) {
        let flip = |m: &mut BTreeMap<Node, NodeSet>| {
            let s = m.entry(v).or_default();
            if !s.insert(bit) {
                s.remove(&bit);
            }
        };
        match a {
            Axis::X => flip(&mut self.x),
            Axis::Z => flip(&mut self.z),
            Axis::Y => {
                flip(&mut self.x);
                flip(&mut self.z);
            }
        }
    }
}

/// Lazily scheduled commands measuring `order`: before each measurement the
/// node and its neighbors are prepared and its edges entangled.
pub struct LazyScheduler<'a> {
    log: &'a LabeledOpenGraph,
    prepared: NodeSet,
    entangled: BTreeSet<(Node, Node)>,
    pub commands: Vec<Command>,
}

impl<'a> LazyScheduler<'a> {
    pub fn new(log: &'a LabeledOpenGraph) -> Self {
        LazyScheduler {
            log,
            prepared: log.inputs().clone(),
            entangled: BTreeSet::new(),
            commands: Vec::new(),
        }
    }

    fn prepare(&mut self, v: Node) {
        if self.prepared.insert(v) {
            self.commands.push(Command::Prepare { node: v });
        }
    }

    pub fn ready(&mut self, u: Node) {
        self.prepare(u);
        let nbrs: Vec<Node> = self.log.graph().neighbors(u).iter().copied().collect();
        for &w in &nbrs {
            self.prepare(w);
        }
        for w in nbrs {
            if self.entangled.insert((u.min(w), u.max(w))) {
                self.commands.push(Command::Entangle { nodes: [u.min(w), u.max(w)] });
            }
        }
    }

    pub fn measure(&mut self, u: Node, sign: &NodeSet, offset: &NodeSet, offset_constant: bool) {
        self.ready(u);
        let label = self.log.labels[&u];
        self.commands.push(Command::Measure {
            node: u,
            kind: label.kind().into(),
            angle: AdaptiveAngle {
                base_angle: label.angle().unwrap_or(0.0),
                sign_bits: sign.iter().copied().collect(),
                offset_bits: offset.iter().copied().collect(),
                offset_constant,
            },
        });
    }

    pub fn finish(mut self) -> Vec<Command> {
        let nodes: Vec<Node> = self.log.graph().nodes().collect();
        for &v in &nodes {
            self.prepare(v);
        }
        for (a, b) in self.log.graph().edges() {
            if self.entangled.insert((a, b)) {
                self.commands.push(Command::Entangle { nodes: [a, b] });
            }
        }
        self.commands
    }
}

/// The standard pattern of a flow: measure in order of the layers (deepest
/// first, ties by node id), adapt each measurement to the accumulated
/// byproducts, and after each outcome push `X` onto `p(u)` and `Z` onto
/// `Odd(p(u))`. Outputs receive the remaining byproducts as corrections.
/// The candidate is not verified here.
pub fn pattern_from_flow(
    name: &str,
    log: &LabeledOpenGraph,
    flow: &FlowCandidate,
    input_order: Vec<Node>,
    output_order: Vec<Node>,
) -> Result<Pattern> {
    let order = flow.measurement_order(log);
    let mut by = Byproducts::default();
    let mut sched = LazyScheduler::new(log);
    let mut done = NodeSet::new();
    for &u in &order {
        let (x, z) = by.of(u);
        let (sign, offset) = adaptation(&log.labels[&u], &x, &z);
        sched.measure(u, &sign, &offset, false);
        done.insert(u);
        let p = flow
            .correction
            .get(&u)
            .ok_or_else(|| Error::MalformedCandidate(format!("no correction set for {u}")))?;
        for &v in p {
            if !done.contains(&v) {
                by.toggle(v, Axis::X, u);
            }
        }
        for v in log.graph().odd_neighborhood(p) {
            if !done.contains(&v) {
                by.toggle(v, Axis::Z, u);
            }
        }
    }
    let mut commands = sched.finish();
    for &o in &output_order {
        let (x, z) = by.of(o);
        if !x.is_empty() {
            commands.push(Command::Correct {
                node: o,
                pauli: "X".into(),
                bits: x.into_iter().collect(),
                constant: false,
            });
        }
        if !z.is_empty() {
            commands.push(Command::Correct {
                node: o,
                pauli: "Z".into(),
                bits: z.into_iter().collect(),
                constant: false,
            });
        }
    }
    let p = Pattern {
        name: name.into(),
        graph: log.clone(),
        input_order,
        output_order,
        commands,
        layers: Some(flow.layers.clone()),
        parity_labels: BTreeMap::new(),
        global_phase: 0.0,
    };
    p.validate()?;
    Ok(p)
}

/// Inputs and outputs in ascending id order.
pub fn default_orders(log: &LabeledOpenGraph) -> (Vec<Node>, Vec<Node>) {
    (
        log.inputs().iter().copied().collect(),
        log.outputs().iter().copied().collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, OpenGraph};

    fn teleport() -> Pattern {
        let og = OpenGraph::new(Graph::from_edges(&[1, 2], &[(1, 2)]).unwrap(), [1].into(), [2].into()).unwrap();
        let log = LabeledOpenGraph::new(og, [(1, MeasurementLabel::xy(0.0))].into()).unwrap();
        let flow = FlowCandidate {
            correction: [(1, [2].into())].into(),
            layers: [(1, 1), (2, 0)].into(),
        };
        pattern_from_flow("teleport", &log, &flow, vec![1], vec![2]).unwrap()
    }

    #[test]
    fn teleport_commands() {
        let p = teleport();
        assert_eq!(p.commands.len(), 4);
        assert!(matches!(&p.commands[3], Command::Correct { node: 2, pauli, bits, .. } if pauli == "X" && bits == &vec![1]));
    }

    #[test]
    fn json_round_trip() {
        let p = teleport();
        let q = Pattern::from_json(&p.to_json()).unwrap();
        assert_eq!(p, q);
        assert_eq!(q.to_json(), p.to_json());
    }

    #[test]
    fn reading_an_unmeasured_bit_is_rejected() {
        let mut p = teleport();
        p.commands.swap(2, 3);
        assert!(p.validate().is_err());
    }

    #[test]
    fn adaptation_table() {
        let x: NodeSet = [1].into();
        let z: NodeSet = [2].into();
        let (s, o) = adaptation(&MeasurementLabel::xz(0.1), &x, &z);
        assert_eq!((s, o), ([1, 2].into(), [1].into()));
        let (s, o) = adaptation(&MeasurementLabel::Axis(Axis::Y), &x, &z);
        assert_eq!((s, o), (NodeSet::new(), [1, 2].into()));
    }
}

// SPDX-License-Identifier: Apache-2.0
//! Simple graphs, open graphs and measurement labelings.

pub mod grids;
pub mod io;
pub mod rewrite;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Node = u32;
pub type NodeSet = BTreeSet<Node>;

/// Undirected simple graph with ordered adjacency sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<Node, NodeSet>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges(nodes: &[Node], edges: &[(Node, Node)]) -> Result<Self> {
        let mut g = Graph::new();
        for &v in nodes {
            if g.adj.insert(v, NodeSet::new()).is_some() {
                return Err(Error::DuplicateNode(v));
            }
        }
        for &(a, b) in edges {
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            for v in [a, b] {
                if !g.contains(v) {
                    return Err(Error::UnknownNode(v));
                }
            }
            if g.has_edge(a, b) {
                return Err(Error::DuplicateEdge(a.min(b), a.max(b)));
            }
            g.toggle_edge(a, b);
        }
        Ok(g)
    }

    pub fn add_node(&mut self, v: Node) {
        self.adj.entry(v).or_default();
    }

    pub fn contains(&self, v: Node) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        self.adj.keys().copied()
    }

    pub fn node_set(&self) -> NodeSet {
        self.nodes().collect()
    }

    /// Each edge once, as `(lo, hi)` in lexicographic order.
    pub fn edges(&self) -> Vec<(Node, Node)> {
        self.adj
            .iter()
            .flat_map(|(&a, ns)| ns.range(a + 1..).map(move |&b| (a, b)))
            .collect()
    }

    /// Panics on an unknown node; use [`Graph::try_neighbors`] for checked access.
    pub fn neighbors(&self, v: Node) -> &NodeSet {
        &self.adj[&v]
    }

    pub fn try_neighbors(&self, v: Node) -> Result<&NodeSet> {
        self.adj.get(&v).ok_or(Error::UnknownNode(v))
    }

    pub fn degree(&self, v: Node) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn has_edge(&self, a: Node, b: Node) -> bool {
        self.adj.get(&a).is_some_and(|ns| ns.contains(&b))
    }

    /// Adds the edge if absent, removes it otherwise. Both nodes must exist.
    pub fn toggle_edge(&mut self, a: Node, b: Node) {
        assert!(a != b, "self-loop {a}");
        let on = self.adj.get_mut(&a).expect("unknown node").insert(b);
        if on {
            self.adj.get_mut(&b).expect("unknown node").insert(a);
        } else {
            self.adj.get_mut(&a).unwrap().remove(&b);
            self.adj.get_mut(&b).expect("unknown node").remove(&a);
        }
    }

    pub fn add_edge(&mut self, a: Node, b: Node) {
        if !self.has_edge(a, b) {
            self.toggle_edge(a, b);
        }
    }

    pub fn remove_node(&mut self, v: Node) -> Result<()> {
        let ns = self.adj.remove(&v).ok_or(Error::UnknownNode(v))?;
        for w in ns {
            self.adj.get_mut(&w).unwrap().remove(&v);
        }
        Ok(())
    }

    /// Nodes with an odd number of neighbors in `s`.
    pub fn odd_neighborhood(&self, s: &NodeSet) -> NodeSet {
        let mut odd = NodeSet::new();
        for v in s {
            for &w in self.neighbors(*v) {
                if !odd.insert(w) {
                    odd.remove(&w);
                }
            }
        }
        odd
    }

    /// Toggles every edge inside the neighborhood of `u`.
    pub fn local_complement(&self, u: Node) -> Result<Graph> {
        let ns: Vec<Node> = self.try_neighbors(u)?.iter().copied().collect();
        let mut g = self.clone();
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                g.toggle_edge(a, b);
            }
        }
        Ok(g)
    }

    pub fn is_independent(&self, s: &NodeSet) -> bool {
        s.iter()
            .all(|v| self.neighbors(*v).iter().all(|w| !s.contains(w)))
    }

    /// Two-coloring by breadth-first search.
    pub fn is_bipartite(&self) -> bool {
        let mut color: BTreeMap<Node, bool> = BTreeMap::new();
        for start in self.nodes() {
            if color.contains_key(&start) {
                continue;
            }
            color.insert(start, false);
            let mut queue = vec![start];
            while let Some(v) = queue.pop() {
                let cv = color[&v];
                for &w in self.neighbors(v) {
                    match color.get(&w) {
                        Some(&cw) if cw == cv => return false,
                        Some(_) => {}
                        None => {
                            color.insert(w, !cv);
                            queue.push(w);
                        }
                    }
                }
            }
        }
        true
    }

    pub fn relabeled(&self, f: impl Fn(Node) -> Node) -> Result<Graph> {
        let nodes: Vec<Node> = self.nodes().map(&f).collect();
        let edges: Vec<(Node, Node)> = self.edges().into_iter().map(|(a, b)| (f(a), f(b))).collect();
        Graph::from_edges(&nodes, &edges)
    }
}

/// `Odd(a Δ b) == Odd(a) Δ Odd(b)`.
pub fn odd_symmetric_difference_law_check(g: &Graph, a: &NodeSet, b: &NodeSet) -> bool {
    let lhs = g.odd_neighborhood(&sym_diff(a, b));
    let rhs = sym_diff(&g.odd_neighborhood(a), &g.odd_neighborhood(b));
    lhs == rhs
}

pub fn sym_diff(a: &NodeSet, b: &NodeSet) -> NodeSet {
    a.symmetric_difference(b).copied().collect()
}

/// Flips membership of `v` in `s`.
pub fn toggle(s: &mut NodeSet, v: Node) {
    if !s.insert(v) {
        s.remove(&v);
    }
}

/// Graph with designated input and output sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenGraph {
    pub graph: Graph,
    pub inputs: NodeSet,
    pub outputs: NodeSet,
}

impl OpenGraph {
    pub fn new(graph: Graph, inputs: NodeSet, outputs: NodeSet) -> Result<Self> {
        for &v in inputs.iter().chain(&outputs) {
            if !graph.contains(v) {
                return Err(Error::UnknownNode(v));
            }
        }
        Ok(OpenGraph {
            graph,
            inputs,
            outputs,
        })
    }

    pub fn non_outputs(&self) -> NodeSet {
        self.graph.nodes().filter(|v| !self.outputs.contains(v)).collect()
    }

    pub fn non_inputs(&self) -> NodeSet {
        self.graph.nodes().filter(|v| !self.inputs.contains(v)).collect()
    }

    /// No edge joins two non-outputs.
    pub fn is_register_logic(&self) -> bool {
        self.graph.is_independent(&self.non_outputs())
    }

    /// Register-logic form with, in addition, no edge between outputs.
    pub fn is_bipartite_register_logic(&self) -> bool {
        self.is_register_logic() && self.graph.is_independent(&self.outputs)
    }

    pub fn has_output_output_edge(&self) -> bool {
        !self.graph.is_independent(&self.outputs)
    }

    /// Whether the graph is bipartite with the inputs forming one side.
    pub fn is_bipartite_with_inputs_as_part(&self) -> bool {
        self.graph.is_independent(&self.inputs) && self.graph.is_independent(&self.non_inputs())
    }

    pub fn local_complement(&self, u: Node) -> Result<OpenGraph> {
        Ok(OpenGraph {
            graph: self.graph.local_complement(u)?,
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
        })
    }
}

/// Register-logic form survives local complementation at a non-output.
pub fn rl_closed_under_non_output_lc(og: &OpenGraph, u: Node) -> Result<bool> {
    if !og.is_register_logic() {
        return Err(Error::Precondition("open graph is not register-logic".into()));
    }
    if !og.graph.contains(u) {
        return Err(Error::UnknownNode(u));
    }
    if og.outputs.contains(&u) {
        return Err(Error::Precondition(format!("node {u} is an output")));
    }
    Ok(og.local_complement(u)?.is_register_logic())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Plane {
    XY,
    XZ,
    YZ,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Axis {
        Axis::ALL[i]
    }
}

impl Plane {
    pub const ALL: [Plane; 3] = [Plane::XY, Plane::XZ, Plane::YZ];

    /// Axes carrying `cos θ` and `sin θ` respectively.
    pub fn frame(self) -> (Axis, Axis) {
        match self {
            Plane::XY => (Axis::X, Axis::Y),
            Plane::XZ => (Axis::Z, Axis::X),
            Plane::YZ => (Axis::Z, Axis::Y),
        }
    }

    pub fn from_axes(a: Axis, b: Axis) -> Plane {
        let mut pair = [a, b];
        pair.sort();
        match pair {
            [Axis::X, Axis::Y] => Plane::XY,
            [Axis::X, Axis::Z] => Plane::XZ,
            [Axis::Y, Axis::Z] => Plane::YZ,
            _ => panic!("degenerate plane {a:?}{b:?}"),
        }
    }
}

/// Measurement basis of a non-output node. Outcome 0 is the +1 eigenstate of
/// `n·σ` with the Bloch vector `n` given by [`MeasurementLabel::bloch`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeasurementLabel {
    Plane(Plane, f64),
    Axis(Axis),
}

impl MeasurementLabel {
    pub fn xy(t: f64) -> Self {
        MeasurementLabel::Plane(Plane::XY, t)
    }
    pub fn xz(t: f64) -> Self {
        MeasurementLabel::Plane(Plane::XZ, t)
    }
    pub fn yz(t: f64) -> Self {
        MeasurementLabel::Plane(Plane::YZ, t)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            MeasurementLabel::Plane(Plane::XY, _) => "XY",
            MeasurementLabel::Plane(Plane::XZ, _) => "XZ",
            MeasurementLabel::Plane(Plane::YZ, _) => "YZ",
            MeasurementLabel::Axis(Axis::X) => "X",
            MeasurementLabel::Axis(Axis::Y) => "Y",
            MeasurementLabel::Axis(Axis::Z) => "Z",
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match self {
            MeasurementLabel::Plane(_, t) => Some(*t),
            MeasurementLabel::Axis(_) => None,
        }
    }

    pub fn from_kind(kind: &str, angle: Option<f64>) -> std::result::Result<Self, String> {
        let plane = |p| {
            angle
                .map(|t| MeasurementLabel::Plane(p, t))
                .ok_or_else(|| format!("plane label {kind} needs an angle"))
        };
        match kind {
            "XY" => plane(Plane::XY),
            "XZ" => plane(Plane::XZ),
            "YZ" => plane(Plane::YZ),
            "X" => Ok(MeasurementLabel::Axis(Axis::X)),
            "Y" => Ok(MeasurementLabel::Axis(Axis::Y)),
            "Z" => Ok(MeasurementLabel::Axis(Axis::Z)),
            other => Err(format!("unknown label kind {other:?}")),
        }
    }

    pub fn is_axis(&self, a: Axis) -> bool {
        matches!(self, MeasurementLabel::Axis(b) if *b == a)
    }

    pub fn is_plane(&self, p: Plane) -> bool {
        matches!(self, MeasurementLabel::Plane(q, _) if *q == p)
    }

    pub fn bloch(&self) -> [f64; 3] {
        let mut n = [0.0; 3];
        match *self {
            MeasurementLabel::Plane(p, t) => {
                let (c, s) = p.frame();
                n[c.index()] = t.cos();
                n[s.index()] = t.sin();
            }
            MeasurementLabel::Axis(a) => n[a.index()] = 1.0,
        }
        n
    }

    /// Replaces the angle of a plane label; axis labels come back unchanged.
    pub fn with_angle(&self, t: f64) -> Self {
        match *self {
            MeasurementLabel::Plane(p, _) => MeasurementLabel::Plane(p, t),
            a => a,
        }
    }
}

impl fmt::Display for MeasurementLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.angle() {
            Some(t) => write!(f, "{}({t})", self.kind()),
            None => write!(f, "{}", self.kind()),
        }
    }
}

/// Open graph with a label on every non-output node.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledOpenGraph {
    pub open: OpenGraph,
    pub labels: BTreeMap<Node, MeasurementLabel>,
}

impl LabeledOpenGraph {
    pub fn new(open: OpenGraph, labels: BTreeMap<Node, MeasurementLabel>) -> Result<Self> {
        for v in open.graph.nodes() {
            let is_out = open.outputs.contains(&v);
            match (is_out, labels.contains_key(&v)) {
                (false, false) => return Err(Error::MissingLabel(v)),
                (true, true) => return Err(Error::LabeledOutput(v)),
                _ => {}
            }
        }
        if let Some(&v) = labels.keys().find(|v| !open.graph.contains(**v)) {
            return Err(Error::UnknownNode(v));
        }
        for (&v, l) in &labels {
            if let Some(t) = l.angle() {
                if !t.is_finite() {
                    return Err(Error::BadLabel(v, format!("angle {t} is not finite")));
                }
            }
        }
        Ok(LabeledOpenGraph { open, labels })
    }

    pub fn graph(&self) -> &Graph {
        &self.open.graph
    }

    pub fn inputs(&self) -> &NodeSet {
        &self.open.inputs
    }

    pub fn outputs(&self) -> &NodeSet {
        &self.open.outputs
    }

    pub fn label(&self, v: Node) -> Option<&MeasurementLabel> {
        self.labels.get(&v)
    }

    /// Every label is the rotated YZ plane.
    pub fn lambda_all_yz(&self) -> bool {
        self.labels.values().all(|l| l.is_plane(Plane::YZ))
    }

    /// Every label is the YZ plane or one of the Y and Z axes.
    pub fn lambda_subset_yz(&self) -> bool {
        self.labels.values().all(|l| {
            l.is_plane(Plane::YZ) || l.is_axis(Axis::Y) || l.is_axis(Axis::Z)
        })
    }

    pub fn has_axis_labels(&self) -> bool {
        self.labels.values().any(|l| matches!(l, MeasurementLabel::Axis(_)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[Node]) -> NodeSet {
        v.iter().copied().collect()
    }

    #[test]
    fn triangle_complements_to_path() {
        let g = Graph::from_edges(&[1, 2, 3], &[(1, 2), (2, 3), (1, 3)]).unwrap();
        let h = g.local_complement(1).unwrap();
        assert_eq!(h.edges(), vec![(1, 2), (1, 3)]);
        assert_eq!(h.local_complement(1).unwrap(), g);
    }

    #[test]
    fn star_complements_to_complete_graph() {
        let g = Graph::from_edges(&[0, 1, 2, 3], &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(g.local_complement(0).unwrap().edge_count(), 6);
    }

    #[test]
    fn odd_neighborhood_of_path_middle() {
        let g = Graph::from_edges(&[1, 2, 3], &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(g.odd_neighborhood(&set(&[2])), set(&[1, 3]));
        assert_eq!(g.odd_neighborhood(&set(&[1, 3])), NodeSet::new());
        assert_eq!(g.odd_neighborhood(&NodeSet::new()), NodeSet::new());
    }

    #[test]
    fn malformed_graphs_are_rejected() {
        assert_eq!(Graph::from_edges(&[1], &[(1, 1)]), Err(Error::SelfLoop(1)));
        assert_eq!(Graph::from_edges(&[1], &[(1, 2)]), Err(Error::UnknownNode(2)));
        assert_eq!(
            Graph::from_edges(&[1, 2], &[(1, 2), (2, 1)]),
            Err(Error::DuplicateEdge(1, 2))
        );
    }

    #[test]
    fn register_logic_predicates() {
        let star = Graph::from_edges(&[0, 1, 2], &[(0, 1), (0, 2)]).unwrap();
        let og = OpenGraph::new(star.clone(), NodeSet::new(), set(&[0])).unwrap();
        assert!(og.is_register_logic());
        assert!(og.is_bipartite_register_logic());
        for leaf in [1, 2] {
            assert!(rl_closed_under_non_output_lc(&og, leaf).unwrap());
        }
        let center_out = OpenGraph::new(star, NodeSet::new(), set(&[2])).unwrap();
        assert!(!center_out.is_register_logic());
        let rl = OpenGraph::new(
            Graph::from_edges(&[0, 1, 2], &[(0, 1), (0, 2)]).unwrap(),
            NodeSet::new(),
            set(&[0]),
        )
        .unwrap();
        assert!(rl_closed_under_non_output_lc(&rl, 0).is_err());
    }

    #[test]
    fn output_with_two_non_output_neighbors_breaks_rl_under_its_own_lc() {
        let g = Graph::from_edges(&[0, 1, 2], &[(0, 1), (0, 2)]).unwrap();
        let og = OpenGraph::new(g, NodeSet::new(), set(&[0])).unwrap();
        assert!(!og.local_complement(0).unwrap().is_register_logic());
    }

    #[test]
    fn labels_must_cover_exactly_the_non_outputs() {
        let g = Graph::from_edges(&[1, 2], &[(1, 2)]).unwrap();
        let og = OpenGraph::new(g, set(&[1]), set(&[2])).unwrap();
        assert_eq!(
            LabeledOpenGraph::new(og.clone(), BTreeMap::new()),
            Err(Error::MissingLabel(1))
        );
        let both: BTreeMap<_, _> = [(1, MeasurementLabel::xy(0.0)), (2, MeasurementLabel::xy(0.0))].into();
        assert_eq!(LabeledOpenGraph::new(og, both), Err(Error::LabeledOutput(2)));
    }

    #[test]
    fn bloch_vectors_follow_plane_frames() {
        let t = 0.3_f64;
        assert_eq!(MeasurementLabel::xy(t).bloch(), [t.cos(), t.sin(), 0.0]);
        assert_eq!(MeasurementLabel::xz(t).bloch(), [t.sin(), 0.0, t.cos()]);
        assert_eq!(MeasurementLabel::yz(t).bloch(), [0.0, t.sin(), t.cos()]);
    }
}

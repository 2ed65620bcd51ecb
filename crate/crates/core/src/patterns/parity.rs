// SPDX-License-Identifier: Apache-2.0
//! Pairwise-parity patterns on triangular cluster patches.
//!
//! X-measuring the non-parity sites of a triangle patch, each with its north
//! neighbor as `b0` and outcome 0, leaves the LHZ triangle: every parity site
//! joined to exactly two base qubits, one site per pair. The survivors carry
//! Hadamard-type tags, so an `XY` measurement on a parity site acts as a `YZ`
//! measurement on the bare triangle.
//!
//! Stages of a beveled series are chained base to base; the last stage
//! reaches the outputs through one X-measured link per wire when the depth
//! is odd. Every base is teleported once, so stage `k` acts in the `Z` basis
//! for even `k` and in the `X` basis for odd `k`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::clifford::{LocalClifford, LocalCliffordFrame};
use crate::error::{Error, Result};
use crate::flow::{construct_rl_gflow, FlowCandidate};
use crate::graph::grids::{staged_patches, triangle_patch, StagedPatches, TrianglePatch};
use crate::graph::rewrite::{absorb_stabilizer, measure_pauli_rewrite};
use crate::graph::{Axis, Graph, LabeledOpenGraph, MeasurementLabel, Node, NodeSet, OpenGraph, Plane};
use crate::pattern::{pattern_from_flow, ParityFlavor, ParityLabel, Pattern};
use crate::patterns::{layers_from_groups, pattern_for_layers, physical_angle};
use crate::sim::linalg::{self, Matrix};

/// Phases of one stage: `exp(i γ P_i P_j)` per pair `i < j` and `exp(i γ P_i)`
/// per single, with `P = Z` or `X` by the stage's flavor. Wires are indexed
/// from 0, left to right along the bases.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParityStage {
    pub pairs: BTreeMap<(usize, usize), f64>,
    pub singles: BTreeMap<usize, f64>,
}

impl ParityStage {
    /// Distinct nonzero phases on every pair and no singles.
    pub fn ramp(n: usize) -> Self {
        let mut pairs = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.insert((i, j), 0.1 + 0.07 * (i * n + j) as f64);
            }
        }
        ParityStage {
            pairs,
            singles: BTreeMap::new(),
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        for &(i, j) in self.pairs.keys() {
            if !(i < j && j < n) {
                return Err(Error::Precondition(format!("pair ({i}, {j}) is not i < j < {n}")));
            }
        }
        if let Some(&i) = self.singles.keys().find(|&&i| i >= n) {
            return Err(Error::Precondition(format!("single {i} is not below {n}")));
        }
        Ok(())
    }

    /// The stage as a `2^n` matrix, wire 0 most significant.
    pub fn unitary(&self, n: usize, flavor: ParityFlavor) -> Matrix {
        let phases: Vec<f64> = (0..1usize << n)
            .map(|x| {
                let z = |i: usize| if x >> (n - 1 - i) & 1 == 0 { 1.0 } else { -1.0 };
                let p: f64 = self.pairs.iter().map(|(&(i, j), &g)| g * z(i) * z(j)).sum();
                p + self.singles.iter().map(|(&i, &g)| g * z(i)).sum::<f64>()
            })
            .collect();
        let d = linalg::diagonal(&phases);
        match flavor {
            ParityFlavor::Z => d,
            ParityFlavor::X => {
                let h = hadamard_layer(n);
                &h * d * &h
            }
        }
    }
}

fn hadamard_layer(n: usize) -> Matrix {
    let h = linalg::single(&crate::clifford::hadamard_matrix());
    (0..n).fold(Matrix::from_element(1, 1, Complex64::new(1.0, 0.0)), |m, _| linalg::kron(&m, &h))
}

pub fn stage_flavor(k: usize) -> ParityFlavor {
    if k.is_multiple_of(2) {
        ParityFlavor::Z
    } else {
        ParityFlavor::X
    }
}

/// Applies outcome-0 X measurements in order, each with its `b0`.
fn reduce_x(graph: &Graph, steps: &[(Node, Node)]) -> Result<(Graph, LocalCliffordFrame)> {
    let mut g = graph.clone();
    let mut f = LocalCliffordFrame::new();
    for &(u, b0) in steps {
        (g, f) = measure_pauli_rewrite(&g, &f, u, Axis::X, Some(b0), 0)?;
    }
    Ok((g, f))
}

fn x_steps(patch: &TrianglePatch) -> Vec<(Node, Node)> {
    let mut xs: Vec<Node> = patch.x_sites.iter().copied().collect();
    xs.sort_by_key(|v| patch.coords[v]);
    xs.into_iter().map(|u| (u, patch.north[&u])).collect()
}

/// Wire pair of each site when every site has exactly two neighbors, both in
/// `bases`, every pair occurs once and no two bases are adjacent.
pub fn lhz_pairs(g: &Graph, bases: &[Node], sites: &NodeSet) -> Option<BTreeMap<Node, (usize, usize)>> {
    let n = bases.len();
    if sites.len() != n * (n - 1) / 2 {
        return None;
    }
    let index: BTreeMap<Node, usize> = bases.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let mut pairs = BTreeMap::new();
    let mut seen = std::collections::BTreeSet::new();
    for &v in sites {
        let nb: Vec<Node> = g.neighbors(v).iter().copied().collect();
        if nb.len() != 2 || nb.iter().any(|w| !index.contains_key(w)) {
            return None;
        }
        let (a, b) = (index[&nb[0]].min(index[&nb[1]]), index[&nb[0]].max(index[&nb[1]]));
        if !seen.insert((a, b)) {
            return None;
        }
        pairs.insert(v, (a, b));
    }
    for (i, &a) in bases.iter().enumerate() {
        if bases[i + 1..].iter().any(|&b| g.has_edge(a, b)) {
            return None;
        }
    }
    Some(pairs)
}

/// Result of turning a triangle patch into the LHZ triangle.
#[derive(Clone, Debug)]
pub struct LhzReduction {
    pub patch: TrianglePatch,
    /// `(u, b0)` in measurement order.
    pub steps: Vec<(Node, Node)>,
    /// Bare graph after the X measurements: bases and parity sites only.
    pub graph: Graph,
    /// Tags of the survivors after absorbing the top site's stabilizer.
    pub frame: LocalCliffordFrame,
    pub pairs: BTreeMap<Node, (usize, usize)>,
    /// `XY` labels to put on the patch's parity sites.
    pub physical: BTreeMap<Node, MeasurementLabel>,
    /// The triangle with the pulled `YZ` labels, `I = O` = bases.
    pub pattern: Pattern,
}

pub fn reduce_triangular_to_lhz(n: usize) -> Result<LhzReduction> {
    reduce_triangular_to_lhz_with(n, &ParityStage::ramp(n))
}

/// Only the pairs of `stage` are used; the bases are outputs here, so
/// singles are rejected.
pub fn reduce_triangular_to_lhz_with(n: usize, stage: &ParityStage) -> Result<LhzReduction> {
    if n < 2 {
        return Err(Error::Precondition("the LHZ triangle needs n ≥ 2".into()));
    }
    stage.check(n)?;
    if !stage.singles.is_empty() {
        return Err(Error::Precondition("single-wire phases need a beveled cluster".into()));
    }
    let patch = triangle_patch(n)?;
    let steps = x_steps(&patch);
    let (graph, mut frame) = reduce_x(&patch.open.graph, &steps)?;
    let pairs = lhz_pairs(&graph, &patch.bases, &patch.parity_sites)
        .ok_or_else(|| Error::Precondition("X measurements did not leave the LHZ triangle".into()))?;
    let top = *patch
        .coords
        .iter()
        .find(|(_, &(r, _))| r == 1)
        .map(|(v, _)| v)
        .expect("row 1 exists");
    absorb_stabilizer(&graph, &mut frame, top)?;
    let mut physical = BTreeMap::new();
    let mut labels = BTreeMap::new();
    let mut parity_labels = BTreeMap::new();
    for (&v, &(i, j)) in &pairs {
        let want = MeasurementLabel::yz(-2.0 * stage.pairs.get(&(i, j)).copied().unwrap_or(0.0));
        let phi = physical_angle(&frame.get(v), Plane::XY, &want)?;
        let phys = MeasurementLabel::xy(phi);
        labels.insert(v, frame.get(v).pull_label(&phys).0);
        physical.insert(v, phys);
        parity_labels.insert(
            v,
            ParityLabel {
                support: vec![patch.bases[i], patch.bases[j]],
                flavor: ParityFlavor::Z,
            },
        );
    }
    let base_set: NodeSet = patch.bases.iter().copied().collect();
    let log = LabeledOpenGraph::new(OpenGraph::new(graph.clone(), base_set.clone(), base_set)?, labels)?;
    let flow = construct_rl_gflow(&log)?;
    let mut pattern = pattern_from_flow(&format!("lhz{n}"), &log, &flow, patch.bases.clone(), patch.bases.clone())?;
    pattern.parity_labels = parity_labels;
    Ok(LhzReduction {
        patch,
        steps,
        graph,
        frame,
        pairs,
        physical,
        pattern,
    })
}

/// A beveled series compiled on its full cluster, with the data needed to
/// check it.
#[derive(Clone, Debug)]
pub struct StagedPattern {
    pub layout: StagedPatches,
    pub stages: Vec<ParityStage>,
    pub pattern: Pattern,
    pub flow: FlowCandidate,
    /// Bare graph and tags after the outcome-0 X measurements.
    pub reduced: Graph,
    pub frame: LocalCliffordFrame,
    /// Labels of the survivors seen through their tags.
    pub effective: BTreeMap<Node, MeasurementLabel>,
    /// Wire pair of each parity site, per stage.
    pub pairs: Vec<BTreeMap<Node, (usize, usize)>>,
}

impl StagedPattern {
    /// Product of the stage unitaries, first stage rightmost.
    pub fn target(&self) -> Matrix {
        let n = self.layout.outputs.len();
        self.stages
            .iter()
            .enumerate()
            .fold(linalg::identity(1 << n), |acc, (k, s)| s.unitary(n, stage_flavor(k)) * acc)
    }
}

pub fn build_beveled_cluster(n: usize) -> Result<Pattern> {
    Ok(build_beveled_cluster_with(n, &ParityStage::ramp(n))?.pattern)
}

pub fn build_beveled_cluster_with(n: usize, stage: &ParityStage) -> Result<StagedPattern> {
    build_alternating_series_with(n, std::slice::from_ref(stage))
}

pub fn build_alternating_series(n: usize, depth: usize) -> Result<Pattern> {
    let stages = vec![ParityStage::ramp(n); depth];
    Ok(build_alternating_series_with(n, &stages)?.pattern)
}

/// One triangle patch per stage. Parity sites get `XY` angles that act as
/// `YZ(-2γ)` through their tags; each base gets an `XY` angle acting as
/// `XY(2γ_i)` for its single phase.
pub fn build_alternating_series_with(n: usize, stages: &[ParityStage]) -> Result<StagedPattern> {
    if n < 2 || stages.is_empty() {
        return Err(Error::Precondition("need n ≥ 2 and at least one stage".into()));
    }
    for s in stages {
        s.check(n)?;
    }
    let layout = staged_patches(n, stages.len())?;
    let g = &layout.open.graph;
    let mut steps = Vec::new();
    for p in &layout.stages {
        steps.extend(x_steps(p));
    }
    for (i, &l) in layout.links.iter().enumerate() {
        steps.push((l, layout.outputs[i]));
    }
    let (reduced, frame) = reduce_x(g, &steps)?;
    let mut labels = BTreeMap::new();
    let mut effective = BTreeMap::new();
    let mut parity_labels = BTreeMap::new();
    let mut all_pairs = Vec::new();
    let mut groups: Vec<Vec<Node>> = vec![steps.iter().map(|s| s.0).collect()];
    for &(u, _) in &steps {
        labels.insert(u, MeasurementLabel::Axis(Axis::X));
    }
    let mut set = |v: Node, want: MeasurementLabel, labels: &mut BTreeMap<Node, MeasurementLabel>| -> Result<()> {
        let tag: LocalClifford = frame.get(v);
        let phys = MeasurementLabel::xy(physical_angle(&tag, Plane::XY, &want)?);
        effective.insert(v, tag.pull_label(&phys).0);
        labels.insert(v, phys);
        Ok(())
    };
    for (k, (p, stage)) in layout.stages.iter().zip(stages).enumerate() {
        let flavor = stage_flavor(k);
        let pairs = lhz_pairs(&reduced, &p.bases, &p.parity_sites)
            .ok_or_else(|| Error::Precondition(format!("stage {k} did not reduce to the LHZ triangle")))?;
        for (&v, &(i, j)) in &pairs {
            let gamma = stage.pairs.get(&(i, j)).copied().unwrap_or(0.0);
            set(v, MeasurementLabel::yz(-2.0 * gamma), &mut labels)?;
            parity_labels.insert(
                v,
                ParityLabel {
                    support: vec![p.bases[i], p.bases[j]],
                    flavor,
                },
            );
        }
        for (i, &b) in p.bases.iter().enumerate() {
            let gamma = stage.singles.get(&i).copied().unwrap_or(0.0);
            set(b, MeasurementLabel::xy(2.0 * gamma), &mut labels)?;
            if gamma != 0.0 {
                parity_labels.insert(b, ParityLabel { support: vec![b], flavor });
            }
        }
        groups.push(pairs.keys().copied().collect());
        groups.push(p.bases.clone());
        all_pairs.push(pairs);
    }
    groups.push(layout.outputs.clone());
    let log = LabeledOpenGraph::new(layout.open.clone(), labels)?;
    let name = if stages.len() == 1 {
        format!("beveled{n}")
    } else {
        format!("alternating{n}x{}", stages.len())
    };
    let (mut pattern, flow) = pattern_for_layers(
        &name,
        &log,
        &layers_from_groups(&groups),
        layout.stages[0].bases.clone(),
        layout.outputs.clone(),
    )?;
    pattern.parity_labels = parity_labels;
    let teleport = if stages.len() % 2 == 1 {
        LocalClifford::h()
    } else {
        LocalClifford::identity()
    };
    for &o in &layout.outputs {
        let residual = frame.get(o).compose(&teleport);
        if !residual.is_pauli() {
            return Err(Error::Precondition(format!("output {o} keeps the tag {residual}")));
        }
        if residual.image(Axis::Z).neg {
            pattern.push_correction(o, Axis::X, Vec::new(), true);
        }
        if residual.image(Axis::X).neg {
            pattern.push_correction(o, Axis::Z, Vec::new(), true);
        }
    }
    Ok(StagedPattern {
        layout,
        stages: stages.to_vec(),
        pattern,
        flow,
        reduced,
        frame,
        effective,
        pairs: all_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::oracle::{dressed_state, project_graph_state};

    #[test]
    fn reduction_leaves_the_triangle() {
        for n in 2..=4 {
            let r = reduce_triangular_to_lhz(n).unwrap();
            assert_eq!(r.graph.node_count(), n + n * (n - 1) / 2);
            assert_eq!(r.pairs.len(), n * (n - 1) / 2);
            for (v, c) in r.frame.iter() {
                let want = if r.pairs.contains_key(&v) { "H" } else { "I" };
                assert_eq!(c.name(), want, "tag on {v}");
            }
            assert!(r.pattern.graph.lambda_all_yz());
        }
        assert!(reduce_triangular_to_lhz(1).is_err());
    }

    #[test]
    fn reduction_matches_projection() {
        let r = reduce_triangular_to_lhz(3).unwrap();
        let steps: Vec<_> = r.steps.iter().map(|&(u, _)| (u, Axis::X, 0)).collect();
        let got = project_graph_state(&r.patch.open.graph, &steps, 16).unwrap().unwrap();
        let want = dressed_state(&r.graph, &r.frame).unwrap();
        assert!((got.fidelity(&want).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn beveled_size_and_io() {
        let p = build_beveled_cluster(4).unwrap();
        assert_eq!(p.graph.graph().node_count(), 24);
        assert!(p.graph.inputs().is_disjoint(p.graph.outputs()));
    }

    #[test]
    fn only_bases_stay_xy() {
        let s = build_alternating_series_with(3, &[ParityStage::ramp(3), ParityStage::ramp(3)]).unwrap();
        let bases: NodeSet = s.layout.stages.iter().flat_map(|p| p.bases.iter().copied()).collect();
        let xy: NodeSet = s.effective.iter().filter(|(_, l)| l.is_plane(Plane::XY)).map(|(v, _)| *v).collect();
        assert_eq!(xy, bases);
        assert!(s.effective.iter().all(|(v, l)| bases.contains(v) || l.is_plane(Plane::YZ)));
    }
}

// SPDX-License-Identifier: Apache-2.0
//! Exhaustive flow oracles.
//!
//! Whether a node admits a correction set depends only on which nodes lie
//! strictly later than it, and that test is monotone in the later set. The
//! search grows the later set layer by layer, adding every node whose
//! correction set is found by enumerating all candidate subsets; the
//! resulting layering dominates every other one prefix by prefix. Layer 0 is
//! the outputs alone.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::flow::FlowCandidate;
use crate::graph::{Axis, LabeledOpenGraph, MeasurementLabel, Node, NodeSet, Plane};

pub const DEFAULT_GFLOW_CAP: usize = 8;
pub const DEFAULT_PAULI_CAP: usize = 6;
const MAX_ENUMERATED: usize = 20;

struct Indexed {
    nodes: Vec<Node>,
    adj: Vec<u64>,
    inputs: u64,
    outputs: u64,
    labels: Vec<Option<MeasurementLabel>>,
}

impl Indexed {
    fn new(log: &LabeledOpenGraph) -> Result<Self> {
        let nodes: Vec<Node> = log.graph().nodes().collect();
        if nodes.len() > 64 {
            return Err(Error::CapExceeded {
                found: nodes.len(),
                cap: 64,
            });
        }
        let idx: BTreeMap<Node, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mask = |s: &NodeSet| s.iter().fold(0u64, |m, v| m | 1 << idx[v]);
        Ok(Indexed {
            adj: nodes.iter().map(|&v| mask(log.graph().neighbors(v))).collect(),
            inputs: mask(log.inputs()),
            outputs: mask(log.outputs()),
            labels: nodes.iter().map(|&v| log.label(v).copied()).collect(),
            nodes,
        })
    }

    fn odd(&self, set: u64) -> u64 {
        let mut acc = 0;
        let mut s = set;
        while s != 0 {
            let i = s.trailing_zeros() as usize;
            acc ^= self.adj[i];
            s &= s - 1;
        }
        acc
    }

    fn to_set(&self, m: u64) -> NodeSet {
        (0..self.nodes.len())
            .filter(|i| m >> i & 1 == 1)
            .map(|i| self.nodes[i])
            .collect()
    }
}

/// Every subset of `pool`, in increasing binary order.
fn subsets(pool: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == pool { None } else { Some((cur.wrapping_sub(pool)) & pool) };
        Some(cur)
    })
}

fn gflow_set(ix: &Indexed, u: usize, later: u64) -> Option<u64> {
    let bit = 1u64 << u;
    let plane = match ix.labels[u]? {
        MeasurementLabel::Plane(p, _) => p,
        MeasurementLabel::Axis(_) => return None,
    };
    let pool = later & !ix.inputs;
    let own = match plane {
        Plane::XY => 0,
        _ if ix.inputs & bit != 0 => return None,
        _ => bit,
    };
    subsets(pool).map(|k| k | own).find(|&g| {
        let odd = ix.odd(g);
        if odd & !later & !bit != 0 {
            return false;
        }
        let in_odd = odd & bit != 0;
        match plane {
            Plane::XY => in_odd,
            Plane::XZ => in_odd,
            Plane::YZ => !in_odd,
        }
    })
}

fn is_axis(l: Option<MeasurementLabel>, axes: &[Axis]) -> bool {
    matches!(l, Some(MeasurementLabel::Axis(a)) if axes.contains(&a))
}

fn pauli_set(ix: &Indexed, u: usize, later: u64) -> Option<u64> {
    let bit = 1u64 << u;
    let label = ix.labels[u]?;
    let n = ix.nodes.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let early = all & !later & !bit;
    let mut not_xy = 0u64;
    let mut not_yz = 0u64;
    let mut y = 0u64;
    for i in 0..n {
        if !is_axis(ix.labels[i], &[Axis::X, Axis::Y]) {
            not_xy |= 1 << i;
        }
        if !is_axis(ix.labels[i], &[Axis::Y, Axis::Z]) {
            not_yz |= 1 << i;
        }
        if is_axis(ix.labels[i], &[Axis::Y]) {
            y |= 1 << i;
        }
    }
    subsets(all & !ix.inputs).find(|&p| {
        let odd = ix.odd(p);
        if p & early & not_xy != 0 || odd & early & not_yz != 0 || (p ^ odd) & early & y != 0 {
            return false;
        }
        let (in_p, in_odd) = (p & bit != 0, odd & bit != 0);
        match label {
            MeasurementLabel::Plane(Plane::XY, _) => !in_p && in_odd,
            MeasurementLabel::Plane(Plane::XZ, _) => in_p && in_odd,
            MeasurementLabel::Plane(Plane::YZ, _) => in_p && !in_odd,
            MeasurementLabel::Axis(Axis::X) => in_odd,
            MeasurementLabel::Axis(Axis::Y) => in_p != in_odd,
            MeasurementLabel::Axis(Axis::Z) => in_p,
        }
    })
}

fn layered_search(
    ix: &Indexed,
    find: impl Fn(&Indexed, usize, u64) -> Option<u64>,
) -> Option<FlowCandidate> {
    let n = ix.nodes.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut later = ix.outputs;
    let mut cand = FlowCandidate::default();
    for u in (0..n).filter(|&u| ix.outputs >> u & 1 == 1) {
        cand.layers.insert(ix.nodes[u], 0);
    }
    let mut layer = 1;
    while later != all {
        let mut grown = later;
        for u in (0..n).filter(|&u| later >> u & 1 == 0) {
            if let Some(set) = find(ix, u, later) {
                grown |= 1 << u;
                cand.layers.insert(ix.nodes[u], layer);
                cand.correction.insert(ix.nodes[u], ix.to_set(set));
            }
        }
        if grown == later {
            return None;
        }
        later = grown;
        layer += 1;
    }
    Some(cand)
}

fn check_caps(log: &LabeledOpenGraph, cap: usize) -> Result<()> {
    let found = log.open.non_outputs().len();
    if found > cap {
        return Err(Error::CapExceeded { found, cap });
    }
    let pool = log.open.non_inputs().len();
    if pool > MAX_ENUMERATED {
        return Err(Error::CapExceeded {
            found: pool,
            cap: MAX_ENUMERATED,
        });
    }
    Ok(())
}

/// Exhaustive gflow search; the returned layering is maximally delayed.
pub fn brute_force_gflow(log: &LabeledOpenGraph, cap: usize) -> Result<Option<FlowCandidate>> {
    check_caps(log, cap)?;
    let ix = Indexed::new(log)?;
    Ok(layered_search(&ix, gflow_set))
}

/// Exhaustive Pauli-flow search over all correction subsets of the
/// non-inputs.
pub fn brute_force_pauli_flow(log: &LabeledOpenGraph, cap: usize) -> Result<Option<FlowCandidate>> {
    check_caps(log, cap)?;
    let ix = Indexed::new(log)?;
    Ok(layered_search(&ix, pauli_set))
}

/// Largest `|Ṽ_k|` reachable by any gflow layering, for every `k`. `None`
/// without gflow.
pub fn max_cumulative_layer_sizes(log: &LabeledOpenGraph, cap: usize) -> Result<Option<Vec<usize>>> {
    Ok(brute_force_gflow(log, cap)?.map(|c| c.cumulative_layer_sizes()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{verify_gflow, verify_pauli_flow};
    use crate::graph::{Graph, OpenGraph};

    #[test]
    fn subset_enumeration_is_complete() {
        assert_eq!(subsets(0b1010).collect::<Vec<_>>(), vec![0, 0b10, 0b1000, 0b1010]);
        assert_eq!(subsets(0).count(), 1);
    }

    #[test]
    fn empty_non_outputs_give_trivial_flow() {
        let og = OpenGraph::new(Graph::from_edges(&[1, 2], &[(1, 2)]).unwrap(), [1].into(), [1, 2].into()).unwrap();
        let log = LabeledOpenGraph::new(og, BTreeMap::new()).unwrap();
        let f = brute_force_gflow(&log, DEFAULT_GFLOW_CAP).unwrap().unwrap();
        assert!(f.correction.is_empty());
        assert_eq!(f.depth(), 1);
    }

    #[test]
    fn z_measured_input_has_no_pauli_flow() {
        let og = OpenGraph::new(Graph::from_edges(&[1, 2], &[(1, 2)]).unwrap(), [1].into(), [2].into()).unwrap();
        let log = LabeledOpenGraph::new(og, [(1, MeasurementLabel::Axis(Axis::Z))].into()).unwrap();
        assert!(brute_force_pauli_flow(&log, DEFAULT_PAULI_CAP).unwrap().is_none());
    }

    #[test]
    fn found_flows_verify() {
        let og = OpenGraph::new(
            Graph::from_edges(&[1, 2, 3], &[(1, 2), (2, 3)]).unwrap(),
            [1].into(),
            [3].into(),
        )
        .unwrap();
        let log = LabeledOpenGraph::new(og, [(1, MeasurementLabel::xy(0.2)), (2, MeasurementLabel::xy(0.4))].into()).unwrap();
        let g = brute_force_gflow(&log, DEFAULT_GFLOW_CAP).unwrap().unwrap();
        assert_eq!(verify_gflow(&log, &g).unwrap(), Ok(()));
        let p = brute_force_pauli_flow(&log, DEFAULT_PAULI_CAP).unwrap().unwrap();
        assert_eq!(verify_pauli_flow(&log, &p).unwrap(), Ok(()));
    }

    #[test]
    fn cap_is_enforced() {
        let nodes: Vec<Node> = (0..10).collect();
        let og = OpenGraph::new(Graph::from_edges(&nodes, &[]).unwrap(), NodeSet::new(), [9].into()).unwrap();
        let labels = (0..9).map(|v| (v, MeasurementLabel::yz(0.0))).collect();
        let log = LabeledOpenGraph::new(og, labels).unwrap();
        assert_eq!(
            brute_force_gflow(&log, DEFAULT_GFLOW_CAP),
            Err(Error::CapExceeded { found: 9, cap: 8 })
        );
    }
}

// SPDX-License-Identifier: Apache-2.0
//! Diagonal unitaries `diag(e^{iα})` as products `exp(i Σ_s β_s Z^s)` and
//! their bipartite register-logic patterns.
//!
//! Bit `j` of a basis index or of a parity index `s`, counted from the most
//! significant end, belongs to base qubit `j`. Then
//! `α_x = Σ_s β_s (-1)^{|s ∧ x|}`, i.e. `α = H β` with the Sylvester matrix.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::flow::construct_rl_gflow;
use crate::graph::{Graph, LabeledOpenGraph, MeasurementLabel, Node, NodeSet, OpenGraph};
use crate::pattern::{pattern_from_flow, ParityFlavor, ParityLabel, Pattern};

/// Coefficients of `Z^s` below this are dropped from the pattern.
const NEGLIGIBLE: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalSpec {
    pub n: usize,
    /// `β_s` for `s = 0 .. 2^n`.
    pub beta: Vec<f64>,
}

fn fwht(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

fn check_len(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::Dimension(format!("length {len} is not a power of two")));
    }
    Ok(len.trailing_zeros() as usize)
}

/// `β = H α / 2^n`.
pub fn walsh_coefficients(alpha: &[f64]) -> Result<Vec<f64>> {
    check_len(alpha.len())?;
    let mut v = alpha.to_vec();
    fwht(&mut v);
    let scale = alpha.len() as f64;
    Ok(v.into_iter().map(|x| x / scale).collect())
}

/// `α = H β`.
pub fn inverse_walsh(beta: &[f64]) -> Result<Vec<f64>> {
    check_len(beta.len())?;
    let mut v = beta.to_vec();
    fwht(&mut v);
    Ok(v)
}

impl DiagonalSpec {
    pub fn from_alpha(alpha: &[f64]) -> Result<Self> {
        let n = check_len(alpha.len())?;
        Ok(DiagonalSpec {
            n,
            beta: walsh_coefficients(alpha)?,
        })
    }

    pub fn from_beta(beta: Vec<f64>) -> Result<Self> {
        let n = check_len(beta.len())?;
        Ok(DiagonalSpec { n, beta })
    }

    pub fn alpha(&self) -> Vec<f64> {
        inverse_walsh(&self.beta).expect("length checked on construction")
    }

    /// Base qubits (positions `0..n`) in the support of `s`.
    pub fn support(&self, s: usize) -> Vec<usize> {
        (0..self.n).filter(|j| s >> (self.n - 1 - j) & 1 == 1).collect()
    }
}

/// Bases are nodes `0..n` (inputs and outputs); parity qubit `n + k` stands
/// for the `k`-th nonzero `β_s` with `s ≠ 0`, in increasing `s`, is joined to
/// the bases of `s` and measured in `YZ(-2 β_s)`. `β_0` becomes the global
/// phase.
pub fn build_brl_pattern(spec: &DiagonalSpec) -> Result<Pattern> {
    if spec.n == 0 {
        return Err(Error::Precondition("need at least one base qubit".into()));
    }
    if spec.beta.len() != 1 << spec.n {
        return Err(Error::Dimension("β must have 2^n entries".into()));
    }
    let n = spec.n as Node;
    let bases: Vec<Node> = (0..n).collect();
    let mut nodes = bases.clone();
    let mut edges = Vec::new();
    let mut labels = BTreeMap::new();
    let mut parity_labels = BTreeMap::new();
    let mut next = n;
    for (s, &b) in spec.beta.iter().enumerate().skip(1) {
        if b.abs() < NEGLIGIBLE {
            continue;
        }
        let support = spec.support(s);
        nodes.push(next);
        edges.extend(support.iter().map(|&j| (j as Node, next)));
        labels.insert(next, MeasurementLabel::yz(-2.0 * b));
        parity_labels.insert(
            next,
            ParityLabel {
                support: support.iter().map(|&j| j as Node).collect(),
                flavor: ParityFlavor::Z,
            },
        );
        next += 1;
    }
    let base_set: NodeSet = bases.iter().copied().collect();
    let og = OpenGraph::new(Graph::from_edges(&nodes, &edges)?, base_set.clone(), base_set)?;
    let log = LabeledOpenGraph::new(og, labels)?;
    let flow = construct_rl_gflow(&log)?;
    let mut p = pattern_from_flow(&format!("brl{}", spec.n), &log, &flow, bases.clone(), bases)?;
    p.parity_labels = parity_labels;
    p.global_phase = spec.beta[0];
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_qubit_coefficients() {
        let t = 0.7;
        assert_eq!(walsh_coefficients(&[t, -t]).unwrap(), vec![0.0, t]);
        let b = walsh_coefficients(&[0.3; 8]).unwrap();
        assert!((b[0] - 0.3).abs() < 1e-15 && b[1..].iter().all(|x| x.abs() < 1e-15));
        assert!(walsh_coefficients(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let a = [0.1, -0.4, 2.0, 0.9];
        let back = inverse_walsh(&walsh_coefficients(&a).unwrap()).unwrap();
        for (x, y) in a.iter().zip(back) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn four_bases_need_fifteen_parities() {
        let spec = DiagonalSpec::from_beta((0..16).map(|k| 0.1 + k as f64 * 0.01).collect()).unwrap();
        let p = build_brl_pattern(&spec).unwrap();
        assert_eq!(p.parity_labels.len(), 15);
        assert!(p.graph.open.is_bipartite_register_logic());
        let zero = DiagonalSpec::from_beta(vec![0.5, 0.0]).unwrap();
        let e = build_brl_pattern(&zero).unwrap();
        assert_eq!(e.graph.graph().node_count(), 1);
        assert_eq!(e.global_phase, 0.5);
    }
}

// SPDX-License-Identifier: Apache-2.0
//! Builders for the concrete measurement patterns: diagonal unitaries on
//! bipartite register-logic graphs, LHZ triangles and beveled clusters, the
//! universal YZ unit cell, and the triangular-grid XZ constructions.

pub mod cell;
pub mod diagonal;
pub mod parity;
pub mod xz;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::clifford::LocalClifford;
use crate::error::{Error, Result};
use crate::flow::{solve_corrections_for_layers, FlowCandidate};
use crate::graph::{LabeledOpenGraph, MeasurementLabel, Node, Plane};
use crate::pattern::{pattern_from_flow, Pattern};

pub use parity::{
    build_alternating_series, build_alternating_series_with, build_beveled_cluster, build_beveled_cluster_with,
    reduce_triangular_to_lhz, reduce_triangular_to_lhz_with, LhzReduction, ParityStage, StagedPattern,
};
pub use cell::{
    cell_gate_table, compile_gates, compile_unit_cell_circuit, parse_gate_word, unit_cell_flow, unit_cell_pattern,
    CellGate, CellSetting, CompiledCircuit, WordGate,
};
pub use diagonal::{build_brl_pattern, inverse_walsh, walsh_coefficients, DiagonalSpec};
pub use xz::{
    build_xz_triangular_gadgets, reduce_hexagonal_to_xz, reduce_hexagonal_to_xz_with, HexReduction, XzGadget, XzGate,
};

/// Angle in `(-π, π]`.
pub fn wrap_angle(t: f64) -> f64 {
    let r = t.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// The physical angle on `plane` that, seen through the tag `tag` on the
/// measured qubit, is a measurement of `want` with the same outcome sense.
pub fn physical_angle(tag: &LocalClifford, plane: Plane, want: &MeasurementLabel) -> Result<f64> {
    let MeasurementLabel::Plane(target, psi) = *want else {
        return Err(Error::Precondition("target label must be a plane".into()));
    };
    let pulled = |t: f64| match tag.pull_label(&MeasurementLabel::Plane(plane, t)).0 {
        MeasurementLabel::Plane(p, a) => (p, a),
        MeasurementLabel::Axis(_) => unreachable!("planes map to planes"),
    };
    let (p0, c) = pulled(0.0);
    if p0 != target {
        return Err(Error::Precondition(format!(
            "tag {tag} turns {plane:?} into {p0:?}, not {target:?}"
        )));
    }
    let (_, a1) = pulled(PI / 2.0);
    let s = wrap_angle(a1 - c).signum();
    Ok(wrap_angle(s * (psi - c)))
}

/// Layer map from groups listed in measurement order; the final group is
/// layer 0.
pub fn layers_from_groups(groups: &[Vec<Node>]) -> BTreeMap<Node, usize> {
    let top = groups.len().saturating_sub(1);
    let mut layers = BTreeMap::new();
    for (k, g) in groups.iter().enumerate() {
        for &v in g {
            layers.insert(v, top - k);
        }
    }
    layers
}

/// Solves corrections for the layering and builds the flow pattern.
pub fn pattern_for_layers(
    name: &str,
    log: &LabeledOpenGraph,
    layers: &BTreeMap<Node, usize>,
    input_order: Vec<Node>,
    output_order: Vec<Node>,
) -> Result<(Pattern, FlowCandidate)> {
    let flow = solve_corrections_for_layers(log, layers)?
        .ok_or_else(|| Error::Precondition(format!("{name}: no Pauli flow for the chosen measurement order")))?;
    let p = pattern_from_flow(name, log, &flow, input_order, output_order)?;
    Ok((p, flow))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Axis;

    #[test]
    fn physical_angle_inverts_the_tag() {
        let tags = [
            LocalClifford::h(),
            LocalClifford::h().compose(&LocalClifford::pauli(Axis::Z)),
            LocalClifford::pauli(Axis::Z).compose(&LocalClifford::h()),
        ];
        for tag in tags {
            for psi in [0.3, -1.2, 2.9] {
                let want = MeasurementLabel::yz(psi);
                let phi = physical_angle(&tag, Plane::XY, &want).unwrap();
                let (got, flip) = tag.pull_label(&MeasurementLabel::xy(phi));
                assert!(!flip);
                assert!((wrap_angle(got.angle().unwrap() - psi)).abs() < 1e-12);
            }
        }
        assert!(physical_angle(&LocalClifford::identity(), Plane::XY, &MeasurementLabel::yz(0.1)).is_err());
    }

    #[test]
    fn groups_to_layers() {
        let l = layers_from_groups(&[vec![1, 2], vec![3], vec![4]]);
        assert_eq!(l, [(1, 2), (2, 2), (3, 1), (4, 0)].into());
    }
}

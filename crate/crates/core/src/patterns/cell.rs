// SPDX-License-Identifier: Apache-2.0
//! The universal YZ unit cell: its gate table, raw single-cell patterns and
//! a compiler from gate words to cell sheets.
//!
//! A cell measures `q1` and `q3` in `Y`, `q4` and `q5` in `Y` or `Z`, and
//! `q2` in `YZ(θ)`. With outcome bits `b1..b5` the rows are
//!
//! | gate      | `q4` | `θ` on `q2`      | correction on `q6`                   |
//! |-----------|------|------------------|--------------------------------------|
//! | `I`       | `Y`  | `π/2`            | `X^{b2+b3} Z^{b1+b2+b3+b4+b5}`       |
//! | `S`       | `Z`  | `π/2`            | `X^{b2+b3} Z^{b1+b4+b5}`             |
//! | `H`       | `Y`  | `0`              | `X^{b1+b2+b3} Z^{1+b2+b3+b4+b5}`     |
//! | `HR_Y(θ)` | `Y`  | `(-1)^{1+b1} θ`  | `X^{b1+b2+b3} Z^{1+b2+b3+b4+b5}`     |
//!
//! with `q5` in `Z` and `Z^{b5}` on `q7`. Measuring `q5` in `Y` on top of the
//! identity row gives `CZ(S ⊗ S)` on `(q6, q7)` with correction
//! `X^{b2+b3} Z^{1+b1+b4+b5} ⊗ Z^{1+b2+b3+b5}`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use crate::clifford::{hadamard_matrix, pauli_matrix, rotation, s_matrix};
use crate::error::{Error, Result};
use crate::flow::FlowCandidate;
use crate::graph::grids::{unit_cell, unit_cell_sheet, CellIds, UnitCellSheet};
use crate::graph::{Axis, LabeledOpenGraph, MeasurementLabel, Node, NodeSet};
use crate::pattern::{LazyScheduler, Pattern};
use crate::patterns::{layers_from_groups, pattern_for_layers};
use crate::sim::linalg::{self, Matrix};
use crate::sim::run::extract_unitary;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CellGate {
    I,
    S,
    H,
    /// `H R_Y(θ)`.
    HRy(f64),
    /// Identity on top with `q5` in `Y`: `CZ(S ⊗ S)` on this wire and the
    /// one below.
    Cz,
}

/// Measurement choices of one cell. `q2` is measured at `(-1)^{b1} ·
/// theta2` when `sign_from_q1` is set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellSetting {
    pub m4: Axis,
    pub m5: Axis,
    pub theta2: f64,
    pub sign_from_q1: bool,
}

/// Outcome bits `b1..b5` of one cell; `b[0]` is unused.
pub type CellBits = [u8; 6];

impl CellGate {
    pub fn name(&self) -> String {
        match self {
            CellGate::I => "I".into(),
            CellGate::S => "S".into(),
            CellGate::H => "H".into(),
            CellGate::HRy(t) => format!("HRY({t})"),
            CellGate::Cz => "CZ".into(),
        }
    }

    pub fn setting(&self) -> CellSetting {
        let (m4, m5, theta2, sign_from_q1) = match *self {
            CellGate::I => (Axis::Y, Axis::Z, FRAC_PI_2, false),
            CellGate::S => (Axis::Z, Axis::Z, FRAC_PI_2, false),
            CellGate::H => (Axis::Y, Axis::Z, 0.0, false),
            CellGate::HRy(t) => (Axis::Y, Axis::Z, -t, true),
            CellGate::Cz => (Axis::Y, Axis::Y, FRAC_PI_2, false),
        };
        CellSetting {
            m4,
            m5,
            theta2,
            sign_from_q1,
        }
    }

    /// The ideal action on `(q6, q7)`, `q6` most significant.
    pub fn matrix(&self) -> Matrix {
        let one = |m| linalg::kron(&linalg::single(&m), &linalg::identity(2));
        match *self {
            CellGate::I => linalg::identity(4),
            CellGate::S => one(s_matrix()),
            CellGate::H => one(hadamard_matrix()),
            CellGate::HRy(t) => one(hadamard_matrix() * rotation(Axis::Y, t)),
            CellGate::Cz => {
                let s = linalg::single(&s_matrix());
                linalg::cz(0, 1, 2) * linalg::kron(&s, &s)
            }
        }
    }

    /// `(x, z)` exponents of the correction on `q6` and on `q7`.
    pub fn correction(&self, b: &CellBits) -> [(u8, u8); 2] {
        let [_, b1, b2, b3, b4, b5] = *b;
        let upper = match self {
            CellGate::I => (b2 ^ b3, b1 ^ b2 ^ b3 ^ b4 ^ b5),
            CellGate::S => (b2 ^ b3, b1 ^ b4 ^ b5),
            CellGate::H | CellGate::HRy(_) => (b1 ^ b2 ^ b3, 1 ^ b2 ^ b3 ^ b4 ^ b5),
            CellGate::Cz => (b2 ^ b3, 1 ^ b1 ^ b4 ^ b5),
        };
        let lower = match self {
            CellGate::Cz => (0, 1 ^ b2 ^ b3 ^ b5),
            _ => (0, b5),
        };
        [upper, lower]
    }

    /// The correction as a matrix on `(q6, q7)`.
    pub fn correction_matrix(&self, b: &CellBits) -> Matrix {
        let wire = |(x, z): (u8, u8)| {
            let mut m = linalg::identity(2);
            if z == 1 {
                m = linalg::single(&pauli_matrix(Axis::Z)) * m;
            }
            if x == 1 {
                m = linalg::single(&pauli_matrix(Axis::X)) * m;
            }
            m
        };
        let [u, l] = self.correction(b);
        linalg::kron(&wire(u), &wire(l))
    }
}

/// Pauli `P` on `(q6, q7)`, as `(x, z)` exponents, with the outcome-0 branch
/// of the raw cell equal to `P · G` up to phase. Found by simulating the
/// cell rather than read off the table.
pub fn zero_branch_pauli(gate: CellGate) -> Result<[(u8, u8); 2]> {
    let m = extract_unitary(&unit_cell_pattern(gate)?, None)?;
    let p = linalg::equal_up_to_pauli(&m, &gate.matrix())
        .ok_or_else(|| Error::Precondition(format!("cell {} is not its gate up to a Pauli", gate.name())))?;
    let bits = |w: Node| match p.get(w) {
        None => (0, 0),
        Some(Axis::X) => (1, 0),
        Some(Axis::Y) => (1, 1),
        Some(Axis::Z) => (0, 1),
    };
    Ok([bits(0), bits(1)])
}

/// The single-qubit rows and the two-qubit row, with `theta` for `HR_Y`.
pub fn cell_gate_table(theta: f64) -> Vec<CellGate> {
    vec![CellGate::I, CellGate::S, CellGate::H, CellGate::HRy(theta), CellGate::Cz]
}

/// One cell on ids `1..=7` with inputs `(q1, q7)` and outputs `(q6, q7)`,
/// measured `q1, q2, q3, q4, q5` with no corrections, so each branch shows
/// the cell's own byproduct.
pub fn unit_cell_pattern(gate: CellGate) -> Result<Pattern> {
    let (open, ids) = unit_cell()?;
    let st = gate.setting();
    let q5 = ids.q5.expect("single cell has q5");
    let q7 = ids.q7.expect("single cell has q7");
    let labels: BTreeMap<Node, MeasurementLabel> = [
        (ids.q1, MeasurementLabel::Axis(Axis::Y)),
        (ids.q2, MeasurementLabel::yz(st.theta2)),
        (ids.q3, MeasurementLabel::Axis(Axis::Y)),
        (ids.q4, MeasurementLabel::Axis(st.m4)),
        (q5, MeasurementLabel::Axis(st.m5)),
    ]
    .into();
    let log = LabeledOpenGraph::new(open, labels)?;
    let mut sched = LazyScheduler::new(&log);
    let none = NodeSet::new();
    for u in [ids.q1, ids.q2, ids.q3, ids.q4, q5] {
        let sign: NodeSet = if u == ids.q2 && st.sign_from_q1 {
            [ids.q1].into()
        } else {
            NodeSet::new()
        };
        sched.measure(u, &sign, &none, false);
    }
    let commands = sched.finish();
    let p = Pattern {
        name: format!("cell_{}", gate.name()),
        graph: log,
        input_order: vec![ids.q1, q7],
        output_order: vec![ids.q6, q7],
        commands,
        layers: None,
        parity_labels: BTreeMap::new(),
        global_phase: 0.0,
    };
    p.validate()?;
    Ok(p)
}

/// The Pauli flow stated for one cell: `p(q1) = {q3}`, `p(q3) = {q6}` and
/// `p(q) = {q}` otherwise, with `q1 ≺ q2 ≺ q3 ≺ q4, q5 ≺ q6, q7`.
pub fn unit_cell_flow(ids: &CellIds) -> FlowCandidate {
    let mut f = FlowCandidate::default();
    let q5 = ids.q5.expect("cell with q5");
    f.correction.insert(ids.q1, [ids.q3].into());
    f.correction.insert(ids.q2, [ids.q2].into());
    f.correction.insert(ids.q3, [ids.q6].into());
    f.correction.insert(ids.q4, [ids.q4].into());
    f.correction.insert(q5, [q5].into());
    for (v, l) in [(ids.q1, 4), (ids.q2, 3), (ids.q3, 2), (ids.q4, 1), (q5, 1), (ids.q6, 0)] {
        f.layers.insert(v, l);
    }
    f.layers.insert(ids.q7.expect("cell with q7"), 0);
    f
}

/// A gate of a circuit word. Wires count from 0 at the top.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WordGate {
    I(usize),
    S(usize),
    H(usize),
    HRy(f64, usize),
    Ry(f64, usize),
    Cz(usize, usize),
}

fn parse_args(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|a| {
            a.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad argument {a:?}")))
        })
        .collect()
}

fn wire(x: f64) -> Result<usize> {
    if x < 0.0 || x.fract() != 0.0 {
        return Err(Error::Parse(format!("bad wire {x}")));
    }
    Ok(x as usize)
}

/// Parses `;`-separated gates such as `H;RY(0.3);CZ(0,1);S(1);HRY(0.2,1)`.
/// Single-qubit gates act on wire 0 unless a wire is given last.
pub fn parse_gate_word(word: &str) -> Result<Vec<WordGate>> {
    let mut out = Vec::new();
    for tok in word.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let (name, args) = match tok.find('(') {
            Some(i) if tok.ends_with(')') => (&tok[..i], parse_args(&tok[i + 1..tok.len() - 1])?),
            Some(_) => return Err(Error::Parse(format!("unclosed argument list in {tok:?}"))),
            None => (tok, Vec::new()),
        };
        let g = match (name.to_ascii_uppercase().as_str(), args.as_slice()) {
            ("I", []) => WordGate::I(0),
            ("I", [w]) => WordGate::I(wire(*w)?),
            ("S", []) => WordGate::S(0),
            ("S", [w]) => WordGate::S(wire(*w)?),
            ("H", []) => WordGate::H(0),
            ("H", [w]) => WordGate::H(wire(*w)?),
            ("HRY", [t]) => WordGate::HRy(*t, 0),
            ("HRY", [t, w]) => WordGate::HRy(*t, wire(*w)?),
            ("RY", [t]) => WordGate::Ry(*t, 0),
            ("RY", [t, w]) => WordGate::Ry(*t, wire(*w)?),
            ("CZ", [a, b]) => WordGate::Cz(wire(*a)?, wire(*b)?),
            _ => return Err(Error::Parse(format!("unsupported gate {tok:?}"))),
        };
        out.push(g);
    }
    Ok(out)
}

impl WordGate {
    fn wires(&self) -> Vec<usize> {
        match *self {
            WordGate::I(w) | WordGate::S(w) | WordGate::H(w) | WordGate::HRy(_, w) | WordGate::Ry(_, w) => vec![w],
            WordGate::Cz(a, b) => vec![a, b],
        }
    }

    /// The gate on `width` wires, wire 0 most significant.
    pub fn matrix(&self, width: usize) -> Matrix {
        let on = |m, w| linalg::on_wire(&m, w, width);
        match *self {
            WordGate::I(_) => linalg::identity(1 << width),
            WordGate::S(w) => on(s_matrix(), w),
            WordGate::H(w) => on(hadamard_matrix(), w),
            WordGate::HRy(t, w) => on(hadamard_matrix() * rotation(Axis::Y, t), w),
            WordGate::Ry(t, w) => on(rotation(Axis::Y, t), w),
            WordGate::Cz(a, b) => linalg::cz(a, b, width),
        }
    }
}

/// A gate word laid out on a cell sheet.
#[derive(Clone, Debug)]
pub struct CompiledCircuit {
    pub gates: Vec<WordGate>,
    pub width: usize,
    /// `columns[c][w]`: the cell setting used at column `c` on wire `w`.
    pub columns: Vec<Vec<CellGate>>,
    pub sheet: UnitCellSheet,
    pub pattern: Pattern,
    pub flow: FlowCandidate,
}

impl CompiledCircuit {
    /// Product of the word's gates, first gate rightmost.
    pub fn target(&self) -> Matrix {
        self.gates
            .iter()
            .fold(linalg::identity(1 << self.width), |acc, g| g.matrix(self.width) * acc)
    }
}

/// Cells per column: `S`, `H` and `I` take one column; `RY(t)` is `HR_Y(t)`
/// then `H`; `CZ(a, a+1)` is `S` on `a`, then the `CZ` setting on `a` with
/// `S` on `a+1`, whose product is `CZ (Z ⊗ Z)`.
fn layout(gates: &[WordGate], width: usize) -> Result<Vec<Vec<CellGate>>> {
    let mut cols = Vec::new();
    let single = |w: usize, g: CellGate| {
        let mut c = vec![CellGate::I; width];
        c[w] = g;
        c
    };
    for g in gates {
        if let Some(&w) = g.wires().iter().find(|&&w| w >= width) {
            return Err(Error::Precondition(format!("wire {w} is outside width {width}")));
        }
        match *g {
            WordGate::I(w) => cols.push(single(w, CellGate::I)),
            WordGate::S(w) => cols.push(single(w, CellGate::S)),
            WordGate::H(w) => cols.push(single(w, CellGate::H)),
            WordGate::HRy(t, w) => cols.push(single(w, CellGate::HRy(t))),
            WordGate::Ry(t, w) => {
                cols.push(single(w, CellGate::HRy(t)));
                cols.push(single(w, CellGate::H));
            }
            WordGate::Cz(a, b) => {
                if a.abs_diff(b) != 1 {
                    return Err(Error::Precondition(format!("CZ({a},{b}) needs adjacent wires")));
                }
                let top = a.min(b);
                cols.push(single(top, CellGate::S));
                let mut c = single(top, CellGate::Cz);
                c[top + 1] = CellGate::S;
                cols.push(c);
            }
        }
    }
    if cols.is_empty() {
        cols.push(vec![CellGate::I; width]);
    }
    Ok(cols)
}

/// Pauli `X^x Z^z` per wire, tracked through the cells so the compiled
/// pattern can undo the outcome-0 byproducts of every cell.
#[derive(Clone, Copy, Debug, Default)]
struct WirePauli {
    x: bool,
    z: bool,
}

/// Compiles a gate word onto a `width × columns` sheet. Pauli cells are
/// measured first, then the `q2` of each column; corrections come from a
/// Pauli flow for that order, and the constant byproducts of the outcome-0
/// branch are undone on the outputs, so every branch implements the word
/// up to global phase.
pub fn compile_unit_cell_circuit(word: &str, width: usize) -> Result<CompiledCircuit> {
    compile_gates(&parse_gate_word(word)?, width)
}

pub fn compile_gates(gates: &[WordGate], width: usize) -> Result<CompiledCircuit> {
    if width == 0 {
        return Err(Error::Precondition("need at least one wire".into()));
    }
    let mut columns = layout(gates, width)?;
    let sheet = unit_cell_sheet(width, columns.len())?;
    let mut frame = vec![WirePauli::default(); width];
    let mut labels = BTreeMap::new();
    let mut pauli_nodes = Vec::new();
    let mut rotated = Vec::new();
    for (c, col) in columns.iter_mut().enumerate() {
        let cells = &sheet.cells[c];
        rotated.push(Vec::new());
        for (w, gate) in col.iter_mut().enumerate() {
            if let CellGate::HRy(t) = *gate {
                if frame[w].x != frame[w].z {
                    *gate = CellGate::HRy(-t);
                }
            }
            let st = gate.setting();
            let cell = &cells[w];
            labels.insert(cell.q1, MeasurementLabel::Axis(Axis::Y));
            labels.insert(cell.q3, MeasurementLabel::Axis(Axis::Y));
            labels.insert(cell.q4, MeasurementLabel::Axis(st.m4));
            labels.insert(cell.q2, MeasurementLabel::yz(st.theta2));
            pauli_nodes.extend([cell.q1, cell.q3, cell.q4]);
            match cell.q5 {
                Some(q5) => {
                    labels.insert(q5, MeasurementLabel::Axis(st.m5));
                    pauli_nodes.push(q5);
                }
                None if *gate == CellGate::Cz => {
                    return Err(Error::Precondition("CZ cell needs a wire below".into()));
                }
                None => {}
            }
            rotated[c].push(cell.q2);
        }
        for (w, gate) in col.iter().enumerate() {
            let f = &mut frame[w];
            match gate {
                CellGate::I | CellGate::Cz => {}
                CellGate::S => f.z ^= f.x,
                CellGate::H | CellGate::HRy(_) => std::mem::swap(&mut f.x, &mut f.z),
            }
        }
        if let Some(top) = col.iter().position(|g| *g == CellGate::Cz) {
            let (a, b) = (frame[top], frame[top + 1]);
            frame[top].z ^= a.x ^ b.x;
            frame[top + 1].z ^= b.x ^ a.x;
            frame[top].z ^= true;
            frame[top + 1].z ^= true;
        }
        for (w, gate) in col.iter().enumerate() {
            let p = zero_branch_pauli(*gate)?;
            for (k, (x, z)) in p.into_iter().enumerate() {
                if let Some(f) = frame.get_mut(w + k) {
                    f.x ^= x == 1;
                    f.z ^= z == 1;
                }
            }
        }
    }
    let mut groups = vec![pauli_nodes];
    groups.extend(rotated);
    groups.push(sheet.outputs.clone());
    let log = LabeledOpenGraph::new(sheet.open.clone(), labels)?;
    let name = format!("cells{}x{}", width, columns.len());
    let (mut pattern, flow) = pattern_for_layers(
        &name,
        &log,
        &layers_from_groups(&groups),
        sheet.inputs.clone(),
        sheet.outputs.clone(),
    )?;
    for (w, f) in frame.iter().enumerate() {
        let o = sheet.outputs[w];
        if f.x {
            pattern.push_correction(o, Axis::X, Vec::new(), true);
        }
        if f.z {
            pattern.push_correction(o, Axis::Z, Vec::new(), true);
        }
    }
    Ok(CompiledCircuit {
        gates: gates.to_vec(),
        width,
        columns,
        sheet,
        pattern,
        flow,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_words() {
        let g = parse_gate_word("H; RY(0.3); CZ(0,1); s(1)").unwrap();
        assert_eq!(
            g,
            vec![WordGate::H(0), WordGate::Ry(0.3, 0), WordGate::Cz(0, 1), WordGate::S(1)]
        );
        assert!(parse_gate_word("T").is_err());
        assert!(parse_gate_word("RY(x)").is_err());
        assert!(parse_gate_word("RY(0.3").is_err());
    }

    #[test]
    fn far_cz_is_rejected() {
        assert!(compile_unit_cell_circuit("CZ(0,2)", 3).is_err());
        assert!(compile_unit_cell_circuit("H(2)", 2).is_err());
    }

    #[test]
    fn rows_have_their_settings() {
        assert_eq!(CellGate::S.setting().m4, Axis::Z);
        assert_eq!(CellGate::Cz.setting().m5, Axis::Y);
        assert!(CellGate::HRy(0.4).setting().sign_from_q1);
    }
}

// SPDX-License-Identifier: Apache-2.0
//! Dense statevectors over named qubits.
//!
//! The qubit at position 0 of `order` is the most significant bit of the
//! amplitude index. Qubits are appended at the end and removed on
//! measurement.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::clifford::{pauli_matrix, Mat2};
use crate::error::{Error, Result};
use crate::graph::{Axis, MeasurementLabel, Node};
use crate::pauli::PauliString;

pub const C0: Complex64 = Complex64::new(0.0, 0.0);
pub const C1: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    order: Vec<Node>,
    amps: Vec<Complex64>,
}

impl Default for StateVector {
    fn default() -> Self {
        Self::scalar()
    }
}

impl StateVector {
    /// The zero-qubit state with amplitude 1.
    pub fn scalar() -> Self {
        StateVector {
            order: Vec::new(),
            amps: vec![C1],
        }
    }

    pub fn from_amplitudes(order: Vec<Node>, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1usize << order.len() {
            return Err(Error::Dimension(format!(
                "{} amplitudes for {} qubits",
                amps.len(),
                order.len()
            )));
        }
        let mut seen = order.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != order.len() {
            return Err(Error::Dimension("repeated qubit in order".into()));
        }
        Ok(StateVector { order, amps })
    }

    /// Product of `|+⟩` on every node.
    pub fn plus(order: &[Node]) -> Self {
        let mut s = Self::scalar();
        for &v in order {
            s.push_qubit(v, [C1, C1].map(|a| a / 2f64.sqrt()));
        }
        s
    }

    /// Computational basis state; `bits[k]` belongs to `order[k]`.
    pub fn basis(order: &[Node], bits: &[u8]) -> Self {
        let n = order.len();
        let mut idx = 0usize;
        for (k, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                idx |= 1 << (n - 1 - k);
            }
        }
        let mut amps = vec![C0; 1 << n];
        amps[idx] = C1;
        StateVector {
            order: order.to_vec(),
            amps,
        }
    }

    /// Gaussian random amplitudes, normalized.
    pub fn random(order: &[Node], rng: &mut impl Rng) -> Self {
        let amps: Vec<Complex64> = (0..1usize << order.len())
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let mut s = StateVector {
            order: order.to_vec(),
            amps,
        };
        s.normalize();
        s
    }

    pub fn order(&self) -> &[Node] {
        &self.order
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn num_qubits(&self) -> usize {
        self.order.len()
    }

    pub fn contains(&self, v: Node) -> bool {
        self.order.contains(&v)
    }

    fn position(&self, v: Node) -> Result<usize> {
        self.order
            .iter()
            .position(|&w| w == v)
            .ok_or(Error::UnknownNode(v))
    }

    fn bit(&self, v: Node) -> Result<usize> {
        Ok(self.order.len() - 1 - self.position(v)?)
    }

    /// Appends `v` in the single-qubit state `(a0, a1)`.
    pub fn push_qubit(&mut self, v: Node, a: [Complex64; 2]) {
        let mut amps = Vec::with_capacity(self.amps.len() * 2);
        for &x in &self.amps {
            amps.push(x * a[0]);
            amps.push(x * a[1]);
        }
        self.amps = amps;
        self.order.push(v);
    }

    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for &x in &self.amps {
            for &y in &other.amps {
                amps.push(x * y);
            }
        }
        let mut order = self.order.clone();
        order.extend(&other.order);
        StateVector { order, amps }
    }

    pub fn apply_1q(&mut self, v: Node, m: &Mat2) -> Result<()> {
        let b = self.bit(v)?;
        let mask = 1usize << b;
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let (x0, x1) = (self.amps[i], self.amps[i | mask]);
                self.amps[i] = m[(0, 0)] * x0 + m[(0, 1)] * x1;
                self.amps[i | mask] = m[(1, 0)] * x0 + m[(1, 1)] * x1;
            }
        }
        Ok(())
    }

    pub fn apply_cz(&mut self, a: Node, b: Node) -> Result<()> {
        let mask = (1usize << self.bit(a)?) | (1usize << self.bit(b)?);
        for (i, x) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *x = -*x;
            }
        }
        Ok(())
    }

    pub fn apply_pauli(&mut self, v: Node, a: Axis) -> Result<()> {
        self.apply_1q(v, &pauli_matrix(a))
    }

    pub fn apply_pauli_string(&mut self, p: &PauliString) -> Result<()> {
        for (&v, &a) in &p.letters {
            self.apply_pauli(v, a)?;
        }
        let ph = [C1, Complex64::i(), -C1, -Complex64::i()][p.phase as usize];
        self.scale(ph);
        Ok(())
    }

    pub fn scale(&mut self, c: Complex64) {
        for x in &mut self.amps {
            *x *= c;
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|x| x.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            self.scale(Complex64::new(1.0 / n, 0.0));
        }
    }

    /// Projects `v` onto `⟨e|` and removes it; the result is not normalized.
    pub fn project(&self, v: Node, e: [Complex64; 2]) -> Result<StateVector> {
        let b = self.bit(v)?;
        let pos = self.position(v)?;
        let mask = 1usize << b;
        let low = mask - 1;
        let mut amps = Vec::with_capacity(self.amps.len() / 2);
        for j in 0..self.amps.len() / 2 {
            let i0 = ((j & !low) << 1) | (j & low);
            let i1 = i0 | mask;
            amps.push(e[0].conj() * self.amps[i0] + e[1].conj() * self.amps[i1]);
        }
        let mut order = self.order.clone();
        order.remove(pos);
        Ok(StateVector { order, amps })
    }

    /// Measures `label` on `v`, forcing `outcome`; outcome 0 is the `+1`
    /// eigenvalue. Returns the unnormalized post-measurement state, whose
    /// squared norm relative to the input's is the branch probability.
    pub fn measure_forced(&self, v: Node, label: &MeasurementLabel, outcome: u8) -> Result<StateVector> {
        self.project(v, eigenvector(label, outcome))
    }

    /// Normalized forced measurement; fails on a zero-probability branch.
    pub fn measure(&self, v: Node, label: &MeasurementLabel, outcome: u8) -> Result<(f64, StateVector)> {
        let mut post = self.measure_forced(v, label, outcome)?;
        let p = post.norm_sqr() / self.norm_sqr();
        if p < 1e-14 {
            return Err(Error::ZeroProbability { node: v, outcome });
        }
        post.normalize();
        Ok((p, post))
    }

    /// Amplitudes with qubits rearranged into `order`.
    pub fn reordered(&self, order: &[Node]) -> Result<StateVector> {
        if order.len() != self.order.len() {
            return Err(Error::Dimension("reorder needs the same qubits".into()));
        }
        let n = order.len();
        let bits: Vec<usize> = order.iter().map(|&v| self.bit(v)).collect::<Result<_>>()?;
        let mut amps = vec![C0; self.amps.len()];
        for (j, a) in amps.iter_mut().enumerate() {
            let mut i = 0usize;
            for (k, &b) in bits.iter().enumerate() {
                if j >> (n - 1 - k) & 1 == 1 {
                    i |= 1 << b;
                }
            }
            *a = self.amps[i];
        }
        Ok(StateVector {
            order: order.to_vec(),
            amps,
        })
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        let o = other.reordered(&self.order)?;
        Ok(self.amps.iter().zip(&o.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨a|b⟩|² / (‖a‖² ‖b‖²)`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        let ip = self.inner(other)?;
        Ok(ip.norm_sqr() / (self.norm_sqr() * other.norm_sqr()))
    }
}

/// Eigenvector of the labeled observable for `outcome` (0 is `+1`).
pub fn eigenvector(label: &MeasurementLabel, outcome: u8) -> [Complex64; 2] {
    let [nx, ny, nz] = label.bloch();
    let theta = nz.clamp(-1.0, 1.0).acos();
    let phi = ny.atan2(nx);
    let e = Complex64::from_polar(1.0, phi);
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    if outcome & 1 == 0 {
        [Complex64::new(c, 0.0), e * s]
    } else {
        [Complex64::new(s, 0.0), -e * c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::rotation;

    #[test]
    fn eigenvectors_are_eigenvectors() {
        for label in [
            MeasurementLabel::xy(0.7),
            MeasurementLabel::xz(-1.2),
            MeasurementLabel::yz(2.9),
            MeasurementLabel::Axis(Axis::Y),
        ] {
            let [x, y, z] = label.bloch();
            let obs = pauli_matrix(Axis::X) * Complex64::new(x, 0.0)
                + pauli_matrix(Axis::Y) * Complex64::new(y, 0.0)
                + pauli_matrix(Axis::Z) * Complex64::new(z, 0.0);
            for o in 0..2u8 {
                let e = eigenvector(&label, o);
                let v = nalgebra::Vector2::new(e[0], e[1]);
                let w = obs * v;
                let sign = if o == 0 { 1.0 } else { -1.0 };
                assert!((w - v * Complex64::new(sign, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn yz_measurement_is_rotated_z_measurement() {
        let mut rng = rand::thread_rng();
        let s = StateVector::random(&[0, 1], &mut rng);
        let t = 0.83;
        let direct = s.measure_forced(0, &MeasurementLabel::yz(t), 1).unwrap();
        let mut r = s.clone();
        r.apply_1q(0, &rotation(Axis::X, -t)).unwrap();
        let via_z = r.measure_forced(0, &MeasurementLabel::Axis(Axis::Z), 1).unwrap();
        assert!((direct.fidelity(&via_z).unwrap() - 1.0).abs() < 1e-12);
        assert!((direct.norm_sqr() - via_z.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn edge_state_amplitudes() {
        let mut s = StateVector::plus(&[0, 1]);
        s.apply_cz(0, 1).unwrap();
        let want = [0.5, 0.5, 0.5, -0.5];
        for (a, w) in s.amplitudes().iter().zip(want) {
            assert!((a - Complex64::new(w, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn reorder_round_trip() {
        let mut rng = rand::thread_rng();
        let s = StateVector::random(&[3, 1, 2], &mut rng);
        let r = s.reordered(&[1, 2, 3]).unwrap();
        assert!((s.fidelity(&r).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(r.reordered(&[3, 1, 2]).unwrap(), s);
    }

    #[test]
    fn plus_measured_in_z_is_even() {
        let s = StateVector::plus(&[5]);
        let (p, _) = s.measure(5, &MeasurementLabel::Axis(Axis::Z), 1).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
    }
}

// SPDX-License-Identifier: Apache-2.0
//! Small dense operators for comparing implemented and target gates. Wire 0
//! is the most significant tensor factor.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::clifford::{pauli_matrix, Mat2};
use crate::graph::{Axis, Node};
use crate::pauli::PauliString;

pub type Matrix = DMatrix<Complex64>;

pub fn single(m: &Mat2) -> Matrix {
    Matrix::from_fn(2, 2, |r, c| m[(r, c)])
}

pub fn identity(dim: usize) -> Matrix {
    Matrix::identity(dim, dim)
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    a.kronecker(b)
}

/// `m` on `wire` of `width` wires.
pub fn on_wire(m: &Mat2, wire: usize, width: usize) -> Matrix {
    (0..width).fold(identity(1), |acc, w| {
        let f = if w == wire { single(m) } else { identity(2) };
        kron(&acc, &f)
    })
}

pub fn cz(a: usize, b: usize, width: usize) -> Matrix {
    let n = 1usize << width;
    Matrix::from_fn(n, n, |r, c| {
        if r != c {
            Complex64::new(0.0, 0.0)
        } else if r >> (width - 1 - a) & 1 == 1 && r >> (width - 1 - b) & 1 == 1 {
            Complex64::new(-1.0, 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        }
    })
}

pub fn diagonal(phases: &[f64]) -> Matrix {
    Matrix::from_diagonal(&nalgebra::DVector::from_iterator(
        phases.len(),
        phases.iter().map(|&a| Complex64::from_polar(1.0, a)),
    ))
}

/// Matrix of a Pauli string whose nodes are wire indices, phase included.
pub fn pauli_string_matrix(p: &PauliString, width: usize) -> Matrix {
    let mut m = identity(1);
    for w in 0..width {
        let f = match p.get(w as Node) {
            Some(a) => single(&pauli_matrix(a)),
            None => identity(2),
        };
        m = kron(&m, &f);
    }
    m * [1.0, 0.0, -1.0, 0.0]
        .iter()
        .zip([0.0, 1.0, 0.0, -1.0])
        .map(|(&re, im)| Complex64::new(re, im))
        .nth(p.phase as usize)
        .unwrap()
}

/// `|tr(a†b)|² / (‖a‖² ‖b‖²)`: 1 iff `a` and `b` agree up to a scalar.
pub fn matrix_fidelity(a: &Matrix, b: &Matrix) -> f64 {
    if a.shape() != b.shape() {
        return 0.0;
    }
    let ip: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    let na: f64 = a.iter().map(|x| x.norm_sqr()).sum();
    let nb: f64 = b.iter().map(|x| x.norm_sqr()).sum();
    ip.norm_sqr() / (na * nb)
}

/// Rescales the global phase so the first nonzero entry of the first column
/// is positive real.
pub fn fix_phase(m: &Matrix) -> Matrix {
    let pivot = m.column(0).iter().copied().find(|x| x.norm() > 1e-9);
    match pivot {
        Some(p) => m * (p.conj() / p.norm()),
        None => m.clone(),
    }
}

/// The Pauli `P` (nodes are wire indices, phase 0) with `a ≈ P·b` up to
/// global phase, if any.
pub fn equal_up_to_pauli(a: &Matrix, b: &Matrix) -> Option<PauliString> {
    let width = a.nrows().trailing_zeros() as usize;
    if a.shape() != b.shape() || 1usize << width != a.nrows() {
        return None;
    }
    (0..1usize << (2 * width))
        .map(|code| {
            let letters = (0..width).filter_map(|w| {
                let d = (code >> (2 * w)) & 3;
                (d > 0).then(|| (w as Node, Axis::from_index(d - 1)))
            });
            PauliString {
                letters: letters.collect(),
                phase: 0,
            }
        })
        .find(|p| matrix_fidelity(a, &(pauli_string_matrix(p, width) * b)) > 1.0 - 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::hadamard_matrix;

    #[test]
    fn xh_is_pauli_times_h() {
        let h = single(&hadamard_matrix());
        let xh = single(&pauli_matrix(Axis::X)) * &h;
        let p = equal_up_to_pauli(&xh, &h).unwrap();
        assert_eq!(p, PauliString::single(0, Axis::X));
        assert_eq!(equal_up_to_pauli(&h, &h).unwrap(), PauliString::identity());
    }

    #[test]
    fn pauli_string_matrix_matches_products() {
        let x = PauliString::single(0, Axis::X);
        let y = PauliString::single(0, Axis::Y);
        let lhs = pauli_string_matrix(&x.multiply(&y), 1);
        let rhs = pauli_string_matrix(&x, 1) * pauli_string_matrix(&y, 1);
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn cz_is_diagonal_sign() {
        let m = cz(0, 1, 2);
        assert_eq!(m[(3, 3)], Complex64::new(-1.0, 0.0));
        assert_eq!(m[(2, 2)], Complex64::new(1.0, 0.0));
    }
}

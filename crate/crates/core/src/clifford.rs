// SPDX-License-Identifier: Apache-2.0
//! The 24 single-qubit Cliffords modulo phase, stored as signed axis permutations.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::graph::{Axis, MeasurementLabel, Node};

pub type Mat2 = Matrix2<Complex64>;

const TOL: f64 = 1e-9;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_matrix(a: Axis) -> Mat2 {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    match a {
        Axis::X => Mat2::new(z, o, o, z),
        Axis::Y => Mat2::new(z, c(0.0, -1.0), c(0.0, 1.0), z),
        Axis::Z => Mat2::new(o, z, z, -o),
    }
}

pub fn hadamard_matrix() -> Mat2 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Mat2::new(c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0))
}

pub fn s_matrix() -> Mat2 {
    Mat2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0))
}

/// `exp(i t A / 2)`, the rotation convention used throughout the crate.
pub fn rotation(a: Axis, t: f64) -> Mat2 {
    Mat2::identity() * c((t / 2.0).cos(), 0.0) + pauli_matrix(a) * c(0.0, (t / 2.0).sin())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedAxis {
    pub axis: Axis,
    pub neg: bool,
}

impl SignedAxis {
    pub fn pos(axis: Axis) -> Self {
        SignedAxis { axis, neg: false }
    }
}

/// Conjugation action `P ↦ C P C†` recorded on X and Z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalClifford {
    x: SignedAxis,
    z: SignedAxis,
}

struct Entry {
    clifford: LocalClifford,
    matrix: Mat2,
    name: String,
}

fn table() -> &'static [Entry] {
    static TABLE: OnceLock<Vec<Entry>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let gens: [(&str, Mat2); 6] = [
            ("X", pauli_matrix(Axis::X)),
            ("Y", pauli_matrix(Axis::Y)),
            ("Z", pauli_matrix(Axis::Z)),
            ("H", hadamard_matrix()),
            ("S", s_matrix()),
            ("Sdg", s_matrix().adjoint()),
        ];
        let mut seen: BTreeMap<LocalClifford, usize> = BTreeMap::new();
        let mut out: Vec<Entry> = Vec::new();
        let mut queue = VecDeque::new();
        let id = Mat2::identity();
        let key = action_of(&id).expect("identity is Clifford");
        seen.insert(key, 0);
        out.push(Entry {
            clifford: key,
            matrix: id,
            name: "I".into(),
        });
        queue.push_back(0);
        while let Some(i) = queue.pop_front() {
            for (gname, g) in &gens {
                let m = out[i].matrix * g;
                let key = action_of(&m).expect("product of Cliffords");
                if seen.contains_key(&key) {
                    continue;
                }
                let name = if out[i].name == "I" {
                    (*gname).to_string()
                } else {
                    format!("{}{}", out[i].name, gname)
                };
                seen.insert(key, out.len());
                out.push(Entry {
                    clifford: key,
                    matrix: m,
                    name,
                });
                queue.push_back(out.len() - 1);
            }
        }
        assert_eq!(out.len(), 24);
        out
    })
}

fn signed_axis_of(m: &Mat2) -> Option<SignedAxis> {
    for a in Axis::ALL {
        for (neg, s) in [(false, 1.0), (true, -1.0)] {
            if (m - pauli_matrix(a) * c(s, 0.0)).norm() < TOL {
                return Some(SignedAxis { axis: a, neg });
            }
        }
    }
    None
}

fn action_of(u: &Mat2) -> Option<LocalClifford> {
    let conj = |a| u * pauli_matrix(a) * u.adjoint();
    Some(LocalClifford {
        x: signed_axis_of(&conj(Axis::X))?,
        z: signed_axis_of(&conj(Axis::Z))?,
    })
}

fn levi_civita(a: Axis, b: Axis, c: Axis) -> i32 {
    let (a, b, c) = (a.index() as i32, b.index() as i32, c.index() as i32);
    (a - b) * (b - c) * (c - a) / 2
}

impl LocalClifford {
    pub fn identity() -> Self {
        table()[0].clifford
    }

    /// The Clifford a unitary implements, if it is one.
    pub fn from_matrix(m: &Mat2) -> Option<Self> {
        let det = m.determinant();
        if (det.norm() - 1.0).abs() > 1e-6 {
            return None;
        }
        action_of(m)
    }

    pub fn pauli(a: Axis) -> Self {
        Self::from_matrix(&pauli_matrix(a)).unwrap()
    }

    pub fn h() -> Self {
        Self::from_matrix(&hadamard_matrix()).unwrap()
    }

    pub fn s() -> Self {
        Self::from_matrix(&s_matrix()).unwrap()
    }

    pub fn sdg() -> Self {
        Self::from_matrix(&s_matrix().adjoint()).unwrap()
    }

    /// `exp(±i π/4 A)`, the square roots appearing in the graph-state measurement rules.
    pub fn sqrt_pauli(a: Axis, plus: bool) -> Self {
        let t = if plus { std::f64::consts::FRAC_PI_2 } else { -std::f64::consts::FRAC_PI_2 };
        Self::from_matrix(&rotation(a, t)).unwrap()
    }

    pub fn all() -> impl Iterator<Item = LocalClifford> {
        table().iter().map(|e| e.clifford)
    }

    fn entry(&self) -> &'static Entry {
        table().iter().find(|e| e.clifford == *self).expect("closed table")
    }

    /// A representative unitary; its global phase is arbitrary.
    pub fn matrix(&self) -> Mat2 {
        self.entry().matrix
    }

    pub fn name(&self) -> &'static str {
        &self.entry().name
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn is_pauli(&self) -> bool {
        Axis::ALL.iter().all(|&a| self.image(a).axis == a)
    }

    /// `C A C†` as a signed axis.
    pub fn image(&self, a: Axis) -> SignedAxis {
        match a {
            Axis::X => self.x,
            Axis::Z => self.z,
            Axis::Y => {
                let third = Axis::ALL
                    .into_iter()
                    .find(|&t| t != self.x.axis && t != self.z.axis)
                    .unwrap();
                let eps = levi_civita(self.x.axis, self.z.axis, third);
                let sign = -eps * if self.x.neg { -1 } else { 1 } * if self.z.neg { -1 } else { 1 };
                SignedAxis {
                    axis: third,
                    neg: sign < 0,
                }
            }
        }
    }

    /// `C† A C` as a signed axis.
    pub fn preimage(&self, a: Axis) -> SignedAxis {
        self.inverse().image(a)
    }

    /// `self ∘ other`, the Clifford of the matrix product `self · other`.
    pub fn compose(&self, other: &LocalClifford) -> LocalClifford {
        let push = |s: SignedAxis| {
            let t = self.image(s.axis);
            SignedAxis {
                axis: t.axis,
                neg: t.neg ^ s.neg,
            }
        };
        LocalClifford {
            x: push(other.x),
            z: push(other.z),
        }
    }

    pub fn inverse(&self) -> LocalClifford {
        LocalClifford::all()
            .find(|c| c.compose(self).is_identity())
            .expect("group")
    }

    /// Label and outcome flip of `C O C†` where `O` is the observable of `label`.
    pub fn push_label(&self, label: &MeasurementLabel) -> (MeasurementLabel, bool) {
        match *label {
            MeasurementLabel::Axis(a) => {
                let s = self.image(a);
                (MeasurementLabel::Axis(s.axis), s.neg)
            }
            MeasurementLabel::Plane(p, t) => {
                let (ca, sa) = p.frame();
                let ic = self.image(ca);
                let is = self.image(sa);
                let np = crate::graph::Plane::from_axes(ic.axis, is.axis);
                let (nc, _) = np.frame();
                let sc = if ic.neg { -1.0 } else { 1.0 };
                let ss = if is.neg { -1.0 } else { 1.0 };
                let (along_c, along_s) = if ic.axis == nc {
                    (sc * t.cos(), ss * t.sin())
                } else {
                    (ss * t.sin(), sc * t.cos())
                };
                (MeasurementLabel::Plane(np, along_s.atan2(along_c)), false)
            }
        }
    }

    /// Label and outcome flip of `C† O C`: what measuring `label` on `C|ψ⟩` measures on `|ψ⟩`.
    pub fn pull_label(&self, label: &MeasurementLabel) -> (MeasurementLabel, bool) {
        self.inverse().push_label(label)
    }
}

impl fmt::Display for LocalClifford {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One Clifford per node; absent nodes carry the identity. A dressed state is
/// `(⊗ C_v) |G⟩`. Global phase is not tracked.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocalCliffordFrame {
    tags: BTreeMap<Node, LocalClifford>,
}

impl LocalCliffordFrame {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: Node) -> LocalClifford {
        self.tags.get(&v).copied().unwrap_or_else(LocalClifford::identity)
    }

    pub fn set(&mut self, v: Node, c: LocalClifford) {
        if c.is_identity() {
            self.tags.remove(&v);
        } else {
            self.tags.insert(v, c);
        }
    }

    /// Replaces `C_v` by `C_v ∘ u`.
    pub fn then_inner(&mut self, v: Node, u: &LocalClifford) {
        let c = self.get(v).compose(u);
        self.set(v, c);
    }

    pub fn remove(&mut self, v: Node) {
        self.tags.remove(&v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (Node, LocalClifford)> + '_ {
        self.tags.iter().map(|(&v, &c)| (v, c))
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Plane;

    fn obs(l: &MeasurementLabel) -> Mat2 {
        let n = l.bloch();
        Axis::ALL
            .iter()
            .fold(Mat2::zeros(), |acc, &a| acc + pauli_matrix(a) * c(n[a.index()], 0.0))
    }

    #[test]
    fn table_has_named_generators() {
        assert_eq!(LocalClifford::h().name(), "H");
        assert_eq!(LocalClifford::s().name(), "S");
        assert!(LocalClifford::pauli(Axis::Y).is_pauli());
        assert!(!LocalClifford::h().is_pauli());
    }

    #[test]
    fn images_match_matrices_for_all_elements() {
        for cl in LocalClifford::all() {
            let m = cl.matrix();
            for a in Axis::ALL {
                let img = cl.image(a);
                let want = pauli_matrix(img.axis) * c(if img.neg { -1.0 } else { 1.0 }, 0.0);
                assert!((m * pauli_matrix(a) * m.adjoint() - want).norm() < 1e-9);
            }
            assert!(cl.compose(&cl.inverse()).is_identity());
        }
    }

    #[test]
    fn compose_matches_matrix_product() {
        for a in LocalClifford::all() {
            for b in LocalClifford::all() {
                let m = a.matrix() * b.matrix();
                assert_eq!(LocalClifford::from_matrix(&m), Some(a.compose(&b)));
            }
        }
    }

    #[test]
    fn pushed_labels_match_conjugated_observables() {
        let labels = [
            MeasurementLabel::xy(0.7),
            MeasurementLabel::xz(-1.1),
            MeasurementLabel::yz(2.3),
            MeasurementLabel::Axis(Axis::X),
            MeasurementLabel::Axis(Axis::Y),
            MeasurementLabel::Axis(Axis::Z),
        ];
        for cl in LocalClifford::all() {
            let m = cl.matrix();
            for l in &labels {
                let (pl, flip) = cl.push_label(l);
                let sign = if flip { -1.0 } else { 1.0 };
                assert!((m * obs(l) * m.adjoint() - obs(&pl) * c(sign, 0.0)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn s_merges_yz_into_xz() {
        let t = 0.4;
        let (l, flip) = LocalClifford::s().pull_label(&MeasurementLabel::yz(t));
        assert!(!flip);
        assert!(l.is_plane(Plane::XZ));
        assert!((l.angle().unwrap() - t).abs() < 1e-12);
        let sz = LocalClifford::s().compose(&LocalClifford::pauli(Axis::Z));
        let (l, _) = sz.pull_label(&MeasurementLabel::yz(t));
        assert!((l.angle().unwrap() + t).abs() < 1e-12);
    }
}

//! The stabilizer octahedron: Pauli eigenstates, Born rule, projective update
//! and the Clifford representation of the cube rotations.
//!
//! Exact work happens on rational Bloch vectors. The 2×2 complex matrices are
//! a floating-point cross-check layer and never feed back into exact results.

use std::fmt;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::epistemic::{bloch_of, membership, BlochVector, Measurement};
use crate::error::{Error, Result};
use crate::ontic::{Axis, Face, ProbVec8};
use crate::rational::{self, int, l1_norm, Rational};
use crate::rotation::{Rotation, RotationGroup, SignedMatrix3};

pub const TOLERANCE: f64 = 1e-12;

/// A point of the octahedron `‖r‖₁ ≤ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlochState {
    r: BlochVector,
}

impl BlochState {
    pub fn new(r: BlochVector) -> Result<Self> {
        let norm = l1_norm(&r);
        if norm > int(1) {
            return Err(Error::OutsideOctahedron(norm.to_string()));
        }
        Ok(BlochState { r })
    }

    pub fn vector(&self) -> &BlochVector {
        &self.r
    }

    pub fn rotated(&self, t: &Rotation) -> BlochState {
        BlochState { r: t.matrix().apply_rational(&self.r) }
    }

    pub fn to_f64(&self) -> [f64; 3] {
        self.r.each_ref().map(|q| q.to_f64().expect("finite rational"))
    }
}

impl fmt::Display for BlochState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r[0], self.r[1], self.r[2])
    }
}

impl Serialize for BlochState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        rational::serialize_vec3(&self.r, s)
    }
}

/// `|0⟩, |1⟩, |+⟩, |−⟩, |+i⟩, |−i⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliEigenstate {
    Zero,
    One,
    Plus,
    Minus,
    PlusI,
    MinusI,
}

impl PauliEigenstate {
    pub const ALL: [PauliEigenstate; 6] = [
        PauliEigenstate::Zero,
        PauliEigenstate::One,
        PauliEigenstate::Plus,
        PauliEigenstate::Minus,
        PauliEigenstate::PlusI,
        PauliEigenstate::MinusI,
    ];

    /// The face state with the same outcome statistics.
    pub fn face(self) -> Face {
        match self {
            PauliEigenstate::Zero => Face::U,
            PauliEigenstate::One => Face::D,
            PauliEigenstate::Plus => Face::F,
            PauliEigenstate::Minus => Face::B,
            PauliEigenstate::PlusI => Face::R,
            PauliEigenstate::MinusI => Face::L,
        }
    }

    pub fn from_face(face: Face) -> Self {
        Self::ALL.into_iter().find(|k| k.face() == face).unwrap()
    }

    pub fn axis(self) -> Axis {
        self.face().axis()
    }

    /// Bloch vector of the pure state.
    pub fn direction(self) -> [i8; 3] {
        self.face().normal()
    }

    pub fn opposite(self) -> Self {
        Self::from_face(self.face().opposite())
    }

    /// State vector `(⟨0|κ⟩, ⟨1|κ⟩)`.
    pub fn ket(self) -> [Complex64; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match self {
            PauliEigenstate::Zero => [c(1.0, 0.0), c(0.0, 0.0)],
            PauliEigenstate::One => [c(0.0, 0.0), c(1.0, 0.0)],
            PauliEigenstate::Plus => [c(h, 0.0), c(h, 0.0)],
            PauliEigenstate::Minus => [c(h, 0.0), c(-h, 0.0)],
            PauliEigenstate::PlusI => [c(h, 0.0), c(0.0, h)],
            PauliEigenstate::MinusI => [c(h, 0.0), c(0.0, -h)],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PauliEigenstate::Zero => "0",
            PauliEigenstate::One => "1",
            PauliEigenstate::Plus => "+",
            PauliEigenstate::Minus => "-",
            PauliEigenstate::PlusI => "+i",
            PauliEigenstate::MinusI => "-i",
        }
    }
}

impl fmt::Display for PauliEigenstate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}⟩", self.label())
    }
}

pub type Matrix2 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity2() -> Matrix2 {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]
}

/// `σ_x, σ_y, σ_z`.
pub fn pauli(axis: Axis) -> Matrix2 {
    match axis {
        Axis::X => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        Axis::Y => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
        Axis::Z => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
    }
}

pub fn mat_mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j]))
}

pub fn adjoint(a: &Matrix2) -> Matrix2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].conj()))
}

pub fn trace(a: &Matrix2) -> Complex64 {
    a[0][0] + a[1][1]
}

fn scale(a: &Matrix2, s: Complex64) -> Matrix2 {
    a.map(|row| row.map(|x| x * s))
}

fn add(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] + b[i][j]))
}

pub fn max_abs_diff(a: &Matrix2, b: &Matrix2) -> f64 {
    (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| (a[i][j] - b[i][j]).norm())
        .fold(0.0, f64::max)
}

/// Floating-point density operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(pub Matrix2);

impl DensityMatrix {
    pub fn matrix(&self) -> &Matrix2 {
        &self.0
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        let m = &self.0;
        let tr = (m[0][0] + m[1][1]).re;
        let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).re;
        let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
        [tr / 2.0 - disc, tr / 2.0 + disc]
    }

    /// Hermitian, unit trace and positive semidefinite within `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        let hermitian = max_abs_diff(&self.0, &adjoint(&self.0)) <= tol;
        let unit_trace = (trace(&self.0) - c(1.0, 0.0)).norm() <= tol;
        hermitian && unit_trace && self.eigenvalues()[0] >= -tol
    }

    /// `⟨κ|ρ|κ⟩`, computed as `Tr(|κ⟩⟨κ| ρ)`.
    pub fn born(&self, kappa: PauliEigenstate) -> f64 {
        let k = kappa.ket();
        let projector: Matrix2 = std::array::from_fn(|i| std::array::from_fn(|j| k[i] * k[j].conj()));
        trace(&mat_mul(&projector, &self.0)).re
    }

    pub fn conjugated(&self, u: &Matrix2) -> DensityMatrix {
        DensityMatrix(mat_mul(&mat_mul(u, &self.0), &adjoint(u)))
    }
}

impl Serialize for DensityMatrix {
    /// Four `[re, im]` pairs in row-major order, 17 significant digits each.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(4))?;
        for z in self.0.iter().flatten() {
            seq.serialize_element(&[format!("{:.16e}", z.re), format!("{:.16e}", z.im)])?;
        }
        seq.end()
    }
}

pub fn embed(p: &ProbVec8) -> Result<BlochState> {
    if !membership(p).is_member() {
        return Err(Error::NotEpistemic);
    }
    Ok(BlochState { r: bloch_of(p) })
}

/// `ρ = (I + r·σ) / 2`.
pub fn density_of(b: &BlochState) -> DensityMatrix {
    let r = b.to_f64();
    let mut rho = identity2();
    for axis in Axis::ALL {
        rho = add(&rho, &scale(&pauli(axis), c(r[axis.index()], 0.0)));
    }
    DensityMatrix(scale(&rho, c(0.5, 0.0)))
}

/// `(1 + n_κ·r) / 2`, exact.
pub fn born(kappa: PauliEigenstate, b: &BlochState) -> Rational {
    let n = kappa.direction();
    let dot: Rational = (0..3).map(|k| int(i64::from(n[k])) * &b.r[k]).sum();
    (int(1) + dot) / int(2)
}

pub fn projective_update(axis: Axis, outcome: PauliEigenstate) -> Result<BlochState> {
    if outcome.axis() != axis {
        return Err(Error::OutcomeNotOnAxis { outcome: outcome.label().to_string(), axis: axis.symbol() });
    }
    Ok(BlochState { r: outcome.direction().map(|x| int(i64::from(x))) })
}

/// Born probabilities for both outcomes of a Pauli measurement.
pub fn born_distribution(m: Measurement, b: &BlochState) -> [(PauliEigenstate, Rational); 2] {
    m.faces().map(|f| {
        let k = PauliEigenstate::from_face(f);
        (k, born(k, b))
    })
}

/// `exp(−iθ n·σ / 2)` for the axis–angle of an integer rotation matrix.
pub fn unitary_from_rotation(m: &SignedMatrix3) -> Matrix2 {
    let r = m.0.map(|row| row.map(f64::from));
    let cos_theta = ((r[0][0] + r[1][1] + r[2][2] - 1.0) / 2.0).clamp(-1.0, 1.0);
    let theta = cos_theta.acos();
    if theta.abs() < 1e-9 {
        return identity2();
    }
    let axial = [r[2][1] - r[1][2], r[0][2] - r[2][0], r[1][0] - r[0][1]];
    let sin_theta = theta.sin();
    let n = if sin_theta.abs() > 1e-9 {
        axial.map(|a| a / (2.0 * sin_theta))
    } else {
        // θ = π: R = 2nnᵀ − I, take the largest column of (R + I)/2
        let k = (0..3).max_by(|&a, &b| r[a][a].total_cmp(&r[b][b])).unwrap();
        let col: [f64; 3] = std::array::from_fn(|i| (r[i][k] + if i == k { 1.0 } else { 0.0 }) / 2.0);
        let norm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
        col.map(|x| x / norm)
    };
    let half = theta / 2.0;
    let mut u = scale(&identity2(), c(half.cos(), 0.0));
    for axis in Axis::ALL {
        u = add(&u, &scale(&pauli(axis), c(0.0, -half.sin() * n[axis.index()])));
    }
    u
}

/// A 2×2 unitary paired with the exact SO(3) matrix it is meant to realize.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CliffordUnitary {
    pub unitary: Matrix2,
    pub rotation: SignedMatrix3,
}

impl CliffordUnitary {
    pub fn is_unitary(&self, tol: f64) -> bool {
        max_abs_diff(&mat_mul(&self.unitary, &adjoint(&self.unitary)), &identity2()) <= tol
    }

    /// `A_jk = ½ Tr(σ_j U σ_k U†)`.
    pub fn adjoint_action(&self) -> [[f64; 3]; 3] {
        let u = &self.unitary;
        std::array::from_fn(|j| {
            std::array::from_fn(|k| {
                let moved = mat_mul(&mat_mul(u, &pauli(Axis::from_index(k))), &adjoint(u));
                0.5 * trace(&mat_mul(&pauli(Axis::from_index(j)), &moved)).re
            })
        })
    }

    /// Largest entrywise deviation of the adjoint action from the integer matrix.
    pub fn adjoint_error(&self) -> f64 {
        let a = self.adjoint_action();
        (0..3)
            .flat_map(|j| (0..3).map(move |k| (j, k)))
            .map(|(j, k)| (a[j][k] - f64::from(self.rotation.0[j][k])).abs())
            .fold(0.0, f64::max)
    }
}

/// `a = e^{iφ} b` for some phase, within `tol`.
pub fn equal_up_to_phase(a: &Matrix2, b: &Matrix2, tol: f64) -> bool {
    // phase from the largest entry of b
    let (i, j) = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .max_by(|&(i, j), &(k, l)| b[i][j].norm().total_cmp(&b[k][l].norm()))
        .unwrap();
    if b[i][j].norm() < tol {
        return max_abs_diff(a, b) <= tol;
    }
    let phase = a[i][j] / b[i][j];
    if (phase.norm() - 1.0).abs() > tol {
        return false;
    }
    max_abs_diff(a, &scale(b, phase)) <= tol
}

/// Unitaries for every element of a rotation group, built as products of the
/// generator unitaries along the group's spanning tree.
#[derive(Debug, Clone)]
pub struct CliffordRepresentation {
    unitaries: Vec<CliffordUnitary>,
}

impl CliffordRepresentation {
    pub fn new(group: &RotationGroup) -> Self {
        let gens: Vec<Matrix2> = group.generators().iter().map(|g| unitary_from_rotation(g.matrix())).collect();
        let mut unitaries: Vec<CliffordUnitary> = Vec::with_capacity(group.len());
        for (i, r) in group.elements().iter().enumerate() {
            let unitary = match group.spanning_parent(i) {
                None => identity2(),
                Some((parent, k)) => mat_mul(&gens[k], &unitaries[parent].unitary),
            };
            unitaries.push(CliffordUnitary { unitary, rotation: *r.matrix() });
        }
        CliffordRepresentation { unitaries }
    }

    pub fn canonical() -> &'static CliffordRepresentation {
        static REP: std::sync::OnceLock<CliffordRepresentation> = std::sync::OnceLock::new();
        REP.get_or_init(|| CliffordRepresentation::new(RotationGroup::canonical()))
    }

    pub fn get(&self, index: usize) -> &CliffordUnitary {
        &self.unitaries[index]
    }

    pub fn unitaries(&self) -> &[CliffordUnitary] {
        &self.unitaries
    }
}

/// Clifford unitary for a rotation of the canonical group.
pub fn clifford_of(t: &Rotation) -> CliffordUnitary {
    let i = RotationGroup::canonical().index_of(t).expect("rotation belongs to the cube group");
    *CliffordRepresentation::canonical().get(i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epistemic::{face_state, state_from_bloch};
    use crate::rational::rat;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn bloch(x: (i64, i64), y: (i64, i64), z: (i64, i64)) -> BlochState {
        BlochState::new([rat(x.0, x.1), rat(y.0, y.1), rat(z.0, z.1)]).unwrap()
    }

    #[test]
    fn embed_examples() {
        assert_eq!(embed(&face_state(Face::B)).unwrap(), bloch((-1, 1), (0, 1), (0, 1)));
        assert_eq!(embed(&ProbVec8::uniform()).unwrap(), bloch((0, 1), (0, 1), (0, 1)));
        let e1 = crate::ontic::extremal(crate::ontic::OnticState::new(1).unwrap());
        assert_eq!(embed(&e1), Err(Error::NotEpistemic));
    }

    #[test]
    fn correspondence_table() {
        let pairs = [
            (Face::U, "0"),
            (Face::D, "1"),
            (Face::F, "+"),
            (Face::B, "-"),
            (Face::R, "+i"),
            (Face::L, "-i"),
        ];
        for (face, label) in pairs {
            let k = PauliEigenstate::from_face(face);
            assert_eq!(k.label(), label);
            let b = embed(&face_state(face)).unwrap();
            assert_eq!(born(k, &b), int(1));
            // the ket's own projector matches the pure Bloch vector
            let rho = density_of(&b);
            assert!((rho.born(k) - 1.0).abs() < TOLERANCE);
        }
    }

    #[test]
    fn density_examples() {
        let close = |a: &Matrix2, b: [[f64; 2]; 2]| {
            max_abs_diff(a, &b.map(|r| r.map(|x| c(x, 0.0)))) < TOLERANCE
        };
        assert!(close(density_of(&bloch((0, 1), (0, 1), (1, 1))).matrix(), [[1.0, 0.0], [0.0, 0.0]]));
        assert!(close(density_of(&bloch((1, 1), (0, 1), (0, 1))).matrix(), [[0.5, 0.5], [0.5, 0.5]]));
        assert!(close(density_of(&bloch((0, 1), (0, 1), (0, 1))).matrix(), [[0.5, 0.0], [0.0, 0.5]]));
        let rho = density_of(&bloch((1, 3), (-1, 4), (1, 5)));
        assert!(rho.is_valid(TOLERANCE));
        let [lo, hi] = rho.eigenvalues();
        assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
    }

    #[test]
    fn born_examples() {
        assert_eq!(born(PauliEigenstate::Zero, &bloch((0, 1), (0, 1), (1, 1))), int(1));
        assert_eq!(born(PauliEigenstate::Plus, &bloch((0, 1), (0, 1), (1, 1))), rat(1, 2));
        assert_eq!(born(PauliEigenstate::MinusI, &bloch((1, 2), (0, 1), (1, 2))), rat(1, 2));
    }

    #[test]
    fn born_normalization_and_trace_form() {
        let b = bloch((1, 3), (1, 6), (-1, 2));
        let rho = density_of(&b);
        for k in PauliEigenstate::ALL {
            assert_eq!(born(k, &b) + born(k.opposite(), &b), int(1));
            assert!((born(k, &b).to_f64().unwrap() - rho.born(k)).abs() < TOLERANCE);
        }
    }

    #[test]
    fn projective_update_examples() {
        assert_eq!(projective_update(Axis::Z, PauliEigenstate::One).unwrap(), bloch((0, 1), (0, 1), (-1, 1)));
        assert_eq!(projective_update(Axis::X, PauliEigenstate::Plus).unwrap(), bloch((1, 1), (0, 1), (0, 1)));
        assert!(matches!(
            projective_update(Axis::X, PauliEigenstate::Zero),
            Err(Error::OutcomeNotOnAxis { .. })
        ));
        for face in Face::ALL {
            let m = Measurement::new(face.axis());
            let epistemic = crate::epistemic::conditional_update(m, face).unwrap();
            let quantum = projective_update(face.axis(), PauliEigenstate::from_face(face)).unwrap();
            assert_eq!(embed(&epistemic).unwrap(), quantum);
        }
    }

    #[test]
    fn generator_unitaries_match_quoted_forms() {
        let h = FRAC_1_SQRT_2;
        for axis in Axis::ALL {
            let expected = add(&scale(&identity2(), c(h, 0.0)), &scale(&pauli(axis), c(0.0, -h)));
            let u = clifford_of(&Rotation::generator(axis));
            assert!(max_abs_diff(&u.unitary, &expected) < TOLERANCE, "{axis}");
            assert!(u.adjoint_error() < TOLERANCE, "{axis}");
        }
    }

    #[test]
    fn all_unitaries_realize_their_rotations() {
        let group = RotationGroup::canonical();
        let rep = CliffordRepresentation::canonical();
        for i in 0..group.len() {
            let u = rep.get(i);
            assert!(u.is_unitary(TOLERANCE));
            assert!(u.adjoint_error() < TOLERANCE, "{}", group.element(i));
            for j in 0..i {
                assert!(!equal_up_to_phase(&u.unitary, &rep.get(j).unitary, 1e-9));
            }
        }
    }

    #[test]
    fn axis_angle_formula_agrees_up_to_phase() {
        for (i, r) in RotationGroup::canonical().elements().iter().enumerate() {
            let direct = unitary_from_rotation(r.matrix());
            assert!(equal_up_to_phase(&direct, &CliffordRepresentation::canonical().get(i).unitary, TOLERANCE));
        }
    }

    #[test]
    fn octahedron_is_invariant() {
        let r = bloch((1, 2), (-1, 3), (1, 6));
        for t in RotationGroup::canonical().elements() {
            assert!(BlochState::new(r.rotated(t).vector().clone()).is_ok());
        }
    }

    #[test]
    fn outside_octahedron() {
        assert!(matches!(
            BlochState::new([rat(1, 2), rat(1, 2), rat(1, 3)]),
            Err(Error::OutsideOctahedron(_))
        ));
        assert!(state_from_bloch(&[rat(1, 2), rat(1, 2), rat(0, 1)]).is_ok());
    }

    #[test]
    fn density_json_has_17_digits() {
        let rho = density_of(&bloch((1, 3), (0, 1), (0, 1)));
        let json = serde_json::to_value(rho).unwrap();
        let entries = json.as_array().unwrap();
        assert_eq!(entries.len(), 4);
        let re01 = entries[1][0].as_str().unwrap();
        assert_eq!(re01, "1.6666666666666666e-1");
        let mantissa = re01.split('e').next().unwrap().replace(['.', '-'], "");
        assert_eq!(mantissa.len(), 17);
    }

    #[test]
    fn bloch_json() {
        let b = bloch((1, 2), (0, 1), (-1, 4));
        assert_eq!(serde_json::to_string(&b).unwrap(), r#"["1/2","0","-1/4"]"#);
    }
}

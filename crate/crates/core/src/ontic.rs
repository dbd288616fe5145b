//! Ontic layer: the eight cube vertices, exact probability vectors over them
//! and column-stochastic maps.
//!
//! Vertices carry a fixed sign-vector chart in axis order `(x, y, z)` with
//! `F` at `x = +1`, `R` at `y = +1` and `U` at `z = +1`. Every face set and
//! every rotation in the crate is read off this chart.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, int, rat, Rational};

/// Sign vectors of vertices 1..=8.
pub const VERTEX_COORDS: [[i8; 3]; 8] = [
    [1, -1, 1],
    [1, 1, 1],
    [-1, 1, 1],
    [-1, -1, 1],
    [1, -1, -1],
    [1, 1, -1],
    [-1, 1, -1],
    [-1, -1, -1],
];

/// A cube vertex ω₁..ω₈.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OnticState(u8);

impl OnticState {
    pub fn new(index: usize) -> Result<Self> {
        if (1..=8).contains(&index) {
            Ok(OnticState(index as u8))
        } else {
            Err(Error::InvalidOnticState(index))
        }
    }

    /// From a zero-based slot; panics outside `0..8`.
    pub(crate) fn from_slot(slot: usize) -> Self {
        assert!(slot < 8, "slot {slot} out of range");
        OnticState(slot as u8 + 1)
    }

    pub fn all() -> impl Iterator<Item = OnticState> {
        (0..8).map(Self::from_slot)
    }

    /// One-based label.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn slot(self) -> usize {
        self.0 as usize - 1
    }

    pub fn coords(self) -> [i8; 3] {
        VERTEX_COORDS[self.slot()]
    }

    /// The diametrically opposite vertex.
    pub fn antipode(self) -> OnticState {
        let [x, y, z] = self.coords();
        let target = [-x, -y, -z];
        let slot = VERTEX_COORDS
            .iter()
            .position(|v| *v == target)
            .expect("chart is closed under negation");
        Self::from_slot(slot)
    }
}

impl fmt::Display for OnticState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ω{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axis {
    #[serde(rename = "x")]
    X,
    #[serde(rename = "y")]
    Y,
    #[serde(rename = "z")]
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn from_index(i: usize) -> Axis {
        Self::ALL[i]
    }

    pub fn symbol(self) -> char {
        ['x', 'y', 'z'][self.index()]
    }

    pub fn from_symbol(c: char) -> Option<Axis> {
        match c {
            'x' => Some(Axis::X),
            'y' => Some(Axis::Y),
            'z' => Some(Axis::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A face of the cube; also the outcome label of a measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Face {
    U,
    D,
    L,
    R,
    F,
    B,
}

impl Face {
    /// Canonical order used for decomposition weight tuples.
    pub const ALL: [Face; 6] = [Face::U, Face::D, Face::L, Face::R, Face::F, Face::B];

    pub fn axis(self) -> Axis {
        match self {
            Face::U | Face::D => Axis::Z,
            Face::L | Face::R => Axis::Y,
            Face::F | Face::B => Axis::X,
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Face::U | Face::R | Face::F => 1,
            Face::D | Face::L | Face::B => -1,
        }
    }

    pub fn from_axis_sign(axis: Axis, sign: i8) -> Face {
        match (axis, sign > 0) {
            (Axis::Z, true) => Face::U,
            (Axis::Z, false) => Face::D,
            (Axis::Y, true) => Face::R,
            (Axis::Y, false) => Face::L,
            (Axis::X, true) => Face::F,
            (Axis::X, false) => Face::B,
        }
    }

    pub fn opposite(self) -> Face {
        Face::from_axis_sign(self.axis(), -self.sign())
    }

    /// Outward unit normal as an integer vector.
    pub fn normal(self) -> [i8; 3] {
        let mut n = [0; 3];
        n[self.axis().index()] = self.sign();
        n
    }

    pub fn contains(self, w: OnticState) -> bool {
        w.coords()[self.axis().index()] == self.sign()
    }

    pub fn vertices(self) -> [OnticState; 4] {
        let mut out = [OnticState(1); 4];
        for (slot, w) in out.iter_mut().zip(OnticState::all().filter(|w| self.contains(*w))) {
            *slot = w;
        }
        out
    }

    pub fn label(self) -> char {
        match self {
            Face::U => 'U',
            Face::D => 'D',
            Face::L => 'L',
            Face::R => 'R',
            Face::F => 'F',
            Face::B => 'B',
        }
    }

    pub fn from_label(c: char) -> Option<Face> {
        Face::ALL.into_iter().find(|f| f.label() == c)
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl Serialize for Face {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label().to_string())
    }
}

impl<'de> Deserialize<'de> for Face {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Face::from_label(c),
            _ => None,
        }
        .ok_or_else(|| serde::de::Error::custom(format!("unknown face {s:?}")))
    }
}

/// Exact probability vector over the eight ontic states.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProbVec8([Rational; 8]);

impl ProbVec8 {
    pub fn new(entries: [Rational; 8]) -> Result<Self> {
        if let Some(q) = entries.iter().find(|q| q.is_negative()) {
            return Err(Error::InvalidProbVec(format!("negative entry {q}")));
        }
        let total: Rational = entries.iter().sum();
        if total != int(1) {
            return Err(Error::InvalidProbVec(format!("entries sum to {total}")));
        }
        Ok(ProbVec8(entries))
    }

    pub(crate) fn new_unchecked(entries: [Rational; 8]) -> Self {
        ProbVec8(entries)
    }

    pub fn uniform() -> Self {
        ProbVec8(std::array::from_fn(|_| rat(1, 8)))
    }

    /// Convex combination `Σ wᵢ pᵢ`; weights must be nonnegative and sum to 1.
    pub fn mixture<'a>(terms: impl IntoIterator<Item = (&'a Rational, &'a ProbVec8)>) -> Result<Self> {
        let mut acc: [Rational; 8] = std::array::from_fn(|_| Rational::zero());
        let mut total = Rational::zero();
        for (w, p) in terms {
            if w.is_negative() {
                return Err(Error::InvalidProbVec(format!("negative mixture weight {w}")));
            }
            total += w;
            for (a, x) in acc.iter_mut().zip(p.0.iter()) {
                *a += w * x;
            }
        }
        if total != int(1) {
            return Err(Error::InvalidProbVec(format!("mixture weights sum to {total}")));
        }
        Ok(ProbVec8(acc))
    }

    pub fn get(&self, w: OnticState) -> &Rational {
        &self.0[w.slot()]
    }

    pub fn entries(&self) -> &[Rational; 8] {
        &self.0
    }

    pub fn into_entries(self) -> [Rational; 8] {
        self.0
    }
}

impl AsRef<[Rational]> for ProbVec8 {
    fn as_ref(&self) -> &[Rational] {
        &self.0
    }
}

impl fmt::Display for ProbVec8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, q) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for ProbVec8 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(8))?;
        for q in &self.0 {
            seq.serialize_element(&rational::to_string(q))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for ProbVec8 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = rational::deserialize_vec(d)?;
        let arr: [Rational; 8] = v
            .try_into()
            .map_err(|v: Vec<_>| serde::de::Error::invalid_length(v.len(), &"8 entries"))?;
        ProbVec8::new(arr).map_err(serde::de::Error::custom)
    }
}

/// The basis vector concentrated on `w`.
pub fn extremal(w: OnticState) -> ProbVec8 {
    ProbVec8(std::array::from_fn(|j| if j == w.slot() { int(1) } else { Rational::zero() }))
}

/// Exact dot product; accepts probability vectors and signed differences alike.
pub fn inner(a: &impl AsRef<[Rational]>, b: &impl AsRef<[Rational]>) -> Rational {
    debug_assert_eq!((a.as_ref().len(), b.as_ref().len()), (8, 8));
    a.as_ref().iter().zip(b.as_ref().iter()).map(|(x, y)| x * y).sum()
}

/// 8×8 exact matrix acting on column vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StochasticMatrix8([[Rational; 8]; 8]);

impl StochasticMatrix8 {
    /// Checks nonnegativity and unit column sums.
    pub fn new(m: [[Rational; 8]; 8]) -> Result<Self> {
        for j in 0..8 {
            let mut col = Rational::zero();
            for row in &m {
                if row[j].is_negative() {
                    return Err(Error::InvalidProbVec(format!("negative entry in column {}", j + 1)));
                }
                col += &row[j];
            }
            if col != int(1) {
                return Err(Error::InvalidProbVec(format!("column {} sums to {col}", j + 1)));
            }
        }
        Ok(StochasticMatrix8(m))
    }

    /// One-based `(row, col)` entry.
    pub fn entry(&self, row: usize, col: usize) -> &Rational {
        &self.0[row - 1][col - 1]
    }

    pub fn rows(&self) -> &[[Rational; 8]; 8] {
        &self.0
    }

    pub fn mul(&self, other: &StochasticMatrix8) -> StochasticMatrix8 {
        StochasticMatrix8(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..8).map(|k| &self.0[i][k] * &other.0[k][j]).sum())
        }))
    }

    pub fn transpose(&self) -> [[Rational; 8]; 8] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i].clone()))
    }
}

/// `M₁`: averages within the upper and within the lower face.
pub fn basic_measurement_matrix() -> StochasticMatrix8 {
    StochasticMatrix8(std::array::from_fn(|i| {
        std::array::from_fn(|j| if (i < 4) == (j < 4) { rat(1, 4) } else { Rational::zero() })
    }))
}

pub fn apply_matrix(m: &StochasticMatrix8, p: &ProbVec8) -> ProbVec8 {
    ProbVec8(std::array::from_fn(|i| inner(&m.0[i], p)))
}

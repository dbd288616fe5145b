//! The 24 rotational symmetries of the cube.
//!
//! Each element carries two representations side by side: its action on the
//! eight vertices and a signed 3×3 integer matrix acting on the vertex chart.
//! `compose(a, b)` always means "apply `b` first, then `a`".

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ontic::{Axis, Face, OnticState, StochasticMatrix8};
use crate::rational::{int, Rational};

/// Vertex cycles of the quarter turns about x, y and z.
pub const GENERATOR_CYCLES: [&str; 3] = ["(1562)(3487)", "(1584)(2673)", "(1234)(5678)"];

/// The antipodal vertex pairs, i.e. the four body diagonals.
pub const DIAGONALS: [(usize, usize); 4] = [(1, 7), (2, 8), (3, 5), (4, 6)];

/// A permutation of the eight vertices, stored as zero-based images.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm8([u8; 8]);

impl Perm8 {
    pub fn identity() -> Self {
        Perm8(std::array::from_fn(|i| i as u8))
    }

    pub fn from_images(images: [u8; 8]) -> Result<Self> {
        let mut seen = [false; 8];
        for &img in &images {
            if img >= 8 || seen[img as usize] {
                return Err(Error::InvalidRotation(format!("{images:?} is not a permutation")));
            }
            seen[img as usize] = true;
        }
        Ok(Perm8(images))
    }

    /// Parses one-based cycle notation such as `"(1562)(3487)"`; `"()"` is the identity.
    pub fn from_cycles(text: &str) -> Result<Self> {
        let bad = || Error::InvalidRotation(format!("malformed cycle notation {text:?}"));
        let mut images: [u8; 8] = std::array::from_fn(|i| i as u8);
        let mut touched = [false; 8];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = body.find(')').ok_or_else(bad)?;
            let cycle: Vec<usize> = body[..close]
                .chars()
                .filter(|c| !c.is_whitespace() && *c != ',')
                .map(|c| c.to_digit(10).map(|d| d as usize).filter(|d| (1..=8).contains(d)))
                .collect::<Option<_>>()
                .ok_or_else(bad)?;
            for (k, &v) in cycle.iter().enumerate() {
                if touched[v - 1] {
                    return Err(bad());
                }
                touched[v - 1] = true;
                images[v - 1] = (cycle[(k + 1) % cycle.len()] - 1) as u8;
            }
            rest = body[close + 1..].trim_start();
        }
        Ok(Perm8(images))
    }

    pub fn apply(&self, w: OnticState) -> OnticState {
        OnticState::from_slot(self.0[w.slot()] as usize)
    }

    pub fn images(&self) -> [u8; 8] {
        self.0
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &Perm8) -> Perm8 {
        Perm8(std::array::from_fn(|i| self.0[other.0[i] as usize]))
    }

    pub fn inverse(&self) -> Perm8 {
        let mut out = [0u8; 8];
        for (i, &img) in self.0.iter().enumerate() {
            out[img as usize] = i as u8;
        }
        Perm8(out)
    }

    /// Disjoint cycles of length ≥ 2, one-based, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = [false; 8];
        let mut out = Vec::new();
        for start in 0..8 {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start + 1];
            seen[start] = true;
            let mut cur = self.0[start] as usize;
            while cur != start {
                seen[cur] = true;
                cycle.push(cur + 1);
                cur = self.0[cur] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }
}

impl fmt::Display for Perm8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for v in c {
                write!(f, "{v}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// A 3×3 integer matrix; rows indexed by output axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedMatrix3(pub [[i8; 3]; 3]);

impl SignedMatrix3 {
    pub fn identity() -> Self {
        SignedMatrix3([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    pub fn mul(&self, other: &SignedMatrix3) -> SignedMatrix3 {
        SignedMatrix3(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..3).map(|k| self.0[i][k] * other.0[k][j]).sum())
        }))
    }

    pub fn transpose(&self) -> SignedMatrix3 {
        SignedMatrix3(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i])))
    }

    pub fn det(&self) -> i32 {
        let m = self.0.map(|r| r.map(i32::from));
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn trace(&self) -> i32 {
        (0..3).map(|i| i32::from(self.0[i][i])).sum()
    }

    /// Exactly one ±1 per row and column, zeros elsewhere.
    pub fn is_signed_permutation(&self) -> bool {
        let row_ok = self.0.iter().all(|r| r.iter().filter(|&&x| x != 0).count() == 1);
        let col_ok = (0..3).all(|j| self.0.iter().filter(|r| r[j] != 0).count() == 1);
        let entries_ok = self.0.iter().flatten().all(|&x| (-1..=1).contains(&x));
        row_ok && col_ok && entries_ok
    }

    pub fn apply(&self, v: [i8; 3]) -> [i8; 3] {
        std::array::from_fn(|i| (0..3).map(|k| self.0[i][k] * v[k]).sum())
    }

    pub fn apply_rational(&self, v: &[Rational; 3]) -> [Rational; 3] {
        std::array::from_fn(|i| {
            (0..3)
                .filter(|&k| self.0[i][k] != 0)
                .map(|k| int(i64::from(self.0[i][k])) * &v[k])
                .fold(Rational::zero(), |a, b| a + b)
        })
    }

    /// All 48 signed permutation matrices.
    pub fn all_signed_permutations() -> Vec<SignedMatrix3> {
        const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut out = Vec::with_capacity(48);
        for p in PERMS {
            for signs in 0..8u8 {
                let mut m = [[0i8; 3]; 3];
                for (i, &col) in p.iter().enumerate() {
                    m[i][col] = if signs >> i & 1 == 1 { -1 } else { 1 };
                }
                out.push(SignedMatrix3(m));
            }
        }
        out
    }
}

impl fmt::Display for SignedMatrix3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .0
            .iter()
            .map(|r| format!("[{},{},{}]", r[0], r[1], r[2]))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Geometric type of a cube rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RotationKind {
    Identity,
    /// ±90° about a face axis.
    FaceQuarter,
    /// 180° about a face axis.
    FaceHalf,
    /// ±120° about a body diagonal.
    Vertex,
    /// 180° about an axis through opposite edge midpoints.
    Edge,
}

impl RotationKind {
    pub fn describe(self) -> &'static str {
        match self {
            RotationKind::Identity => "identity",
            RotationKind::FaceQuarter => "face ±90",
            RotationKind::FaceHalf => "face 180",
            RotationKind::Vertex => "vertex ±120",
            RotationKind::Edge => "edge 180",
        }
    }
}

/// One cube rotation: vertex permutation plus its SO(3) matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rotation {
    perm: Perm8,
    matrix: SignedMatrix3,
}

impl Rotation {
    /// Checks that `matrix` is a proper signed permutation realizing `perm` on the chart.
    pub fn new(perm: Perm8, matrix: SignedMatrix3) -> Result<Self> {
        if !matrix.is_signed_permutation() || matrix.det() != 1 {
            return Err(Error::InvalidRotation(format!("{matrix} is not a proper rotation of the cube")));
        }
        let r = Rotation { perm, matrix };
        if !r.is_consistent() {
            return Err(Error::InvalidRotation(format!("{matrix} does not realize {perm}")));
        }
        Ok(r)
    }

    /// Skips every check. Only useful for fault injection.
    pub fn from_parts_unchecked(perm: Perm8, matrix: SignedMatrix3) -> Self {
        Rotation { perm, matrix }
    }

    /// Recovers the unique proper matrix realizing a vertex permutation.
    pub fn from_perm(perm: Perm8) -> Result<Self> {
        SignedMatrix3::all_signed_permutations()
            .into_iter()
            .filter(|m| m.det() == 1)
            .map(|m| Rotation { perm, matrix: m })
            .find(Rotation::is_consistent)
            .ok_or_else(|| Error::InvalidRotation(format!("{perm} is not a cube rotation")))
    }

    pub fn from_cycles(text: &str) -> Result<Self> {
        Self::from_perm(Perm8::from_cycles(text)?)
    }

    pub fn identity() -> Self {
        Rotation { perm: Perm8::identity(), matrix: SignedMatrix3::identity() }
    }

    /// Quarter turn `R_axis(+π/2)`.
    pub fn generator(axis: Axis) -> Self {
        Self::from_cycles(GENERATOR_CYCLES[axis.index()]).expect("generator cycles are cube rotations")
    }

    /// `generator(axis)` applied `quarter_turns` times (negative turns go the other way).
    pub fn quarter_turns(axis: Axis, quarter_turns: i32) -> Self {
        let g = Self::generator(axis);
        (0..quarter_turns.rem_euclid(4)).fold(Self::identity(), |acc, _| g.compose(&acc))
    }

    pub fn perm(&self) -> &Perm8 {
        &self.perm
    }

    pub fn matrix(&self) -> &SignedMatrix3 {
        &self.matrix
    }

    /// `matrix · vᵢ = v_{σ(i)}` for every vertex.
    pub fn is_consistent(&self) -> bool {
        OnticState::all().all(|w| self.matrix.apply(w.coords()) == self.perm.apply(w).coords())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Rotation) -> Rotation {
        Rotation { perm: self.perm.compose(&other.perm), matrix: self.matrix.mul(&other.matrix) }
    }

    pub fn inverse(&self) -> Rotation {
        Rotation { perm: self.perm.inverse(), matrix: self.matrix.transpose() }
    }

    pub fn is_identity(&self) -> bool {
        self.perm == Perm8::identity() && self.matrix == SignedMatrix3::identity()
    }

    pub fn order(&self) -> usize {
        let mut acc = *self;
        let mut n = 1;
        while !acc.is_identity() {
            acc = self.compose(&acc);
            n += 1;
            assert!(n <= 24, "rotation has no finite order");
        }
        n
    }

    pub fn apply(&self, w: OnticState) -> OnticState {
        self.perm.apply(w)
    }

    /// Image of a face under the matrix action.
    pub fn apply_face(&self, face: Face) -> Face {
        let n = self.matrix.apply(face.normal());
        let axis = n.iter().position(|&c| c != 0).expect("nonzero normal");
        Face::from_axis_sign(Axis::from_index(axis), n[axis])
    }

    /// Permutation matrix with `T_ij = δ_{i σ(j)}`.
    pub fn perm_matrix8(&self) -> StochasticMatrix8 {
        let rows = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                if self.perm.0[j] as usize == i {
                    int(1)
                } else {
                    Rational::zero()
                }
            })
        });
        StochasticMatrix8::new(rows).expect("permutation matrices are stochastic")
    }

    /// Induced permutation of the four body diagonals (indices into [`DIAGONALS`]).
    pub fn diagonal_action(&self) -> [u8; 4] {
        let diag_of = |v: usize| DIAGONALS.iter().position(|&(a, b)| a == v || b == v).unwrap();
        std::array::from_fn(|k| {
            let w = OnticState::new(DIAGONALS[k].0).unwrap();
            diag_of(self.perm.apply(w).index()) as u8
        })
    }

    /// Axial vector `(m₃₂−m₂₃, m₁₃−m₃₁, m₂₁−m₁₂)`, equal to `2 sin θ · n`.
    fn axial(&self) -> [i8; 3] {
        let m = &self.matrix.0;
        [m[2][1] - m[1][2], m[0][2] - m[2][0], m[1][0] - m[0][1]]
    }

    pub fn kind(&self) -> RotationKind {
        match self.matrix.trace() {
            3 => RotationKind::Identity,
            1 => RotationKind::FaceQuarter,
            0 => RotationKind::Vertex,
            _ => {
                let sym: [[i8; 3]; 3] = std::array::from_fn(|i| {
                    std::array::from_fn(|j| self.matrix.0[i][j] + i8::from(i == j))
                });
                let support = (0..3).filter(|&i| sym[i][i] != 0).count();
                if support == 1 {
                    RotationKind::FaceHalf
                } else {
                    RotationKind::Edge
                }
            }
        }
    }

    /// Stable label derived from axis and angle, e.g. `Rz+90`, `Ry180`, `V17-120`, `Exy+`.
    pub fn name(&self) -> String {
        match self.kind() {
            RotationKind::Identity => "id".to_string(),
            RotationKind::FaceQuarter => {
                let ax = self.axial();
                let i = ax.iter().position(|&c| c != 0).unwrap();
                format!("R{}{}90", Axis::from_index(i), if ax[i] > 0 { '+' } else { '-' })
            }
            RotationKind::FaceHalf => {
                let i = (0..3).find(|&i| self.matrix.0[i][i] == 1).unwrap();
                format!("R{}180", Axis::from_index(i))
            }
            RotationKind::Vertex => {
                let fixed = OnticState::all().find(|&w| self.perm.apply(w) == w).unwrap();
                let v = fixed.coords();
                let ax = self.axial();
                let dot: i32 = (0..3).map(|k| i32::from(ax[k]) * i32::from(v[k])).sum();
                format!(
                    "V{}{}{}120",
                    fixed.index(),
                    fixed.antipode().index(),
                    if dot > 0 { '+' } else { '-' }
                )
            }
            RotationKind::Edge => {
                let axes: Vec<usize> = (0..3).filter(|&i| self.matrix.0[i][i] != -1).collect();
                let (a, b) = (axes[0], axes[1]);
                format!(
                    "E{}{}{}",
                    Axis::from_index(a),
                    Axis::from_index(b),
                    if self.matrix.0[a][b] > 0 { '+' } else { '-' }
                )
            }
        }
    }
}

impl fmt::Display for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// A set of rotations that share the same kind under conjugation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub kind: RotationKind,
    pub members: Vec<usize>,
}

/// A finite group of cube rotations closed from a generator list.
///
/// Elements are keyed by vertex permutation; each element's matrix is the
/// product of generator matrices along the breadth-first spanning tree, so a
/// mismatched generator propagates into the matrices instead of being hidden.
#[derive(Debug, Clone)]
pub struct RotationGroup {
    generators: Vec<Rotation>,
    elements: Vec<Rotation>,
    index: HashMap<Perm8, usize>,
    /// `(parent, generator)` for every non-identity element.
    tree: Vec<Option<(usize, usize)>>,
    cayley: Vec<Vec<usize>>,
}

const MAX_GROUP_ORDER: usize = 48;

impl RotationGroup {
    /// Closure of the three quarter-turn generators.
    pub fn generate() -> Self {
        let gens = Axis::ALL.map(Rotation::generator);
        Self::from_generators(&gens).expect("quarter turns generate a finite group")
    }

    /// Shared instance of [`RotationGroup::generate`].
    pub fn canonical() -> &'static RotationGroup {
        static GROUP: OnceLock<RotationGroup> = OnceLock::new();
        GROUP.get_or_init(Self::generate)
    }

    pub fn from_generators(generators: &[Rotation]) -> Result<Self> {
        let mut elements = vec![Rotation::identity()];
        let mut index = HashMap::from([(Perm8::identity(), 0)]);
        let mut tree = vec![None];
        let mut queue = VecDeque::from([0usize]);
        while let Some(cur) = queue.pop_front() {
            for (k, g) in generators.iter().enumerate() {
                let next = g.compose(&elements[cur]);
                if index.contains_key(&next.perm) {
                    continue;
                }
                if elements.len() == MAX_GROUP_ORDER {
                    return Err(Error::InvalidRotation(format!(
                        "closure exceeds {MAX_GROUP_ORDER} elements"
                    )));
                }
                index.insert(next.perm, elements.len());
                tree.push(Some((cur, k)));
                queue.push_back(elements.len());
                elements.push(next);
            }
        }
        let cayley = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&a.perm.compose(&b.perm)]).collect())
            .collect();
        Ok(RotationGroup { generators: generators.to_vec(), elements, index, tree, cayley })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Rotation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Rotation {
        &self.elements[i]
    }

    pub fn generators(&self) -> &[Rotation] {
        &self.generators
    }

    pub fn index_of(&self, r: &Rotation) -> Option<usize> {
        self.index.get(&r.perm).copied()
    }

    /// Index of `elements[a] ∘ elements[b]`.
    pub fn product(&self, a: usize, b: usize) -> usize {
        self.cayley[a][b]
    }

    pub fn cayley_table(&self) -> &[Vec<usize>] {
        &self.cayley
    }

    pub fn inverse_index(&self, a: usize) -> usize {
        (0..self.len()).find(|&b| self.cayley[a][b] == 0).expect("group elements are invertible")
    }

    /// Generator indices along the spanning tree, in application order.
    pub fn word(&self, i: usize) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = i;
        while let Some((parent, g)) = self.tree[cur] {
            word.push(g);
            cur = parent;
        }
        word.reverse();
        word
    }

    pub fn spanning_parent(&self, i: usize) -> Option<(usize, usize)> {
        self.tree[i]
    }

    /// Classes sorted by rotation kind (identity, face 90, face 180, vertex, edge).
    pub fn conjugacy_classes(&self) -> Vec<ConjugacyClass> {
        let n = self.len();
        let mut assigned = vec![false; n];
        let mut classes = Vec::new();
        for a in 0..n {
            if assigned[a] {
                continue;
            }
            let mut members: Vec<usize> = (0..n)
                .map(|g| self.product(self.product(g, a), self.inverse_index(g)))
                .collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                assigned[m] = true;
            }
            classes.push(ConjugacyClass { kind: self.elements[a].kind(), members });
        }
        classes.sort_by_key(|c| (c.kind, c.members[0]));
        classes
    }
}

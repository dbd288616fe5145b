//! What an agent restricted to face measurements and cube rotations can know.
//!
//! Epistemic states are convex mixtures of the six face states. They are in
//! bijection with Bloch vectors of l1 norm at most one via
//! `pᵢ = (1 + vᵢ·r) / 8`.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ontic::{inner, Axis, Face, OnticState, ProbVec8, StochasticMatrix8};
use crate::rational::{int, l1_norm, rat, Rational};
use crate::rng::ShotStream;
use crate::rotation::Rotation;

pub type BlochVector = [Rational; 3];

/// One of the three face-pair tests, identified by its axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Measurement {
    pub axis: Axis,
}

impl Measurement {
    pub const ALL: [Measurement; 3] =
        [Measurement { axis: Axis::X }, Measurement { axis: Axis::Y }, Measurement { axis: Axis::Z }];

    pub fn new(axis: Axis) -> Self {
        Measurement { axis }
    }

    /// Outcome faces, positive side first.
    pub fn faces(self) -> [Face; 2] {
        [Face::from_axis_sign(self.axis, 1), Face::from_axis_sign(self.axis, -1)]
    }

    pub fn has_outcome(self, face: Face) -> bool {
        face.axis() == self.axis
    }

    fn check_outcome(self, face: Face) -> Result<()> {
        if self.has_outcome(face) {
            Ok(())
        } else {
            Err(Error::OutcomeNotOnAxis { outcome: face.to_string(), axis: self.axis.symbol() })
        }
    }
}

impl fmt::Display for Measurement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M{}", self.axis)
    }
}

/// The procedure `T∘M₁∘T⁻¹` as an ordered face pair: `first` is reported when
/// the inner `M₁` finds the system up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Procedure {
    pub first: Face,
    pub second: Face,
}

impl Procedure {
    pub fn measurement(self) -> Measurement {
        Measurement::new(self.first.axis())
    }
}

/// Probabilities of the two outcomes of one measurement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeDistribution {
    pub measurement: Measurement,
    pub probs: [(Face, Rational); 2],
}

impl OutcomeDistribution {
    pub fn get(&self, face: Face) -> Option<&Rational> {
        self.probs.iter().find(|(f, _)| *f == face).map(|(_, q)| q)
    }
}

pub fn face_state(face: Face) -> ProbVec8 {
    ProbVec8::new_unchecked(std::array::from_fn(|j| {
        if face.contains(OnticState::from_slot(j)) {
            rat(1, 4)
        } else {
            Rational::zero()
        }
    }))
}

/// `p → Tp` with `(Tp)_{σ(j)} = p_j`.
pub fn transform(t: &Rotation, p: &ProbVec8) -> ProbVec8 {
    let mut out: [Rational; 8] = std::array::from_fn(|_| Rational::zero());
    for w in OnticState::all() {
        out[t.apply(w).slot()] = p.get(w).clone();
    }
    ProbVec8::new_unchecked(out)
}

pub fn measurement_for(t: &Rotation) -> Procedure {
    Procedure { first: t.apply_face(Face::U), second: t.apply_face(Face::D) }
}

/// `P(ν) = 4 p_ν·p` for the two faces on the measured axis.
pub fn outcome_distribution(m: Measurement, p: &ProbVec8) -> OutcomeDistribution {
    let probs = m.faces().map(|f| (f, int(4) * inner(&face_state(f), p)));
    OutcomeDistribution { measurement: m, probs }
}

/// Ensemble state after measuring without reading the outcome.
pub fn measurement_channel(m: Measurement, p: &ProbVec8) -> ProbVec8 {
    let dist = outcome_distribution(m, p);
    let states = m.faces().map(face_state);
    ProbVec8::mixture(dist.probs.iter().map(|(_, q)| q).zip(states.iter()))
        .expect("outcome probabilities of a probability vector are convex")
}

/// Column-stochastic matrix of [`measurement_channel`].
pub fn channel_matrix(m: Measurement) -> StochasticMatrix8 {
    let rows = std::array::from_fn(|i| {
        let target = OnticState::from_slot(i);
        std::array::from_fn(|j| {
            let source = OnticState::from_slot(j);
            let same_face = m.faces().iter().any(|f| f.contains(source) && f.contains(target));
            if same_face {
                rat(1, 4)
            } else {
                Rational::zero()
            }
        })
    });
    StochasticMatrix8::new(rows).expect("block averaging is stochastic")
}

pub fn conditional_update(m: Measurement, outcome: Face) -> Result<ProbVec8> {
    m.check_outcome(outcome)?;
    Ok(face_state(outcome))
}

/// Each coordinate is the outcome-probability difference of the face pair on that axis.
pub fn bloch_of(p: &ProbVec8) -> BlochVector {
    let mut r = std::array::from_fn(|_| Rational::zero());
    for w in OnticState::all() {
        for (k, &c) in w.coords().iter().enumerate() {
            if c > 0 {
                r[k] += p.get(w);
            } else {
                r[k] -= p.get(w);
            }
        }
    }
    r
}

/// The unique epistemic state with Bloch vector `r`.
pub fn state_from_bloch(r: &BlochVector) -> Result<ProbVec8> {
    let norm = l1_norm(r);
    if norm > int(1) {
        return Err(Error::OutsideOctahedron(norm.to_string()));
    }
    Ok(ProbVec8::new_unchecked(std::array::from_fn(|j| {
        let v = OnticState::from_slot(j).coords();
        let dot: Rational = (0..3).map(|k| int(i64::from(v[k])) * &r[k]).sum();
        (int(1) + dot) / int(8)
    })))
}

/// Result of testing a vector against the epistemic state space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub bloch: BlochVector,
    /// One convex decomposition over face states in [`Face::ALL`] order, when a member.
    pub weights: Option<[Rational; 6]>,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        self.weights.is_some()
    }
}

/// Face weights reproducing `r`: signed parts on each axis, slack split over U and D.
pub fn decomposition_weights(r: &BlochVector) -> Option<[Rational; 6]> {
    let slack = int(1) - l1_norm(r);
    if slack.is_negative() {
        return None;
    }
    let half_slack = slack / int(2);
    Some(Face::ALL.map(|f| {
        let c = &r[f.axis().index()];
        let part = if (f.sign() > 0) == c.is_positive() { c.abs() } else { Rational::zero() };
        if f.axis() == Axis::Z {
            part + &half_slack
        } else {
            part
        }
    }))
}

pub fn membership(p: &ProbVec8) -> Membership {
    let bloch = bloch_of(p);
    let weights = match state_from_bloch(&bloch) {
        Ok(q) if &q == p => decomposition_weights(&bloch),
        _ => None,
    };
    Membership { bloch, weights }
}

/// A probability vector known to lie in the epistemic state space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EpistemicState(ProbVec8);

impl EpistemicState {
    pub fn new(p: ProbVec8) -> Result<Self> {
        if membership(&p).is_member() {
            Ok(EpistemicState(p))
        } else {
            Err(Error::NotEpistemic)
        }
    }

    pub fn from_bloch(r: &BlochVector) -> Result<Self> {
        state_from_bloch(r).map(EpistemicState)
    }

    pub fn face(face: Face) -> Self {
        EpistemicState(face_state(face))
    }

    pub fn probvec(&self) -> &ProbVec8 {
        &self.0
    }

    pub fn bloch(&self) -> BlochVector {
        bloch_of(&self.0)
    }

    pub fn into_probvec(self) -> ProbVec8 {
        self.0
    }
}

/// Single-system measurement: reports the face holding `w`, then leaves the
/// system on a uniformly random vertex of that face.
pub fn ontic_measure(m: Measurement, w: OnticState, rng: &mut ShotStream) -> (Face, OnticState) {
    let outcome = Face::from_axis_sign(m.axis, w.coords()[m.axis.index()]);
    let next = outcome.vertices()[rng.below(4) as usize];
    (outcome, next)
}

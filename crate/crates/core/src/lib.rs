//! Exact simulator of the quantum cube: an eight-state ontic system probed
//! only through face measurements and cube rotations, together with the
//! single-qubit stabilizer octahedron it is operationally equivalent to.
//!
//! * [`ontic`]: vertices, exact probability vectors, stochastic matrices.
//! * [`rotation`]: the 24-element rotation group and its two representations.
//! * [`epistemic`]: face states, measurements, channels, membership.
//! * [`qubit`]: Bloch octahedron, Born rule, Clifford unitaries.
//! * [`equivalence`]: exhaustive checks that both descriptions agree.
//! * [`circuit`]: the `.cq` language, exact evaluator and ontic sampler.

pub mod circuit;
pub mod epistemic;
pub mod equivalence;
pub mod error;
pub mod ontic;
pub mod qubit;
pub mod rational;
pub mod rng;
pub mod rotation;

pub use epistemic::{
    bloch_of, conditional_update, face_state, measurement_channel, measurement_for, membership,
    ontic_measure, outcome_distribution, state_from_bloch, transform, BlochVector, EpistemicState,
    Measurement, Procedure,
};
pub use error::{Error, Result};
pub use ontic::{apply_matrix, basic_measurement_matrix, extremal, inner, Axis, Face, OnticState, ProbVec8};
pub use qubit::{born, clifford_of, density_of, embed, projective_update, BlochState, PauliEigenstate};
pub use rational::Rational;
pub use rotation::{Rotation, RotationGroup};

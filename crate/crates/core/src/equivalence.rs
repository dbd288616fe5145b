//! Checks that the cube model and the stabilizer octahedron produce the same
//! statistics and transform the same way.
//!
//! Every exact comparison is rational equality. Failures are collected, not
//! raised, so a convention error shows up as a full pattern of mismatches.

use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::epistemic::{
    decomposition_weights, face_state, outcome_distribution, state_from_bloch, transform, BlochVector,
    Measurement,
};
use crate::error::{Error, Result};
use crate::ontic::{Face, ProbVec8};
use crate::qubit::{self, born, density_of, embed, CliffordRepresentation, PauliEigenstate, TOLERANCE};
use crate::rational::{int, l1_norm, rat, Rational};
use crate::rng::ShotStream;
use crate::rotation::{Rotation, RotationGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Face-rule probabilities against exact Born probabilities.
    Probability,
    /// Born probability against the trace formula on the density matrix.
    BornTrace,
    /// Permuted state against rotated Bloch vector.
    Covariance,
    /// Rotated density matrix against conjugation by the Clifford unitary.
    UnitaryCovariance,
    /// Two decompositions of one state against their Bloch vectors.
    WellDefinedness,
    /// Input was not an epistemic state.
    Precondition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub kind: CheckKind,
    pub inputs: String,
    pub lhs: String,
    pub rhs: String,
}

/// Tally of checks; merging is associative and keeps failure order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: usize,
    pub passes: usize,
    pub failures: Vec<Failure>,
}

impl Report {
    fn single(failures: Vec<Failure>) -> Self {
        let passes = usize::from(failures.is_empty());
        Report { checks: 1, passes, failures }
    }

    pub fn merge(mut self, other: Report) -> Report {
        self.checks += other.checks;
        self.passes += other.passes;
        self.failures.extend(other.failures);
        self
    }

    pub fn failed_checks(&self) -> usize {
        self.checks - self.passes
    }

    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_counterexample(&self) -> Option<&Failure> {
        self.failures.first()
    }

    pub fn count(&self, kind: CheckKind) -> usize {
        self.failures.iter().filter(|f| f.kind == kind).count()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} checks, {} failures", self.checks, self.failed_checks())
    }
}

fn show_vec(v: &BlochVector) -> String {
    format!("({}, {}, {})", v[0], v[1], v[2])
}

fn precondition(p: &ProbVec8) -> Report {
    Report::single(vec![Failure {
        kind: CheckKind::Precondition,
        inputs: format!("p={p}"),
        lhs: "not epistemic".into(),
        rhs: "epistemic".into(),
    }])
}

/// Runs checks against one rotation group and its Clifford unitaries.
pub struct Verifier<'g> {
    group: &'g RotationGroup,
    clifford: CliffordRepresentation,
}

impl<'g> Verifier<'g> {
    pub fn new(group: &'g RotationGroup) -> Self {
        Verifier { group, clifford: CliffordRepresentation::new(group) }
    }

    pub fn group(&self) -> &RotationGroup {
        self.group
    }

    pub fn check_probability_equivalence(&self, p: &ProbVec8, m: Measurement) -> Report {
        let Ok(b) = embed(p) else {
            return precondition(p);
        };
        let rho = density_of(&b);
        let dist = outcome_distribution(m, p);
        let mut failures = Vec::new();
        for (face, cube) in &dist.probs {
            let kappa = PauliEigenstate::from_face(*face);
            let quantum = born(kappa, &b);
            if *cube != quantum {
                failures.push(Failure {
                    kind: CheckKind::Probability,
                    inputs: format!("p={p} m={m} outcome={face}"),
                    lhs: cube.to_string(),
                    rhs: quantum.to_string(),
                });
            }
            let trace_form = rho.born(kappa);
            let exact = quantum.to_f64().unwrap_or(f64::NAN);
            if (trace_form - exact).abs().is_nan() || (trace_form - exact).abs() > TOLERANCE {
                failures.push(Failure {
                    kind: CheckKind::BornTrace,
                    inputs: format!("r={b} kappa={kappa}"),
                    lhs: format!("{exact:e}"),
                    rhs: format!("{trace_form:e}"),
                });
            }
        }
        Report::single(failures)
    }

    /// `t_index` indexes [`RotationGroup::elements`].
    pub fn check_transformation_covariance(&self, t_index: usize, p: &ProbVec8) -> Report {
        let t = self.group.element(t_index);
        let Ok(before) = embed(p) else {
            return precondition(p);
        };
        let moved = transform(t, p);
        let rotated = before.rotated(t);
        let inputs = format!("t={} p={p}", t.perm());
        let after = match embed(&moved) {
            Ok(after) => after,
            Err(_) => {
                return Report::single(vec![Failure {
                    kind: CheckKind::Covariance,
                    inputs,
                    lhs: format!("{moved} (not epistemic)"),
                    rhs: show_vec(rotated.vector()),
                }])
            }
        };
        let mut failures = Vec::new();
        if after != rotated {
            failures.push(Failure {
                kind: CheckKind::Covariance,
                inputs: inputs.clone(),
                lhs: show_vec(after.vector()),
                rhs: show_vec(rotated.vector()),
            });
        }
        let conjugated = density_of(&before).conjugated(&self.clifford.get(t_index).unitary);
        let direct = density_of(&after);
        let diff = qubit::max_abs_diff(conjugated.matrix(), direct.matrix());
        if diff.is_nan() || diff > TOLERANCE {
            failures.push(Failure {
                kind: CheckKind::UnitaryCovariance,
                inputs,
                lhs: format!("{:?}", direct.matrix()),
                rhs: format!("{:?}", conjugated.matrix()),
            });
        }
        Report::single(failures)
    }

    pub fn run(&self, config: &SuiteConfig) -> Report {
        let faces: Vec<ProbVec8> = Face::ALL.iter().map(|&f| face_state(f)).collect();
        let random: Vec<ProbVec8> = (0..config.random_states as u64)
            .map(|i| state_from_bloch(&random_octahedron_point(config.seed, i)).expect("sampled inside"))
            .collect();
        let states: Vec<&ProbVec8> = faces.iter().chain(random.iter()).collect();

        let probability = states
            .par_iter()
            .map(|p| {
                Measurement::ALL
                    .iter()
                    .map(|&m| self.check_probability_equivalence(p, m))
                    .fold(Report::default(), Report::merge)
            })
            .reduce(Report::default, Report::merge);
        let covariance = (0..self.group.len())
            .into_par_iter()
            .map(|t| {
                states
                    .iter()
                    .map(|p| self.check_transformation_covariance(t, p))
                    .fold(Report::default(), Report::merge)
            })
            .reduce(Report::default, Report::merge);
        let well_defined = (0..config.kernel_pairs as u64)
            .into_par_iter()
            .map(|i| {
                let (w, w2) = kernel_perturbed_pair(config.seed, i);
                check_well_definedness(&w, &w2).unwrap_or_else(|e| {
                    Report::single(vec![Failure {
                        kind: CheckKind::WellDefinedness,
                        inputs: format!("pair {i}"),
                        lhs: e.to_string(),
                        rhs: String::new(),
                    }])
                })
            })
            .reduce(Report::default, Report::merge);
        probability.merge(covariance).merge(well_defined)
    }
}

/// Exact Born/face-rule agreement for every outcome of `m` on `p`.
pub fn check_probability_equivalence(p: &ProbVec8, m: Measurement) -> Report {
    Verifier::new(RotationGroup::canonical()).check_probability_equivalence(p, m)
}

pub fn check_transformation_covariance(t: &Rotation, p: &ProbVec8) -> Report {
    let group = RotationGroup::canonical();
    let i = group.index_of(t).expect("rotation belongs to the cube group");
    Verifier::new(group).check_transformation_covariance(i, p)
}

fn validate_weights(w: &[Rational; 6]) -> Result<ProbVec8> {
    if w.iter().any(Signed::is_negative) {
        return Err(Error::InvalidWeights(format!("negative weight in {}", show_weights(w))));
    }
    let faces = Face::ALL.map(face_state);
    ProbVec8::mixture(w.iter().zip(faces.iter()))
        .map_err(|_| Error::InvalidWeights(format!("weights {} do not sum to 1", show_weights(w))))
}

fn show_weights(w: &[Rational; 6]) -> String {
    let parts: Vec<String> = w.iter().map(|q| q.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Bloch vector `Σ w_κ n_κ` of a face-weight tuple in [`Face::ALL`] order.
pub fn weights_to_bloch(w: &[Rational; 6]) -> BlochVector {
    let mut r: BlochVector = std::array::from_fn(|_| Rational::zero());
    for (face, weight) in Face::ALL.iter().zip(w) {
        r[face.axis().index()] += int(i64::from(face.sign())) * weight;
    }
    r
}

/// Two decompositions of the same state must give the same Bloch vector.
pub fn check_well_definedness(w: &[Rational; 6], w2: &[Rational; 6]) -> Result<Report> {
    let p = validate_weights(w)?;
    let p2 = validate_weights(w2)?;
    if p != p2 {
        return Err(Error::InvalidWeights(format!(
            "{} and {} mix to different states",
            show_weights(w),
            show_weights(w2)
        )));
    }
    let (b, b2) = (weights_to_bloch(w), weights_to_bloch(w2));
    let failures = if b == b2 {
        Vec::new()
    } else {
        vec![Failure {
            kind: CheckKind::WellDefinedness,
            inputs: format!("w={} w'={}", show_weights(w), show_weights(w2)),
            lhs: show_vec(&b),
            rhs: show_vec(&b2),
        }]
    };
    Ok(Report::single(failures))
}

/// Kernel directions of the weight-to-state map, in [`Face::ALL`] order.
pub fn weight_kernel() -> [[i64; 6]; 2] {
    [[1, 1, -1, -1, 0, 0], [1, 1, 0, 0, -1, -1]]
}

const MAX_DENOMINATOR: u64 = 16;

/// Uniform numerator in `-d..=d` over a uniform denominator `d`.
fn small_rational(rng: &mut ShotStream) -> Rational {
    let den = rng.below(MAX_DENOMINATOR) as i64 + 1;
    let num = rng.below((2 * den + 1) as u64) as i64 - den;
    rat(num, den)
}

/// Seeded point with `‖r‖₁ ≤ 1`, coordinates with denominators up to 16.
pub fn random_octahedron_point(seed: u64, index: u64) -> BlochVector {
    let mut rng = ShotStream::new(seed ^ 0x6F63_7461_6865_6472, index);
    loop {
        let r: BlochVector = std::array::from_fn(|_| small_rational(&mut rng));
        if l1_norm(&r) <= int(1) {
            return r;
        }
    }
}

/// Moves `w` by a random fraction of the largest nonnegative step along a
/// random feasible kernel direction. Unchanged only when no direction has
/// room, i.e. the decomposition is unique.
fn kernel_step(w: &[Rational; 6], rng: &mut ShotStream) -> [Rational; 6] {
    let kernel = weight_kernel();
    let moves: Vec<([i64; 6], Rational)> = (-3..=3i64)
        .flat_map(|s| (-3..=3i64).map(move |t| (s, t)))
        .filter(|&st| st != (0, 0))
        .filter_map(|(s, t)| {
            let d: [i64; 6] = std::array::from_fn(|k| s * kernel[0][k] + t * kernel[1][k]);
            // kernel vectors sum to zero, so some coordinate decreases
            let room = (0..6).filter(|&k| d[k] < 0).map(|k| &w[k] / int(-d[k])).min()?;
            (!room.is_zero()).then_some((d, room))
        })
        .collect();
    if moves.is_empty() {
        return w.clone();
    }
    let (d, room) = &moves[rng.below(moves.len() as u64) as usize];
    let lambda = room * rat(rng.below(MAX_DENOMINATOR) as i64 + 1, MAX_DENOMINATOR as i64);
    std::array::from_fn(|k| &w[k] + &lambda * int(d[k]))
}

/// Two decompositions of one random state, related by kernel moves.
pub fn kernel_perturbed_pair(seed: u64, index: u64) -> ([Rational; 6], [Rational; 6]) {
    let r = random_octahedron_point(seed ^ 0x6B65_726E_656C, index);
    let base = decomposition_weights(&r).expect("inside octahedron");
    let mut rng = ShotStream::new(seed ^ 0x7061_6972, index);
    // shift the first one too, so pairs are not anchored at the canonical weights
    let first = kernel_step(&base, &mut rng);
    let second = kernel_step(&first, &mut rng);
    (first, second)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub random_states: usize,
    pub kernel_pairs: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { random_states: 200, kernel_pairs: 200, seed: 0 }
    }
}

/// Exhaustive plus seeded-random run against the canonical group.
pub fn run_full_suite() -> Report {
    run_suite(&SuiteConfig::default())
}

pub fn run_suite(config: &SuiteConfig) -> Report {
    Verifier::new(RotationGroup::canonical()).run(config)
}

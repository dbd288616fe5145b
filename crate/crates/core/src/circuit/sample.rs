use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::eval::{sequence_key, RecordedOutcome};
use super::{Circuit, Stmt};
use crate::epistemic::{ontic_measure, Measurement};
use crate::ontic::{OnticState, ProbVec8};
use crate::rng::ShotStream;
use crate::rotation::Perm8;

const CHUNK: u64 = 4096;

/// Outcome-sequence frequencies from ontic-level simulation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleReport {
    pub shots: u64,
    pub seed: u64,
    pub counts: BTreeMap<String, u64>,
}

/// Exact inverse-CDF draw from a rational distribution over vertices.
struct VertexSampler {
    denominator: BigUint,
    cumulative: Vec<BigUint>,
}

impl VertexSampler {
    fn new(p: &ProbVec8) -> Self {
        let denominator = p
            .entries()
            .iter()
            .fold(BigUint::one(), |acc, q| acc.lcm(q.denom().magnitude()));
        let mut running = BigUint::zero();
        let cumulative = p
            .entries()
            .iter()
            .map(|q| {
                running += q.numer().magnitude() * (&denominator / q.denom().magnitude());
                running.clone()
            })
            .collect();
        VertexSampler { denominator, cumulative }
    }

    fn draw(&self, rng: &mut ShotStream) -> OnticState {
        let u = rng.below_big(&self.denominator);
        let slot = self.cumulative.iter().position(|c| &u < c).expect("cumulative mass reaches 1");
        OnticState::new(slot + 1).expect("slot in range")
    }
}

enum Step {
    Rotate(Perm8),
    Measure(Measurement, Option<String>),
}

struct Program {
    start: VertexSampler,
    steps: Vec<Step>,
}

impl Program {
    fn new(c: &Circuit) -> Self {
        let steps = c
            .body()
            .iter()
            .map(|s| match s {
                Stmt::Rot { .. } => Step::Rotate(*s.rotation().expect("rot").perm()),
                Stmt::Measure { axis, tag } => Step::Measure(Measurement::new(*axis), tag.clone()),
                Stmt::Prepare(_) | Stmt::Mix(_) => unreachable!("parser keeps preparations first"),
            })
            .collect();
        Program { start: VertexSampler::new(&c.initial_state()), steps }
    }

    fn shot(&self, seed: u64, shot: u64) -> String {
        let mut rng = ShotStream::new(seed, shot);
        let mut w = self.start.draw(&mut rng);
        let mut outcomes = Vec::new();
        for step in &self.steps {
            match step {
                Step::Rotate(perm) => w = perm.apply(w),
                Step::Measure(m, tag) => {
                    let (face, next) = ontic_measure(*m, w, &mut rng);
                    outcomes.push(RecordedOutcome { axis: m.axis, tag: tag.clone(), face });
                    w = next;
                }
            }
        }
        sequence_key(&outcomes)
    }

    fn chunk(&self, seed: u64, range: std::ops::Range<u64>) -> BTreeMap<String, u64> {
        let mut counts = BTreeMap::new();
        for shot in range {
            *counts.entry(self.shot(seed, shot)).or_insert(0) += 1;
        }
        counts
    }
}

fn merge(mut a: BTreeMap<String, u64>, b: BTreeMap<String, u64>) -> BTreeMap<String, u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

fn run(c: &Circuit, shots: u64, seed: u64) -> SampleReport {
    let program = Program::new(c);
    let counts = (0..shots.div_ceil(CHUNK))
        .into_par_iter()
        .map(|k| program.chunk(seed, k * CHUNK..((k + 1) * CHUNK).min(shots)))
        .reduce(BTreeMap::new, merge);
    SampleReport { shots, seed, counts }
}

/// Simulates `shots` single systems; each shot draws from its own `(seed, shot)` stream.
pub fn sample(c: &Circuit, shots: u64, seed: u64) -> SampleReport {
    run(c, shots, seed)
}

/// [`sample`] on a dedicated pool of `workers` threads.
pub fn sample_with_workers(c: &Circuit, shots: u64, seed: u64, workers: usize) -> SampleReport {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| run(c, shots, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse;

    #[test]
    fn deterministic_circuit() {
        let c = parse("prepare U; measure z").unwrap();
        let r = sample(&c, 1000, 42);
        assert_eq!(r.counts, BTreeMap::from([("U".to_string(), 1000)]));
    }

    #[test]
    fn fair_coin_within_four_sigma() {
        let c = parse("prepare U; measure x").unwrap();
        let shots = 100_000;
        let f = sample(&c, shots, 1).counts["F"] as f64 / shots as f64;
        let sigma = (0.25 / shots as f64).sqrt();
        assert!((f - 0.5).abs() <= 4.0 * sigma, "freq(F) = {f}");
    }

    #[test]
    fn same_seed_same_table() {
        let c = parse("prepare U; measure x; measure z").unwrap();
        assert_eq!(sample(&c, 5000, 9), sample(&c, 5000, 9));
        assert_ne!(sample(&c, 5000, 9).counts, sample(&c, 5000, 10).counts);
    }

    #[test]
    fn worker_count_does_not_matter() {
        let c = parse("mix U:1/3, R:2/3\nmeasure y\nrot x 90\nmeasure z").unwrap();
        let one = sample_with_workers(&c, 10_000, 5, 1);
        assert_eq!(one, sample_with_workers(&c, 10_000, 5, 3));
        assert_eq!(one, sample_with_workers(&c, 10_000, 5, 8));
    }

    #[test]
    fn vertex_sampler_respects_support() {
        let c = parse("mix U:1/3, F:2/3").unwrap();
        let sampler = VertexSampler::new(&c.initial_state());
        for shot in 0..500 {
            let w = sampler.draw(&mut ShotStream::new(1, shot));
            assert!(![7, 8].contains(&w.index()), "{w} has zero mass");
        }
    }
}

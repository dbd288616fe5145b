use num_traits::Zero;
use serde::Serialize;

use super::{Circuit, Stmt};
use crate::epistemic::{face_state, outcome_distribution, transform, EpistemicState, Measurement};
use crate::ontic::{Axis, Face, ProbVec8};
use crate::rational::{self, one, Rational};

/// One measurement result along a branch.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RecordedOutcome {
    pub axis: Axis,
    pub tag: Option<String>,
    pub face: Face,
}

impl RecordedOutcome {
    /// `F` or `tag=F`.
    pub fn key(&self) -> String {
        match &self.tag {
            Some(tag) => format!("{tag}={}", self.face),
            None => self.face.to_string(),
        }
    }
}

/// Key of an outcome sequence, shared by the exact evaluator and the sampler.
pub fn sequence_key(outcomes: &[RecordedOutcome]) -> String {
    outcomes.iter().map(RecordedOutcome::key).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchOutcome {
    pub outcomes: Vec<RecordedOutcome>,
    pub probability: Rational,
    pub final_state: EpistemicState,
}

impl BranchOutcome {
    pub fn key(&self) -> String {
        sequence_key(&self.outcomes)
    }
}

fn expand(
    body: &[Stmt],
    state: ProbVec8,
    probability: Rational,
    outcomes: &mut Vec<RecordedOutcome>,
    out: &mut Vec<BranchOutcome>,
) {
    let Some((stmt, rest)) = body.split_first() else {
        let final_state = EpistemicState::new(state).expect("allowed operations stay epistemic");
        out.push(BranchOutcome { outcomes: outcomes.clone(), probability, final_state });
        return;
    };
    match stmt {
        Stmt::Rot { .. } => {
            let t = stmt.rotation().expect("rot statement");
            expand(rest, transform(&t, &state), probability, outcomes, out);
        }
        Stmt::Measure { axis, tag } => {
            let dist = outcome_distribution(Measurement::new(*axis), &state);
            for (face, q) in dist.probs {
                if q.is_zero() {
                    continue;
                }
                outcomes.push(RecordedOutcome { axis: *axis, tag: tag.clone(), face });
                expand(rest, face_state(face), &probability * q, outcomes, out);
                outcomes.pop();
            }
        }
        Stmt::Prepare(_) | Stmt::Mix(_) => unreachable!("parser keeps preparations first"),
    }
}

/// Depth-first branch tree with exact probabilities; zero-probability branches are pruned.
pub fn eval_exact(c: &Circuit) -> Vec<BranchOutcome> {
    let mut out = Vec::new();
    expand(c.body(), c.initial_state(), one(), &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, Serialize)]
struct BranchJson {
    outcomes: Vec<RecordedOutcome>,
    #[serde(serialize_with = "rational::serialize_str")]
    probability: Rational,
    #[serde(serialize_with = "rational::serialize_vec3")]
    final_bloch: [Rational; 3],
}

/// JSON shape of an exact evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct ExactReport {
    mode: &'static str,
    branches: Vec<BranchJson>,
}

impl ExactReport {
    pub fn new(c: &Circuit, branches: &[BranchOutcome]) -> Self {
        ExactReport {
            mode: c.mode.name(),
            branches: branches
                .iter()
                .map(|b| BranchJson {
                    outcomes: b.outcomes.clone(),
                    probability: b.probability.clone(),
                    final_bloch: b.final_state.bloch(),
                })
                .collect(),
        }
    }
}

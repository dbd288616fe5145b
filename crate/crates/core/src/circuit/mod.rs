//! The `.cq` circuit language.
//!
//! ```text
//! circuit := header? prep stmt*
//! header  := "mode" ("full" | "classical")
//! prep    := "prepare" FACE | "mix" FACE ":" RAT ("," FACE ":" RAT)*
//! stmt    := "rot" AXIS ANGLE | "measure" AXIS ("as" IDENT)?
//! ```
//!
//! Statements end at a newline or `;`, and `#` comments run to end of line.
//! Angles are degrees restricted to ±90, ±180 and ±270.

mod eval;
mod lexer;
mod parser;
mod sample;

use std::fmt;

pub use eval::{eval_exact, BranchOutcome, ExactReport, RecordedOutcome};
pub use lexer::{tokenize, Keyword, Token, TokenKind};
pub use parser::{parse, parse_tokens};
pub use sample::{sample, sample_with_workers, SampleReport};

use crate::epistemic::face_state;
use crate::ontic::{Axis, Face, ProbVec8};
use crate::rational::Rational;
use crate::rotation::Rotation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Full,
    /// No rotations and only z measurements: a classical bit.
    Classical,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::Classical => "classical",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Stmt {
    Prepare(Face),
    Mix(Vec<(Face, Rational)>),
    /// Quarter turns in `±1..=±3`.
    Rot { axis: Axis, quarter_turns: i8 },
    Measure { axis: Axis, tag: Option<String> },
}

impl Stmt {
    pub fn is_preparation(&self) -> bool {
        matches!(self, Stmt::Prepare(_) | Stmt::Mix(_))
    }

    /// The rotation a `rot` statement applies.
    pub fn rotation(&self) -> Option<Rotation> {
        match self {
            Stmt::Rot { axis, quarter_turns } => Some(Rotation::quarter_turns(*axis, i32::from(*quarter_turns))),
            _ => None,
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Prepare(face) => write!(f, "prepare {face}"),
            Stmt::Mix(terms) => {
                write!(f, "mix ")?;
                for (i, (face, w)) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{face}:{w}")?;
                }
                Ok(())
            }
            Stmt::Rot { axis, quarter_turns } => write!(f, "rot {axis} {}", i32::from(*quarter_turns) * 90),
            Stmt::Measure { axis, tag: None } => write!(f, "measure {axis}"),
            Stmt::Measure { axis, tag: Some(tag) } => write!(f, "measure {axis} as {tag}"),
        }
    }
}

/// A parsed circuit. The first statement is its only preparation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    pub mode: Mode,
    pub statements: Vec<Stmt>,
}

impl Circuit {
    /// Probability vector produced by the preparation statement.
    pub fn initial_state(&self) -> ProbVec8 {
        match self.statements.first() {
            Some(Stmt::Prepare(face)) => face_state(*face),
            Some(Stmt::Mix(terms)) => {
                let states: Vec<ProbVec8> = terms.iter().map(|(f, _)| face_state(*f)).collect();
                ProbVec8::mixture(terms.iter().map(|(_, w)| w).zip(states.iter()))
                    .expect("parser checks mix weights")
            }
            _ => unreachable!("parser guarantees a leading preparation"),
        }
    }

    pub fn body(&self) -> &[Stmt] {
        &self.statements[1..]
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mode {}", self.mode.name())?;
        for stmt in &self.statements {
            writeln!(f, "{stmt}")?;
        }
        Ok(())
    }
}

use num_traits::{Signed, ToPrimitive};

use super::lexer::{tokenize, Keyword, Token, TokenKind};
use super::{Circuit, Mode, Stmt};
use crate::error::{Error, Position, Result};
use crate::ontic::{Axis, Face};
use crate::rational::{int, Rational};

/// Tokenizes and parses `.cq` source text.
pub fn parse(text: &str) -> Result<Circuit> {
    parse_tokens(&tokenize(text)?)
}

struct Line<'a> {
    tokens: &'a [Token],
    next: usize,
}

impl<'a> Line<'a> {
    fn pos(&self) -> Position {
        self.tokens
            .get(self.next)
            .or(self.tokens.last())
            .map(|t| t.pos)
            .unwrap_or(Position { line: 1, col: 1 })
    }

    fn peek(&self) -> Option<&'a TokenKind> {
        self.tokens.get(self.next).map(|t| &t.kind)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.next)?;
        self.next += 1;
        Some(t)
    }

    fn error(&self, expected: &str) -> Error {
        let found = match self.peek() {
            Some(kind) => kind.to_string(),
            None => "end of statement".to_string(),
        };
        Error::Parse { pos: self.pos(), msg: format!("expected {expected}, found {found}") }
    }

    fn face(&mut self) -> Result<Face> {
        match self.peek() {
            Some(TokenKind::Face(f)) => {
                self.next += 1;
                Ok(*f)
            }
            _ => Err(self.error("a face (U, D, L, R, F or B)")),
        }
    }

    fn axis(&mut self) -> Result<Axis> {
        match self.peek() {
            Some(TokenKind::Axis(a)) => {
                self.next += 1;
                Ok(*a)
            }
            _ => Err(self.error("an axis (x, y or z)")),
        }
    }

    fn number(&mut self) -> Result<&'a Rational> {
        match self.peek() {
            Some(TokenKind::Number(q)) => {
                self.next += 1;
                Ok(q)
            }
            _ => Err(self.error("a number")),
        }
    }

    fn expect(&mut self, kind: &TokenKind, what: &str) -> Result<()> {
        if self.peek() == Some(kind) {
            self.next += 1;
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("end of statement")),
        }
    }
}

fn quarter_turns(angle: &Rational, pos: Position) -> Result<i8> {
    let bad = || Error::AngleNotQuarterTurn { pos, angle: angle.to_string() };
    if !angle.is_integer() {
        return Err(bad());
    }
    match angle.to_integer().to_i64() {
        Some(deg @ (-270 | -180 | -90 | 90 | 180 | 270)) => Ok((deg / 90) as i8),
        _ => Err(bad()),
    }
}

fn statement(line: &mut Line<'_>) -> Result<(Stmt, Position)> {
    let start = line.pos();
    let stmt = match line.bump().map(|t| &t.kind) {
        Some(TokenKind::Keyword(Keyword::Prepare)) => Stmt::Prepare(line.face()?),
        Some(TokenKind::Keyword(Keyword::Mix)) => {
            let mut terms = Vec::new();
            loop {
                let face = line.face()?;
                line.expect(&TokenKind::Colon, "':'")?;
                terms.push((face, line.number()?.clone()));
                if line.peek() == Some(&TokenKind::Comma) {
                    line.next += 1;
                } else {
                    break;
                }
            }
            let total: Rational = terms.iter().map(|(_, w)| w).sum();
            if terms.iter().any(|(_, w)| w.is_negative()) || total != int(1) {
                return Err(Error::WeightsNotNormalized { pos: start, total: total.to_string() });
            }
            Stmt::Mix(terms)
        }
        Some(TokenKind::Keyword(Keyword::Rot)) => {
            let axis = line.axis()?;
            let angle_pos = line.pos();
            let angle = line.number()?;
            Stmt::Rot { axis, quarter_turns: quarter_turns(angle, angle_pos)? }
        }
        Some(TokenKind::Keyword(Keyword::Measure)) => {
            let axis = line.axis()?;
            let tag = if line.peek() == Some(&TokenKind::Keyword(Keyword::As)) {
                line.next += 1;
                let tag = match line.peek() {
                    Some(TokenKind::Ident(s)) => s.clone(),
                    Some(TokenKind::Face(f)) => f.to_string(),
                    Some(TokenKind::Axis(a)) => a.to_string(),
                    _ => return Err(line.error("a tag name")),
                };
                line.next += 1;
                Some(tag)
            } else {
                None
            };
            Stmt::Measure { axis, tag }
        }
        Some(TokenKind::Keyword(Keyword::Mode)) => {
            return Err(Error::Parse { pos: start, msg: "mode header must be the first line".into() })
        }
        _ => {
            line.next = line.next.saturating_sub(1);
            return Err(line.error("a statement (prepare, mix, rot or measure)"));
        }
    };
    line.finish()?;
    Ok((stmt, start))
}

fn check_classical(stmt: &Stmt, pos: Position) -> Result<()> {
    let violation = |msg: String| Err(Error::ClassicalModeViolation { pos, msg });
    match stmt {
        Stmt::Prepare(face) if face.axis() != Axis::Z => violation(format!("preparation of {face}")),
        Stmt::Mix(terms) => match terms.iter().find(|(f, _)| f.axis() != Axis::Z) {
            Some((face, _)) => violation(format!("mixture containing {face}")),
            None => Ok(()),
        },
        Stmt::Rot { .. } => violation("rotations are unavailable".into()),
        Stmt::Measure { axis, .. } if *axis != Axis::Z => violation(format!("measurement along {axis}")),
        _ => Ok(()),
    }
}

/// Builds a [`Circuit`] from tokens, enforcing every language rule.
pub fn parse_tokens(tokens: &[Token]) -> Result<Circuit> {
    let mut lines: Vec<Line<'_>> = tokens
        .split(|t| t.kind == TokenKind::Newline)
        .filter(|l| !l.is_empty())
        .map(|tokens| Line { tokens, next: 0 })
        .collect();

    let mut mode = Mode::Full;
    let mut rest = &mut lines[..];
    if let Some(first) = rest.first_mut() {
        if first.peek() == Some(&TokenKind::Keyword(Keyword::Mode)) {
            first.next += 1;
            mode = match first.peek() {
                Some(TokenKind::Keyword(Keyword::Full)) => Mode::Full,
                Some(TokenKind::Keyword(Keyword::Classical)) => Mode::Classical,
                _ => return Err(first.error("'full' or 'classical'")),
            };
            first.next += 1;
            first.finish()?;
            rest = &mut rest[1..];
        }
    }

    let end = tokens.last().map(|t| t.pos).unwrap_or(Position { line: 1, col: 1 });
    let mut statements = Vec::with_capacity(rest.len());
    for (i, line) in rest.iter_mut().enumerate() {
        let (stmt, pos) = statement(line)?;
        match (i, stmt.is_preparation()) {
            (0, false) => return Err(Error::MissingPreparation { pos }),
            (0, true) | (_, false) => {}
            (_, true) => {
                return Err(Error::Parse { pos, msg: "only one preparation is allowed, and it must come first".into() })
            }
        }
        if mode == Mode::Classical {
            check_classical(&stmt, pos)?;
        }
        statements.push(stmt);
    }
    if statements.is_empty() {
        return Err(Error::MissingPreparation { pos: end });
    }
    Ok(Circuit { mode, statements })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn three_statement_circuit() {
        let c = parse("prepare U\nrot y 90\nmeasure z").unwrap();
        assert_eq!(c.mode, Mode::Full);
        assert_eq!(
            c.statements,
            [
                Stmt::Prepare(Face::U),
                Stmt::Rot { axis: Axis::Y, quarter_turns: 1 },
                Stmt::Measure { axis: Axis::Z, tag: None },
            ]
        );
    }

    #[test]
    fn semicolons_separate_statements() {
        assert_eq!(parse("prepare U; measure x; measure z").unwrap().statements.len(), 3);
    }

    #[test]
    fn classical_rejects_rotation() {
        let err = parse("mode classical\nprepare U\nrot x 90").unwrap_err();
        assert!(matches!(err, Error::ClassicalModeViolation { pos: Position { line: 3, col: 1 }, .. }));
        assert!(matches!(parse("mode classical\nprepare U\nmeasure x"), Err(Error::ClassicalModeViolation { .. })));
        assert!(matches!(parse("mode classical\nprepare F"), Err(Error::ClassicalModeViolation { .. })));
        assert!(matches!(parse("mode classical\nmix U:1/2, R:1/2"), Err(Error::ClassicalModeViolation { .. })));
        assert!(parse("mode classical\nmix U:1/3, D:2/3\nmeasure z\nmeasure z").is_ok());
    }

    #[test]
    fn angle_must_be_quarter_turn() {
        assert!(matches!(parse("prepare U\nrot x 45"), Err(Error::AngleNotQuarterTurn { .. })));
        assert!(matches!(parse("prepare U\nrot x 360"), Err(Error::AngleNotQuarterTurn { .. })));
        assert!(matches!(parse("prepare U\nrot x 0"), Err(Error::AngleNotQuarterTurn { .. })));
        assert!(matches!(parse("prepare U\nrot x 1/2"), Err(Error::AngleNotQuarterTurn { .. })));
        let c = parse("prepare U\nrot x -270\nrot z 180").unwrap();
        assert_eq!(c.statements[1], Stmt::Rot { axis: Axis::X, quarter_turns: -3 });
        assert_eq!(c.statements[2], Stmt::Rot { axis: Axis::Z, quarter_turns: 2 });
    }

    #[test]
    fn unknown_axis_fails_in_parser() {
        let err = parse("prepare U\nrot w 90").unwrap_err();
        assert!(matches!(err, Error::Parse { pos: Position { line: 2, col: 5 }, .. }), "{err}");
    }

    #[test]
    fn weights_must_normalize() {
        assert!(matches!(parse("mix U:1/2, D:1/3"), Err(Error::WeightsNotNormalized { .. })));
        assert!(matches!(parse("mix U:3/2, D:-1/2"), Err(Error::WeightsNotNormalized { .. })));
        let c = parse("mix U:1/2, F:1/4, R:1/4").unwrap();
        assert_eq!(
            c.statements[0],
            Stmt::Mix(vec![(Face::U, rat(1, 2)), (Face::F, rat(1, 4)), (Face::R, rat(1, 4))])
        );
    }

    #[test]
    fn preparation_rules() {
        assert!(matches!(parse(""), Err(Error::MissingPreparation { .. })));
        assert!(matches!(parse("# nothing\n\n"), Err(Error::MissingPreparation { .. })));
        assert!(matches!(parse("mode full"), Err(Error::MissingPreparation { .. })));
        assert!(matches!(parse("measure z\nprepare U"), Err(Error::MissingPreparation { .. })));
        assert!(matches!(parse("prepare U\nprepare D"), Err(Error::Parse { .. })));
    }

    #[test]
    fn tags_and_trailing_tokens() {
        let c = parse("prepare U\nmeasure x as first").unwrap();
        assert_eq!(c.statements[1], Stmt::Measure { axis: Axis::X, tag: Some("first".into()) });
        assert!(matches!(parse("prepare U extra"), Err(Error::Parse { .. })));
        assert!(matches!(parse("prepare U\nmeasure z as"), Err(Error::Parse { .. })));
        assert!(matches!(parse("prepare U\nmode full"), Err(Error::Parse { .. })));
    }

    #[test]
    fn pretty_print_reparses() {
        let src = "mode full\nmix U:1/2, F:1/2 # comment\nrot y -90\nmeasure x as a\nrot z 180\nmeasure z";
        let c = parse(src).unwrap();
        assert_eq!(parse(&c.to_string()).unwrap(), c);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn stmt() -> impl Strategy<Value = Stmt> {
            prop_oneof![
                (0usize..3, prop::sample::select(vec![-3i8, -2, -1, 1, 2, 3]))
                    .prop_map(|(a, q)| Stmt::Rot { axis: Axis::from_index(a), quarter_turns: q }),
                (0usize..3, prop::option::of("[a-z_][a-z0-9_]{1,6}"))
                    .prop_filter("tag is not a keyword", |(_, t)| {
                        t.as_deref().is_none_or(|t| !["mode", "full", "classical", "prepare", "mix", "rot", "measure", "as"].contains(&t))
                    })
                    .prop_map(|(a, tag)| Stmt::Measure { axis: Axis::from_index(a), tag }),
            ]
        }

        fn prep() -> impl Strategy<Value = Stmt> {
            prop_oneof![
                (0usize..6).prop_map(|f| Stmt::Prepare(Face::ALL[f])),
                proptest::collection::vec((0usize..6, 1i64..5), 1..4).prop_map(|terms| {
                    let total: i64 = terms.iter().map(|(_, w)| w).sum();
                    Stmt::Mix(terms.into_iter().map(|(f, w)| (Face::ALL[f], rat(w, total))).collect())
                }),
            ]
        }

        proptest! {
            #[test]
            fn roundtrip(p in prep(), body in proptest::collection::vec(stmt(), 0..8)) {
                let mut statements = vec![p];
                statements.extend(body);
                let c = Circuit { mode: Mode::Full, statements };
                prop_assert_eq!(parse(&c.to_string()).unwrap(), c);
            }
        }
    }
}

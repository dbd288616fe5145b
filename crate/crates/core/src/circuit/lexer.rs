use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Position, Result};
use crate::ontic::{Axis, Face};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keyword {
    Mode,
    Full,
    Classical,
    Prepare,
    Mix,
    Rot,
    Measure,
    As,
}

impl Keyword {
    fn from_word(word: &str) -> Option<Keyword> {
        Some(match word {
            "mode" => Keyword::Mode,
            "full" => Keyword::Full,
            "classical" => Keyword::Classical,
            "prepare" => Keyword::Prepare,
            "mix" => Keyword::Mix,
            "rot" => Keyword::Rot,
            "measure" => Keyword::Measure,
            "as" => Keyword::As,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Mode => "mode",
            Keyword::Full => "full",
            Keyword::Classical => "classical",
            Keyword::Prepare => "prepare",
            Keyword::Mix => "mix",
            Keyword::Rot => "rot",
            Keyword::Measure => "measure",
            Keyword::As => "as",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Keyword(Keyword),
    Face(Face),
    Axis(Axis),
    Ident(String),
    /// Signed integer or fraction, e.g. `90`, `-270`, `1/3`.
    Number(Rational),
    Colon,
    Comma,
    /// Statement terminator: a newline or `;`.
    Newline,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Keyword(k) => write!(f, "keyword '{}'", k.as_str()),
            TokenKind::Face(face) => write!(f, "face '{face}'"),
            TokenKind::Axis(axis) => write!(f, "axis '{axis}'"),
            TokenKind::Ident(s) => write!(f, "identifier '{s}'"),
            TokenKind::Number(q) => write!(f, "number '{q}'"),
            TokenKind::Colon => write!(f, "':'"),
            TokenKind::Comma => write!(f, "','"),
            TokenKind::Newline => write!(f, "end of statement"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Position,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl Cursor<'_> {
    fn pos(&self) -> Position {
        Position { line: self.line, col: self.col }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek().filter(|&c| pred(c)) {
            out.push(c);
            self.bump();
        }
        out
    }
}

fn word_token(word: String) -> TokenKind {
    if let Some(k) = Keyword::from_word(&word) {
        return TokenKind::Keyword(k);
    }
    let mut chars = word.chars();
    if let (Some(c), None) = (chars.next(), chars.next()) {
        if let Some(face) = Face::from_label(c) {
            return TokenKind::Face(face);
        }
        if let Some(axis) = Axis::from_symbol(c) {
            return TokenKind::Axis(axis);
        }
    }
    TokenKind::Ident(word)
}

fn number(cur: &mut Cursor<'_>, start: Position) -> Result<TokenKind> {
    let mut text = String::new();
    if cur.peek() == Some('-') {
        cur.bump();
        text.push('-');
    }
    let num = cur.take_while(|c| c.is_ascii_digit());
    if num.is_empty() {
        return Err(Error::Lex { pos: start, msg: "'-' must be followed by digits".into() });
    }
    text.push_str(&num);
    let numerator: BigInt = text.parse().expect("digits");
    let denominator = if cur.peek() == Some('/') {
        cur.bump();
        let den = cur.take_while(|c| c.is_ascii_digit());
        let den: BigInt = den
            .parse()
            .map_err(|_| Error::Lex { pos: cur.pos(), msg: "expected denominator digits after '/'".into() })?;
        if den == BigInt::from(0) {
            return Err(Error::Lex { pos: start, msg: "zero denominator".into() });
        }
        den
    } else {
        BigInt::from(1)
    };
    if cur.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
        return Err(Error::Lex { pos: cur.pos(), msg: "number runs into a word".into() });
    }
    Ok(TokenKind::Number(BigRational::new(numerator, denominator)))
}

/// Splits source into tokens; comments and blank space are dropped.
pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut cur = Cursor { chars: text.chars().peekable(), line: 1, col: 1 };
    let mut tokens = Vec::new();
    while let Some(c) = cur.peek() {
        let pos = cur.pos();
        let kind = match c {
            '#' => {
                cur.take_while(|c| c != '\n');
                continue;
            }
            '\n' | ';' => {
                cur.bump();
                TokenKind::Newline
            }
            c if c.is_whitespace() => {
                cur.bump();
                continue;
            }
            ':' => {
                cur.bump();
                TokenKind::Colon
            }
            ',' => {
                cur.bump();
                TokenKind::Comma
            }
            c if c.is_ascii_digit() || c == '-' => number(&mut cur, pos)?,
            c if c.is_alphabetic() || c == '_' => word_token(cur.take_while(|c| c.is_alphanumeric() || c == '_')),
            other => return Err(Error::Lex { pos, msg: format!("unexpected character {other:?}") }),
        };
        tokens.push(Token { kind, pos });
    }
    Ok(tokens)
}

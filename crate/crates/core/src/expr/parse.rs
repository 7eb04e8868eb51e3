//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (("+"|"-") term)*
//! term   := factor (("*"|"/") factor)*
//! factor := "-" factor | power
//! power  := atom ("^" exponent)?
//! exponent := signed-integer | "(" signed-integer ")"
//! atom   := "z" | "m" | "i" | number | "exp" "(" expr ")" | "(" expr ")"
//! number := integer ("/" positive-integer)?
//! ```
//!
//! `^` binds tighter than unary minus and does not chain.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::Expr;
use crate::gaussian::{GaussianRational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Rational functions only: no `exp`, no `m`.
    Exact,
    Numeric,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    UnknownIdentifier(String),
    DecimalLiteral,
    ZeroDenominator,
    ChainedPower,
    ExponentOutOfRange,
    ModeViolation(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}")?,
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected {t}")?,
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input")?,
            ParseErrorKind::UnknownIdentifier(s) => write!(f, "unknown identifier {s:?}")?,
            ParseErrorKind::DecimalLiteral => write!(f, "decimal literals are not allowed; write a fraction")?,
            ParseErrorKind::ZeroDenominator => write!(f, "zero denominator in literal")?,
            ParseErrorKind::ChainedPower => write!(f, "'^' does not chain; add parentheses")?,
            ParseErrorKind::ExponentOutOfRange => write!(f, "exponent out of range")?,
            ParseErrorKind::ModeViolation(what) => write!(f, "{what} is not allowed in exact mode")?,
        }
        write!(f, " at byte {}", self.offset)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number {n}"),
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'.' || bytes[i] == b'e' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
                    return Err(ParseError { offset: i, kind: ParseErrorKind::DecimalLiteral });
                }
                let n: BigInt = text[start..i].parse().expect("ascii digits");
                out.push((start, Tok::Int(n)));
                continue;
            }
            b'.' => return Err(ParseError { offset: i, kind: ParseErrorKind::DecimalLiteral }),
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().expect("in bounds");
                return Err(ParseError { offset: i, kind: ParseErrorKind::UnexpectedChar(ch) });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    mode: Mode,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, ahead: usize) -> Option<&Tok> {
        self.toks.get(self.pos + ahead).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { offset: self.offset(), kind }
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(t) => self.err(ParseErrorKind::UnexpectedToken(t.describe())),
            None => self.err(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn expect(&mut self, want: Tok) -> PResult<()> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn expr(&mut self) -> PResult<Arc<Expr>> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Arc::new(Expr::Add(lhs, self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Arc::new(Expr::Sub(lhs, self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> PResult<Arc<Expr>> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Arc::new(Expr::Mul(lhs, self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    lhs = Arc::new(Expr::Div(lhs, self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> PResult<Arc<Expr>> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Arc::new(Expr::Neg(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Arc<Expr>> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let grouped = self.peek() == Some(&Tok::LParen);
        if grouped {
            self.pos += 1;
        }
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let at = self.offset();
        let Some(Tok::Int(n)) = self.peek().cloned() else {
            return Err(self.unexpected());
        };
        self.pos += 1;
        let k = n
            .to_i64()
            .filter(|k| *k <= u32::MAX as i64)
            .ok_or(ParseError { offset: at, kind: ParseErrorKind::ExponentOutOfRange })?;
        if grouped {
            if self.peek() != Some(&Tok::RParen) {
                return Err(self.unexpected());
            }
            self.pos += 1;
        }
        if self.peek() == Some(&Tok::Caret) {
            return Err(self.err(ParseErrorKind::ChainedPower));
        }
        Ok(Arc::new(Expr::Pow(base, if negative { -k } else { k })))
    }

    fn atom(&mut self) -> PResult<Arc<Expr>> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::Slash) {
                    if let Some(Tok::Int(d)) = self.peek_at(1).cloned() {
                        let d_at = self.toks[self.pos + 1].0;
                        if d.is_zero() {
                            return Err(ParseError { offset: d_at, kind: ParseErrorKind::ZeroDenominator });
                        }
                        self.pos += 2;
                        return Ok(Expr::constant(GaussianRational::from_rational(Rational::new(n, d))));
                    }
                }
                Ok(Expr::constant(GaussianRational::from_rational(Rational::from_integer(n))))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "z" => Ok(Expr::var()),
                    "i" => Ok(Expr::constant(GaussianRational::i())),
                    "m" => {
                        if self.mode == Mode::Exact {
                            return Err(ParseError { offset: at, kind: ParseErrorKind::ModeViolation("parameter m") });
                        }
                        Ok(Arc::new(Expr::Param))
                    }
                    "exp" => {
                        if self.mode == Mode::Exact {
                            return Err(ParseError { offset: at, kind: ParseErrorKind::ModeViolation("exp") });
                        }
                        self.expect(Tok::LParen)?;
                        let inner = self.expr()?;
                        self.expect(Tok::RParen)?;
                        Ok(Arc::new(Expr::Exp(inner)))
                    }
                    _ => Err(ParseError { offset: at, kind: ParseErrorKind::UnknownIdentifier(name) }),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parse `text` into an expression tree. No simplification is applied.
pub fn parse(text: &str, mode: Mode) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), mode };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.unexpected());
    }
    Ok(Arc::unwrap_or_clone(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::rat;

    fn exact(s: &str) -> Expr {
        parse(s, Mode::Exact).unwrap()
    }

    fn err(s: &str, mode: Mode) -> ParseError {
        parse(s, mode).unwrap_err()
    }

    #[test]
    fn literal_constants() {
        let e = exact("1/2 + 3/4*i");
        let f = e.to_rational_function().unwrap();
        assert_eq!(f.num().coeffs(), &[GaussianRational::new(rat(1, 2), rat(3, 4))]);
    }

    #[test]
    fn precedence() {
        // -z^2 is -(z^2)
        assert!(matches!(exact("-z^2"), Expr::Neg(ref a) if matches!(**a, Expr::Pow(_, 2))));
        // (z^2+1)/z
        assert!(matches!(exact("(z^2+1)/z"), Expr::Div(_, _)));
        assert!(matches!(exact("z^-1"), Expr::Pow(_, -1)));
        assert!(matches!(exact("1 - 2 - 3"), Expr::Sub(ref a, _) if matches!(**a, Expr::Sub(_, _))));
    }

    #[test]
    fn numeric_family() {
        let e = parse("exp(m*z)", Mode::Numeric).unwrap();
        assert!(e.has_param() && e.has_exp());
    }

    #[test]
    fn errors_carry_offsets() {
        let e = err("z^2^3", Mode::Exact);
        assert_eq!((e.offset, e.kind), (3, ParseErrorKind::ChainedPower));

        let e = err("exp(z)", Mode::Exact);
        assert_eq!((e.offset, e.kind), (0, ParseErrorKind::ModeViolation("exp")));

        let e = err("2*m", Mode::Exact);
        assert_eq!((e.offset, e.kind), (2, ParseErrorKind::ModeViolation("parameter m")));

        let e = err("1/0 + z", Mode::Exact);
        assert_eq!((e.offset, e.kind), (2, ParseErrorKind::ZeroDenominator));

        let e = err("0.5*z", Mode::Exact);
        assert_eq!((e.offset, e.kind), (1, ParseErrorKind::DecimalLiteral));

        let e = err("2z", Mode::Exact);
        assert_eq!(e.offset, 1);

        let e = err("(z+1", Mode::Exact);
        assert_eq!((e.offset, e.kind), (4, ParseErrorKind::UnexpectedEnd));

        let e = err("z $ 1", Mode::Exact);
        assert_eq!((e.offset, e.kind), (2, ParseErrorKind::UnexpectedChar('$')));

        let e = err("sin(z)", Mode::Numeric);
        assert_eq!(e.kind, ParseErrorKind::UnknownIdentifier("sin".into()));

        assert_eq!(err("", Mode::Exact).kind, ParseErrorKind::UnexpectedEnd);
        assert!(err("z^99999999999", Mode::Exact).to_string().contains("byte 2"));
    }
}

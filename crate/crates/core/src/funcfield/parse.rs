//! Text syntax for polynomials and rational functions: rationals, the variable
//! `t`, `sqrt(D)`, `+ - * / ^` and parentheses. Juxtaposition multiplies.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::field::{Quadratic, Rational};
use super::poly::Poly;
use super::ratfunc::RatFunc;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    /// Error at byte `offset` of `text`.
    pub fn at(text: &str, offset: usize, message: impl Into<String>) -> Self {
        let before = &text[..offset.min(text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        ParseError { line, column, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var,
    Sqrt,
    Op(char),
    LParen,
    RParen,
}

struct Lexer<'a> {
    text: &'a str,
    base: usize,
}

impl Lexer<'_> {
    fn tokens(&self, var: char) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut out = Vec::new();
        let bytes = self.text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            let pos = self.base + i;
            match c {
                ' ' | '\t' | '\n' | '\r' => i += 1,
                '0'..='9' => {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let n: BigInt = self.text[start..i].parse().expect("digits");
                    out.push((Tok::Num(n), pos));
                }
                '+' | '-' | '*' | '/' | '^' => {
                    out.push((Tok::Op(c), pos));
                    i += 1;
                }
                '(' => {
                    out.push((Tok::LParen, pos));
                    i += 1;
                }
                ')' => {
                    out.push((Tok::RParen, pos));
                    i += 1;
                }
                _ if self.text[i..].starts_with("sqrt") => {
                    out.push((Tok::Sqrt, pos));
                    i += 4;
                }
                _ if c == var => {
                    out.push((Tok::Var, pos));
                    i += 1;
                }
                _ => return Err(self.err(pos, format!("unexpected character '{c}'"))),
            }
        }
        Ok(out)
    }

    fn err(&self, pos: usize, msg: impl Into<String>) -> ParseError {
        ParseError { line: 0, column: pos, message: msg.into() }
    }
}

type Value = RatFunc<Quadratic>;

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    radicand: Option<BigInt>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, (usize, String)> {
        Err((self.offset(), msg.into()))
    }

    fn expr(&mut self) -> Result<Value, (usize, String)> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn starts_primary(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_) | Tok::Var | Tok::Sqrt | Tok::LParen))
    }

    fn term(&mut self) -> Result<Value, (usize, String)> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let at = self.offset();
                    let rhs = self.unary()?;
                    acc = acc.checked_div(&rhs).ok_or((at, "division by zero".to_string()))?;
                }
                _ if self.starts_primary() => acc = &acc * &self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Value, (usize, String)> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Value, (usize, String)> {
        let base = self.primary()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let neg = if let Some(Tok::Op('-')) = self.peek() {
                self.pos += 1;
                true
            } else {
                false
            };
            let Some(Tok::Num(n)) = self.peek().cloned() else {
                return self.fail("expected integer exponent");
            };
            let at = self.offset();
            self.pos += 1;
            let e: i64 = i64::try_from(&n).ok().filter(|e| *e <= 10_000).ok_or((at, "exponent too large".to_string()))?;
            if neg && base.is_zero() {
                return Err((at, "negative power of zero".into()));
            }
            return Ok(base.pow(if neg { -e } else { e }));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Value, (usize, String)> {
        let Some(tok) = self.peek().cloned() else {
            return self.fail("unexpected end of input");
        };
        match tok {
            Tok::Num(n) => {
                self.pos += 1;
                Ok(RatFunc::constant(Quadratic::rational(Rational::from_integer(n))))
            }
            Tok::Var => {
                self.pos += 1;
                Ok(RatFunc::t())
            }
            Tok::LParen => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.fail("expected ')'");
                }
                self.pos += 1;
                Ok(v)
            }
            Tok::Sqrt => {
                self.pos += 1;
                if self.peek() != Some(&Tok::LParen) {
                    return self.fail("expected '(' after sqrt");
                }
                self.pos += 1;
                let neg = if let Some(Tok::Op('-')) = self.peek() {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                let Some(Tok::Num(n)) = self.peek().cloned() else {
                    return self.fail("sqrt takes an integer");
                };
                let at = self.offset();
                self.pos += 1;
                if self.peek() != Some(&Tok::RParen) {
                    return self.fail("expected ')'");
                }
                self.pos += 1;
                let d = if neg { -n } else { n };
                let (sq, free) = split_square(&d);
                if free.is_one() {
                    return Ok(RatFunc::constant(Quadratic::rational(Rational::from_integer(sq))));
                }
                if let Some(r) = &self.radicand {
                    if r != &free {
                        return Err((at, "only one quadratic field per input".into()));
                    }
                }
                self.radicand = Some(free.clone());
                let v = Quadratic::new(Rational::zero(), Rational::from_integer(sq), free);
                Ok(RatFunc::constant(v))
            }
            Tok::Op(c) => self.fail(format!("unexpected '{c}'")),
            Tok::RParen => self.fail("unexpected ')'"),
        }
    }
}

/// `d = s² · f` with `f` squarefree (sign kept in `f`).
pub fn split_square(d: &BigInt) -> (BigInt, BigInt) {
    use num_traits::Signed;
    let mut f = d.abs();
    let mut s = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= f {
        let pp = &p * &p;
        while (&f % &pp).is_zero() {
            f /= &pp;
            s *= &p;
        }
        p += 1;
    }
    if d < &BigInt::zero() {
        f = -f;
    }
    (s, f)
}

/// Parses `text[range]` with positions reported relative to the whole text.
pub fn parse_quadratic_in(text: &str, start: usize, end: usize, var: char) -> Result<RatFunc<Quadratic>, ParseError> {
    let lexer = Lexer { text: &text[start..end], base: start };
    let toks = lexer.tokens(var).map_err(|e| ParseError::at(text, e.column, e.message))?;
    if toks.is_empty() {
        return Err(ParseError::at(text, start, "empty expression"));
    }
    let mut p = Parser { toks, pos: 0, end, radicand: None };
    let v = p.expr().map_err(|(o, m)| ParseError::at(text, o, m))?;
    if p.pos != p.toks.len() {
        return Err(ParseError::at(text, p.offset(), "trailing input"));
    }
    Ok(v)
}

pub fn parse_quadratic(text: &str) -> Result<RatFunc<Quadratic>, ParseError> {
    parse_quadratic_in(text, 0, text.len(), 't')
}

/// Parses an element of ℚ(t).
pub fn parse_ratfunc(text: &str) -> Result<RatFunc<Rational>, ParseError> {
    parse_ratfunc_in(text, 0, text.len())
}

pub fn parse_ratfunc_in(text: &str, start: usize, end: usize) -> Result<RatFunc<Rational>, ParseError> {
    let v = parse_quadratic_in(text, start, end, 't')?;
    v.to_rational()
        .ok_or_else(|| ParseError::at(text, start, "irrational coefficient where a rational one is required"))
}

/// Parses an element of ℚ[t].
pub fn parse_poly(text: &str) -> Result<Poly<Rational>, ParseError> {
    parse_poly_in(text, 0, text.len())
}

pub fn parse_poly_in(text: &str, start: usize, end: usize) -> Result<Poly<Rational>, ParseError> {
    let v = parse_ratfunc_in(text, start, end)?;
    v.as_poly()
        .cloned()
        .ok_or_else(|| ParseError::at(text, start, "expected a polynomial"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::field::{rat, ratio};

    #[test]
    fn parses_rational_functions() {
        let f = parse_ratfunc("(t^2-1)/(3*t+1/2)").unwrap();
        let num = Poly::from_coeffs(vec![rat(-1), rat(0), rat(1)]);
        let den = Poly::from_coeffs(vec![ratio(1, 2), rat(3)]);
        assert_eq!(f, RatFunc::new(num, den));
        assert_eq!(parse_poly("12^3").unwrap(), Poly::constant(rat(1728)));
        assert_eq!(parse_poly("36t").unwrap(), Poly::monomial(rat(36), 1));
        assert_eq!(parse_poly("-(t-1)^2").unwrap(), Poly::from_coeffs(vec![rat(-1), rat(2), rat(-1)]));
    }

    #[test]
    fn sqrt_token() {
        let f = parse_quadratic("(3+2*sqrt(2))*t").unwrap();
        let c = f.num().coeff(1);
        assert_eq!((c.re().clone(), c.im().clone()), (rat(3), rat(2)));
        assert_eq!(parse_quadratic("sqrt(8)").unwrap().num().coeff(0).im(), &rat(2));
        assert!(parse_quadratic("sqrt(2)+sqrt(3)").is_err());
    }

    #[test]
    fn positions() {
        let e = parse_poly("t +\n  3 ) ").unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));
        let e = parse_poly("t $ 1").unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));
        assert!(parse_poly("1/t").is_err());
        assert!(parse_poly("1/0").is_err());
    }

    #[test]
    fn display_round_trip() {
        for s in ["t^3 - 1/2*t + 7", "-t^2", "5", "(t - 1)/(t^2 + 1)", "-3/(2*t + 1)"] {
            let f = parse_ratfunc(s).unwrap();
            assert_eq!(parse_ratfunc(&f.to_string()).unwrap(), f, "{s}");
        }
        let q = parse_quadratic("(3+2*sqrt(2))*t^3 - sqrt(2)").unwrap();
        assert_eq!(parse_quadratic(&q.to_string()).unwrap(), q);
    }
}

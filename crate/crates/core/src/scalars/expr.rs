//! Symbolic expressions: parsing, printing and structural queries.
//!
//! Grammar:
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := '-'? base ('^' exponent)?
//! base     := number | symbol | '(' expr ')' | 'sqrt' '(' expr ')'
//! exponent := '-'? integer | '(' '-'? integer '/' positive-integer ')'
//! number   := integer ('/' positive-integer)?
//! ```
//! The reserved symbols `i` and `w` denote the imaginary unit and
//! `e^{2πi/3}`.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{fmt_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    /// Reserved unit `i`.
    I,
    /// Reserved unit `w`.
    W,
    Sym(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// `base ^ (num/den)` with `den > 0` and the fraction in lowest terms.
    Pow(Box<Expr>, i64, u64),
    Sqrt(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message} at offset {pos}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl Expr {
    pub fn num(q: Rational) -> Self {
        Expr::Num(q)
    }

    pub fn int(n: i64) -> Self {
        Expr::Num(Rational::from_integer(n.into()))
    }

    pub fn sym(s: &str) -> Self {
        Expr::Sym(s.to_string())
    }

    /// Symbols that occur, in order of first appearance.
    pub fn symbols(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let Expr::Sym(s) = e {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
        });
        out
    }

    /// Lcm of the denominators of all fractional exponents (`sqrt` counts
    /// as `1/2`).
    pub fn root_denominator(&self) -> u64 {
        let mut l = 1u64;
        self.walk(&mut |e| match e {
            Expr::Pow(_, _, d) => l = super::rational::lcm_u64(l, *d),
            Expr::Sqrt(_) => l = super::rational::lcm_u64(l, 2),
            _ => {}
        });
        l
    }

    fn walk<F: FnMut(&Expr)>(&self, f: &mut F) {
        f(self);
        match self {
            Expr::Neg(a) | Expr::Pow(a, _, _) | Expr::Sqrt(a) => a.walk(f),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            _ => {}
        }
    }

    /// Replaces symbols by expressions.
    pub fn substitute(&self, f: &dyn Fn(&str) -> Option<Expr>) -> Expr {
        let r = |e: &Expr| Box::new(e.substitute(f));
        match self {
            Expr::Sym(s) => f(s).unwrap_or_else(|| self.clone()),
            Expr::Neg(a) => Expr::Neg(r(a)),
            Expr::Add(a, b) => Expr::Add(r(a), r(b)),
            Expr::Sub(a, b) => Expr::Sub(r(a), r(b)),
            Expr::Mul(a, b) => Expr::Mul(r(a), r(b)),
            Expr::Div(a, b) => Expr::Div(r(a), r(b)),
            Expr::Pow(a, n, d) => Expr::Pow(r(a), *n, *d),
            Expr::Sqrt(a) => Expr::Sqrt(r(a)),
            _ => self.clone(),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(q) if !q.denom().is_one() => 2,
            Expr::Num(q) if q.is_negative() => 3,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Expr::Num(q) => f.write_str(&fmt_rational(q)),
            Expr::I => f.write_str("i"),
            Expr::W => f.write_str("w"),
            Expr::Sym(s) => f.write_str(s),
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write_at(f, 4)
            }
            Expr::Add(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(" + ")?;
                b.write_at(f, 2)
            }
            Expr::Sub(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(" - ")?;
                b.write_at(f, 2)
            }
            Expr::Mul(a, b) => {
                a.write_at(f, 2)?;
                f.write_str("*")?;
                b.write_operand(f)
            }
            Expr::Div(a, b) => {
                let left = alloc::format!("{}", Wrapped(a, 2));
                f.write_str(&left)?;
                f.write_str("/")?;
                // `2/3` would lex as one number, so a divisor that starts
                // with a digit after a trailing integer needs parentheses.
                let right = alloc::format!("{}", Operand(b));
                if ends_with_integer(&left) && right.starts_with(|c: char| c.is_ascii_digit()) {
                    write!(f, "({b})")
                } else {
                    f.write_str(&right)
                }
            }
            Expr::Pow(a, n, d) => {
                a.write_at(f, 5)?;
                if *d == 1 {
                    write!(f, "^{n}")
                } else {
                    write!(f, "^({n}/{d})")
                }
            }
            Expr::Sqrt(a) => {
                f.write_str("sqrt(")?;
                a.write_at(f, 0)?;
                f.write_str(")")
            }
        }
    }

    /// Right operand of `*` or `/`: a single factor. Fractions and products
    /// need parentheses so that left associativity is preserved.
    fn write_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(q) if !q.denom().is_one() => {
                f.write_str("(")?;
                self.write_at(f, 0)?;
                f.write_str(")")
            }
            _ => self.write_at(f, 3),
        }
    }
}

struct Wrapped<'a>(&'a Expr, u8);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.write_at(f, self.1)
    }
}

struct Operand<'a>(&'a Expr);

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.write_operand(f)
    }
}

fn ends_with_integer(s: &str) -> bool {
    let t = s.trim_end_matches(|c: char| c.is_ascii_digit());
    t.len() < s.len() && !t.ends_with(|c: char| c.is_ascii_alphanumeric() || c == '_' || c == '^')
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

/// Parses `text`. Symbols must be listed in `symbols`; `i`, `w` and `sqrt`
/// are reserved.
pub fn parse_expr(text: &str, symbols: &[&str]) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        symbols,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    symbols: &'a [&'a str],
}

impl Parser<'_> {
    fn err(&self, m: &str) -> ParseError {
        ParseError {
            pos: self.pos,
            message: m.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&alloc::format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let neg = self.eat(b'-');
        let base = self.base()?;
        let e = if self.eat(b'^') {
            let (n, d) = self.exponent()?;
            Expr::Pow(Box::new(base), n, d)
        } else {
            base
        };
        Ok(match (neg, e) {
            (false, e) => e,
            (true, Expr::Num(q)) => Expr::Num(-q),
            (true, e) => Expr::Neg(Box::new(e)),
        })
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        BigInt::parse_bytes(s.as_bytes(), 10).ok_or_else(|| self.err("bad integer"))
    }

    fn small(&mut self, v: BigInt) -> Result<i64, ParseError> {
        i64::try_from(v).map_err(|_| self.err("exponent too large"))
    }

    fn exponent(&mut self) -> Result<(i64, u64), ParseError> {
        if self.eat(b'(') {
            let neg = self.eat(b'-');
            let n = self.integer()?;
            let mut n = self.small(n)?;
            if neg {
                n = -n;
            }
            let d = if self.eat(b'/') {
                let d = self.integer()?;
                let d = self.small(d)?;
                if d <= 0 {
                    return Err(self.err("exponent denominator must be positive"));
                }
                d as u64
            } else {
                1
            };
            self.expect(b')')?;
            let g = num_integer::gcd(n.unsigned_abs(), d).max(1);
            Ok((n / g as i64, d / g))
        } else {
            let neg = self.eat(b'-');
            let n = self.integer()?;
            let n = self.small(n)?;
            Ok((if neg { -n } else { n }, 1))
        }
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let save = self.pos;
                if self.eat(b'/') && self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    let d = self.integer()?;
                    if d.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    return Ok(Expr::Num(Rational::new(n, d)));
                }
                self.pos = save;
                Ok(Expr::Num(Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match name {
                    "i" => Ok(Expr::I),
                    "w" => Ok(Expr::W),
                    "sqrt" => {
                        self.expect(b'(')?;
                        let e = self.expr()?;
                        self.expect(b')')?;
                        Ok(Expr::Sqrt(Box::new(e)))
                    }
                    _ if self.symbols.contains(&name) => Ok(Expr::Sym(name.to_string())),
                    _ => {
                        self.pos = start;
                        Err(self.err(&alloc::format!("unknown symbol '{name}'")))
                    }
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::rat;

    fn p(s: &str) -> Expr {
        parse_expr(s, &["t", "L", "lambda"]).unwrap()
    }

    #[test]
    fn precedence() {
        assert_eq!(
            p("1 + 2*t"),
            Expr::Add(
                Box::new(Expr::int(1)),
                Box::new(Expr::Mul(Box::new(Expr::int(2)), Box::new(Expr::sym("t"))))
            )
        );
        assert_eq!(
            p("-t^2"),
            Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::sym("t")), 2, 1)))
        );
        assert_eq!(p("-3"), Expr::Num(rat(-3, 1)));
        assert_eq!(p("t^(10/12)"), Expr::Pow(Box::new(Expr::sym("t")), 5, 6));
        assert_eq!(p("2/3"), Expr::Num(rat(2, 3)));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_expr("t + q", &["t"]).unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(parse_expr("(t", &["t"]).is_err());
        assert!(parse_expr("t^(1/0)", &["t"]).is_err());
        assert!(parse_expr("", &[]).is_err());
        assert!(parse_expr("1/0", &[]).is_err());
    }

    #[test]
    fn round_trip_examples() {
        for s in [
            "1/(2*t^(5/6))",
            "(sqrt(-t*(8 + 7*t)) - 4 - 5*t)/(sqrt(-t*(8 + 7*t)) + 4 + 3*t)",
            "(1 + L)*(t^2 - 1)/(L - 1 + t^2*(1 + L))",
            "-(t*lambda)",
            "t*-1/2",
            "(1/2)^3 - i*w",
            "t/(2/3)",
            "t - (L - 1)",
            "-t^-2",
            "t*2/(3^(1/2))",
        ] {
            let e = p(s);
            let printed = e.to_string();
            assert_eq!(p(&printed), e, "{s} -> {printed}");
        }
    }

    #[test]
    fn structure() {
        let e = p("t^(5/6)*sqrt(L) + lambda");
        assert_eq!(e.root_denominator(), 6);
        assert_eq!(e.symbols(), ["t", "L", "lambda"]);
    }
}

//! Recursive-descent parser for tail expressions in the index `i`.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := '-' factor | atom ('^' nonneg-integer)?
//! atom    := integer | 'i' | '(' expr ')'
//! ```
//!
//! A rational literal `p/q` is the division of two integer atoms. Unary
//! minus lets rendered tails with a negative leading coefficient parse back.

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use super::poly::Poly;
use super::Rational;

/// Parse failure with a 1-based column into the expression text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ExprError {
    pub column: usize,
    pub message: String,
}

/// A parsed tail `num / den`, together with every polynomial that appeared
/// as a divisor. All of them must be nonvanishing on the tail indices.
#[derive(Debug, Clone)]
pub struct ParsedTail {
    pub num: Poly,
    pub den: Poly,
    pub divisors: Vec<Poly>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Index,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = k + 1;
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            if k < chars.len() && (chars[k] == '.' || chars[k] == 'e' || chars[k] == 'E') {
                return Err(ExprError {
                    column: k + 1,
                    message: "float literals are not supported; write a rational p/q".into(),
                });
            }
            let digits: String = chars[start..k].iter().collect();
            out.push((Tok::Int(digits.parse().expect("ascii digits")), col));
            continue;
        }
        let tok = match c {
            'i' => Tok::Index,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '.' => {
                return Err(ExprError {
                    column: col,
                    message: "float literals are not supported; write a rational p/q".into(),
                })
            }
            other => {
                return Err(ExprError { column: col, message: format!("unexpected character '{other}'") })
            }
        };
        if tok == Tok::Index && chars.get(k + 1).is_some_and(|n| n.is_alphanumeric() || *n == '_') {
            return Err(ExprError { column: col, message: "unknown identifier; only 'i' is allowed".into() });
        }
        out.push((tok, col));
        k += 1;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
struct Frac {
    num: Poly,
    den: Poly,
}

impl Frac {
    fn poly(p: Poly) -> Self {
        Frac { num: p, den: Poly::one() }
    }

    /// Cancels the common factor so intermediate sizes stay small. Divisors
    /// are tracked separately, so no pole information is lost.
    fn reduced(self) -> Self {
        if self.num.is_zero() {
            return Frac::poly(Poly::zero());
        }
        let g = Poly::gcd(&self.num, &self.den);
        let num = self.num.div_rem(&g).0;
        let den = self.den.div_rem(&g).0;
        let lead = den.leading().cloned().unwrap_or_else(Rational::one);
        let inv = Rational::one() / lead;
        Frac { num: num.scale(&inv), den: den.scale(&inv) }
    }
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    end_col: usize,
    divisors: Vec<Poly>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError { column: self.col(), message: message.into() })
    }

    fn expr(&mut self) -> Result<Frac, ExprError> {
        let mut acc = self.term()?;
        loop {
            let sign = match self.peek() {
                Some(Tok::Plus) => 1,
                Some(Tok::Minus) => -1,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let rhs = self.term()?;
            let cross = &rhs.num * &acc.den;
            let lhs = &acc.num * &rhs.den;
            let num = if sign > 0 { &lhs + &cross } else { &lhs - &cross };
            acc = Frac { num, den: &acc.den * &rhs.den }.reduced();
        }
    }

    fn term(&mut self) -> Result<Frac, ExprError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = Frac { num: &acc.num * &rhs.num, den: &acc.den * &rhs.den }.reduced();
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let col = self.col();
                    let rhs = self.factor()?;
                    if rhs.num.is_zero() {
                        return Err(ExprError { column: col, message: "division by zero".into() });
                    }
                    self.divisors.push(rhs.num.clone());
                    acc = Frac { num: &acc.num * &rhs.den, den: &acc.den * &rhs.num }.reduced();
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Frac, ExprError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            let inner = self.factor()?;
            return Ok(Frac { num: -&inner.num, den: inner.den });
        }
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let exp = match self.peek() {
            Some(Tok::Int(n)) => n.clone(),
            _ => return self.err("expected a nonnegative integer exponent after '^'"),
        };
        let Ok(exp) = u32::try_from(exp) else {
            return self.err("exponent too large");
        };
        if exp > 64 {
            return self.err("exponent too large");
        }
        self.pos += 1;
        Ok(Frac { num: base.num.pow(exp), den: base.den.pow(exp) })
    }

    fn atom(&mut self) -> Result<Frac, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Frac::poly(Poly::constant(Rational::from_integer(n))))
            }
            Some(Tok::Index) => {
                self.pos += 1;
                Ok(Frac::poly(Poly::index()))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => self.err("expected a number, 'i' or '('"),
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Parses a tail expression into a reduced fraction of polynomials.
pub fn parse_tail(text: &str) -> Result<ParsedTail, ExprError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks: &toks, pos: 0, end_col: text.chars().count() + 1, divisors: Vec::new() };
    let frac = parser.expr()?;
    if parser.pos != toks.len() {
        return parser.err("unexpected token");
    }
    let frac = frac.reduced();
    debug_assert!(!frac.den.is_zero());
    Ok(ParsedTail { num: frac.num, den: frac.den, divisors: parser.divisors })
}

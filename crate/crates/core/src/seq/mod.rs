//! Exact real sequences indexed by `i = 1, 2, 3, ...`: a finite prefix of
//! explicit values followed by a rational-function tail in `i`.
//!
//! The class is closed under linear combination and products, and limits,
//! boundedness and eventual sign are decidable by root bounds plus a finite
//! scan.

pub mod expr;
pub mod poly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use self::expr::{parse_tail, ExprError};
pub use self::poly::Poly;

/// Exact arbitrary-precision rational, always in lowest terms.
pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn index_value(i: u64) -> Rational {
    Rational::from_integer(BigInt::from(i))
}

/// Parses `p`, `-p` or `p/q` with integer `p` and positive integer `q`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if !d.is_positive() {
        return None;
    }
    Some(Rational::new(n, d))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("tail denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("tail has a pole at integer index {0}")]
    Pole(u64),
    #[error("tail expression: {0}")]
    Expr(#[from] ExprError),
    #[error("sequence is not strictly positive: value {value} at index {index}")]
    NotStrictlyPositive { index: u64, value: Rational },
    #[error("linear combination needs matching, nonempty coefficient and sequence lists")]
    CombinationShape,
}

/// Limit of a sequence as `i -> inf`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitResult {
    Finite(Rational),
    PlusInfinity,
    MinusInfinity,
}

impl LimitResult {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            LimitResult::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for LimitResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitResult::Finite(v) => write!(f, "{v}"),
            LimitResult::PlusInfinity => f.write_str("+inf"),
            LimitResult::MinusInfinity => f.write_str("-inf"),
        }
    }
}

/// Outcome of a sign check over all of the index set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignCertificate {
    Certified,
    /// Smallest violating index and the exact value there.
    Violated { index: u64, value: Rational },
}

impl SignCertificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, SignCertificate::Certified)
    }
}

/// Result of the order-domination test `|x| <= lambda * e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domination {
    /// The least admissible multiplier, `sup |x(i)| / e(i)`.
    ExistsLambda(Rational),
    NoLambda,
}

/// A sequence given by explicit values for `i = 1..=prefix.len()` and by
/// `num(i) / den(i)` afterwards.
///
/// The tail is kept reduced with a monic denominator, so two sequences with
/// the same prefix compare equal exactly when their tails agree as rational
/// functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalSequence {
    prefix: Vec<Rational>,
    num: Poly,
    den: Poly,
}

impl RationalSequence {
    /// Builds a sequence, rejecting tails whose denominator vanishes at some
    /// integer index `>= prefix.len() + 1`.
    pub fn new(prefix: Vec<Rational>, num: Poly, den: Poly) -> Result<Self, SeqError> {
        if den.is_zero() {
            return Err(SeqError::ZeroDenominator);
        }
        let start = prefix.len() as u64 + 1;
        check_no_integer_root(&den, start)?;
        Ok(Self::from_checked(prefix, num, den))
    }

    /// Parses a tail expression and attaches it after `prefix`.
    pub fn parse(prefix: Vec<Rational>, tail: &str) -> Result<Self, SeqError> {
        let parsed = parse_tail(tail)?;
        let start = prefix.len() as u64 + 1;
        for d in &parsed.divisors {
            check_no_integer_root(d, start)?;
        }
        Self::new(prefix, parsed.num, parsed.den)
    }

    fn from_checked(prefix: Vec<Rational>, num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RationalSequence { prefix, num, den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = (num.div_rem(&g).0, den.div_rem(&g).0);
        let inv = Rational::one() / den.leading().expect("nonzero denominator");
        RationalSequence { prefix, num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn constant(c: Rational) -> Self {
        Self::polynomial(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::polynomial(Poly::zero())
    }

    /// `v(i) = i`.
    pub fn index() -> Self {
        Self::polynomial(Poly::index())
    }

    pub fn polynomial(p: Poly) -> Self {
        RationalSequence { prefix: Vec::new(), num: p, den: Poly::one() }
    }

    /// The unit sequence `e^k`: one at index `k`, zero elsewhere.
    pub fn unit(k: u64) -> Self {
        assert!(k >= 1, "indices start at 1");
        let mut prefix = vec![Rational::zero(); k as usize];
        prefix[k as usize - 1] = Rational::one();
        RationalSequence { prefix, num: Poly::zero(), den: Poly::one() }
    }

    /// `value` from index `start` on, zero before it.
    pub fn step(start: u64, value: Rational) -> Self {
        assert!(start >= 1, "indices start at 1");
        let prefix = vec![Rational::zero(); start as usize - 1];
        RationalSequence { prefix, num: Poly::constant(value), den: Poly::one() }
    }

    /// Sequence with the given explicit values and then the tail of `self`.
    pub fn with_prefix(&self, prefix: Vec<Rational>) -> Result<Self, SeqError> {
        Self::new(prefix, self.num.clone(), self.den.clone())
    }

    pub fn prefix(&self) -> &[Rational] {
        &self.prefix
    }

    pub fn tail_num(&self) -> &Poly {
        &self.num
    }

    pub fn tail_den(&self) -> &Poly {
        &self.den
    }

    /// First index governed by the tail.
    pub fn tail_start(&self) -> u64 {
        self.prefix.len() as u64 + 1
    }

    /// The tail rendered in the expression grammar.
    pub fn tail_expr(&self) -> String {
        if self.den == Poly::one() {
            self.num.to_expr()
        } else {
            format!("({})/({})", self.num.to_expr(), self.den.to_expr())
        }
    }

    pub fn eval(&self, i: u64) -> Rational {
        assert!(i >= 1, "indices start at 1");
        if let Some(v) = self.prefix.get(i as usize - 1) {
            return v.clone();
        }
        self.eval_tail(i)
    }

    fn eval_tail(&self, i: u64) -> Rational {
        let x = index_value(i);
        self.num.eval(&x) / self.den.eval(&x)
    }

    pub fn limit(&self) -> LimitResult {
        tail_limit(&self.num, &self.den)
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self.limit(), LimitResult::Finite(_))
    }

    pub fn is_convergent(&self) -> bool {
        self.is_bounded()
    }

    /// Decides `s(i) >= 0` for every `i`.
    pub fn certify_nonneg(&self) -> SignCertificate {
        self.certify_sign(false)
    }

    /// Decides `s(i) > 0` for every `i`.
    pub fn certify_positive(&self) -> SignCertificate {
        self.certify_sign(true)
    }

    fn certify_sign(&self, strict: bool) -> SignCertificate {
        let bad = |v: &Rational| if strict { !v.is_positive() } else { v.is_negative() };
        if let Some((i, v)) = self.prefix.iter().enumerate().find(|(_, v)| bad(v)) {
            return SignCertificate::Violated { index: i as u64 + 1, value: v.clone() };
        }
        // The tail's sign is that of num * den, a polynomial with constant
        // sign past its root bound.
        let start = self.tail_start();
        let product = &self.num * &self.den;
        let hi = start.max(product.root_horizon());
        match product.first_integer_where(start, hi, bad) {
            Some(i) => SignCertificate::Violated { index: i, value: self.eval(i) },
            None => SignCertificate::Certified,
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        RationalSequence {
            prefix: self.prefix.iter().map(|v| v * k).collect(),
            num: self.num.scale(k),
            den: if k.is_zero() { Poly::one() } else { self.den.clone() },
        }
    }

    /// Exact supremum over all indices, or `None` when unbounded above.
    pub fn supremum(&self) -> Option<Rational> {
        let tail = tail_supremum(&self.num, &self.den, self.tail_start())?;
        Some(self.prefix.iter().cloned().fold(tail, Rational::max))
    }
}

/// Exact `sup num(i) / den(i)` over integers `i >= lo`, where `den` has no
/// integer roots; `None` when unbounded above.
fn tail_supremum(num: &Poly, den: &Poly, lo: u64) -> Option<Rational> {
    let limit = tail_limit(num, den);
    if limit == LimitResult::PlusInfinity {
        return None;
    }
    // The derivative has the sign of `slope`; past `hi` the function is
    // monotone, and poles between integers are split off via sign changes
    // of `den`.
    let slope = &(&num.derivative() * den) - &(num * &den.derivative());
    let hi = lo.max(slope.root_horizon()).max(den.root_horizon()) + 1;
    let mut pts = Poly::breakpoints_for_slope(&slope, lo, hi);
    for c in den.sign_changes(lo, hi) {
        pts.extend([c, c + 1]);
    }
    let best = pts.iter().map(|&i| num.eval_at(i) / den.eval_at(i)).max().expect("nonempty");
    Some(match limit {
        LimitResult::Finite(l) => best.max(l),
        _ => best,
    })
}

fn tail_limit(num: &Poly, den: &Poly) -> LimitResult {
    let Some(dn) = num.degree() else {
        return LimitResult::Finite(Rational::zero());
    };
    let dd = den.degree().expect("nonzero denominator");
    let ratio = num.leading().unwrap() / den.leading().unwrap();
    match dn.cmp(&dd) {
        std::cmp::Ordering::Less => LimitResult::Finite(Rational::zero()),
        std::cmp::Ordering::Equal => LimitResult::Finite(ratio),
        std::cmp::Ordering::Greater if ratio.is_positive() => LimitResult::PlusInfinity,
        std::cmp::Ordering::Greater => LimitResult::MinusInfinity,
    }
}

fn check_no_integer_root(p: &Poly, start: u64) -> Result<(), SeqError> {
    if p.is_zero() {
        return Err(SeqError::ZeroDenominator);
    }
    match p.first_integer_root(start, start.max(p.root_horizon())) {
        Some(i) => Err(SeqError::Pole(i)),
        None => Ok(()),
    }
}

/// Pointwise exact `sum coeffs[k] * seqs[k]`.
pub fn linear_combination(coeffs: &[Rational], seqs: &[RationalSequence]) -> Result<RationalSequence, SeqError> {
    if coeffs.is_empty() || coeffs.len() != seqs.len() {
        return Err(SeqError::CombinationShape);
    }
    let mut acc = seqs[0].scale(&coeffs[0]);
    for (c, s) in coeffs.iter().zip(seqs).skip(1) {
        acc = &acc + &s.scale(c);
    }
    Ok(acc)
}

/// Decides whether some `lambda > 0` satisfies `|x(i)| <= lambda * e(i)` for
/// all `i`; `e` must be strictly positive everywhere.
///
/// When `x` is identically zero the returned supremum is zero and every
/// positive multiplier works.
pub fn dominates(e: &RationalSequence, x: &RationalSequence) -> Result<Domination, SeqError> {
    if let SignCertificate::Violated { index, value } = e.certify_positive() {
        return Err(SeqError::NotStrictlyPositive { index, value });
    }
    // Explicit indices first, then sup |r| = max(sup r, sup -r) for the
    // tail ratio r = x / e.
    let start = x.tail_start().max(e.tail_start());
    let head = (1..start).map(|i| x.eval(i).abs() / e.eval(i)).max();
    let (num, den) = (&x.num * &e.den, &x.den * &e.num);
    let above = tail_supremum(&num, &den, start);
    let below = tail_supremum(&-&num, &den, start);
    Ok(match (above, below) {
        (Some(a), Some(b)) => Domination::ExistsLambda(head.into_iter().fold(a.max(b), Rational::max)),
        _ => Domination::NoLambda,
    })
}

fn combine(a: &RationalSequence, b: &RationalSequence, op: impl Fn(&Rational, &Rational) -> Rational, tail: (Poly, Poly)) -> RationalSequence {
    let len = a.prefix.len().max(b.prefix.len());
    let prefix = (1..=len as u64).map(|i| op(&a.eval(i), &b.eval(i))).collect();
    let (num, den) = tail;
    RationalSequence::from_checked(prefix, num, den)
}

impl Add for &RationalSequence {
    type Output = RationalSequence;
    fn add(self, rhs: &RationalSequence) -> RationalSequence {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        combine(self, rhs, |x, y| x + y, (num, &self.den * &rhs.den))
    }
}

impl Sub for &RationalSequence {
    type Output = RationalSequence;
    fn sub(self, rhs: &RationalSequence) -> RationalSequence {
        self + &(-rhs)
    }
}

impl Neg for &RationalSequence {
    type Output = RationalSequence;
    fn neg(self) -> RationalSequence {
        self.scale(&-Rational::one())
    }
}

impl Mul for &RationalSequence {
    type Output = RationalSequence;
    fn mul(self, rhs: &RationalSequence) -> RationalSequence {
        combine(self, rhs, |x, y| x * y, (&self.num * &rhs.num, &self.den * &rhs.den))
    }
}

impl fmt::Display for RationalSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.prefix.is_empty() {
            let vals: Vec<String> = self.prefix.iter().map(ToString::to_string).collect();
            write!(f, "[{}] then ", vals.join(", "))?;
        }
        f.write_str(&self.tail_expr())
    }
}

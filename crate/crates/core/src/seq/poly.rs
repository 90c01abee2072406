//! Dense univariate polynomials over the rationals, in the sequence index `i`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

/// Polynomial with coefficients stored in ascending degree order.
///
/// The zero polynomial has an empty coefficient list; otherwise the last
/// coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The monomial `i`.
    pub fn index() -> Self {
        Poly::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_at(&self, i: u64) -> Rational {
        self.eval(&Rational::from_integer(BigInt::from(i)))
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Sign of `p(x)` as `x -> +inf`: -1, 0 or 1.
    pub fn sign_at_infinity(&self) -> i8 {
        match self.leading() {
            None => 0,
            Some(c) if c.is_positive() => 1,
            Some(_) => -1,
        }
    }

    /// Polynomial long division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if nd < dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for shift in (0..=nd - dd).rev() {
            let c = &rem[shift + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (k, dc) in divisor.coeffs.iter().enumerate() {
                rem[shift + k] -= &c * dc;
            }
            quot[shift] = c;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&(Rational::one() / l)),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Ceiling of the Cauchy bound `1 + max |a_k| / |a_n|`. Every real root
    /// lies strictly below it, so the sign is constant for `x >= horizon`.
    /// Zero for constants.
    pub fn root_horizon(&self) -> u64 {
        let Some(n) = self.degree() else { return 0 };
        if n == 0 {
            return 0;
        }
        let lead = self.coeffs[n].abs();
        let max = self.coeffs[..n]
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Rational::zero);
        let bound = Rational::one() + max / lead;
        bound
            .ceil()
            .to_integer()
            .to_u64()
            .expect("root bound exceeds the supported index range")
    }

    /// Sorted integer points of `[lo, hi]`, both ends included, such that
    /// `self` is monotone on integers between consecutive points.
    pub fn monotone_breakpoints(&self, lo: u64, hi: u64) -> Vec<u64> {
        Self::breakpoints_for_slope(&self.derivative(), lo, hi)
    }

    /// Breakpoints for any function on `[lo, hi]` whose derivative has the
    /// sign of `slope` wherever the function is defined.
    pub fn breakpoints_for_slope(slope: &Poly, lo: u64, hi: u64) -> Vec<u64> {
        let mut pts = match slope.degree() {
            Some(d) if d >= 1 => slope.monotone_breakpoints(lo, hi),
            _ => vec![lo, hi],
        };
        for c in slope.sign_changes_between(&pts) {
            pts.extend([c, c + 1]);
        }
        pts.sort_unstable();
        pts.dedup();
        pts
    }

    /// Integers `c` in `[lo, hi)` where the sign of `self` differs between
    /// `c` and `c + 1`.
    pub fn sign_changes(&self, lo: u64, hi: u64) -> Vec<u64> {
        self.sign_changes_between(&self.monotone_breakpoints(lo, hi))
    }

    /// Sign changes when `self` is monotone on integers between
    /// consecutive `pts`, so each stretch holds at most two.
    fn sign_changes_between(&self, pts: &[u64]) -> Vec<u64> {
        let sign = |i: u64| sign_of(&self.eval_at(i));
        let mut out = Vec::new();
        for w in pts.windows(2) {
            let sa = sign(w[0]);
            if sign(w[1]) == sa {
                continue;
            }
            let c = bisect(w[0], w[1], |i| sign(i) == sa);
            out.push(c);
            // a run of zeros between the two signs is a second change
            if sign(c + 1) == 0 && sign(w[1]) != 0 {
                out.push(bisect(c + 1, w[1], |i| sign(i) == 0));
            }
        }
        out
    }

    /// Smallest integer `i` in `[lo, hi]` with `pred(self(i))`, for
    /// predicates true on a down-set or up-set of values (such as `v < 0`).
    pub fn first_integer_where(&self, lo: u64, hi: u64, pred: impl Fn(&Rational) -> bool) -> Option<u64> {
        let holds = |i: u64| pred(&self.eval_at(i));
        let pts = self.monotone_breakpoints(lo, hi);
        if holds(pts[0]) {
            return Some(pts[0]);
        }
        pts.windows(2).find(|w| holds(w[1])).map(|w| bisect(w[0], w[1], |i| !holds(i)) + 1)
    }

    /// Smallest integer root in `[lo, hi]`.
    pub fn first_integer_root(&self, lo: u64, hi: u64) -> Option<u64> {
        if self.is_zero() {
            return Some(lo);
        }
        let pts = self.monotone_breakpoints(lo, hi);
        if self.eval_at(pts[0]).is_zero() {
            return Some(pts[0]);
        }
        for w in pts.windows(2) {
            let sa = sign_of(&self.eval_at(w[0]));
            if sign_of(&self.eval_at(w[1])) == sa {
                continue;
            }
            let c = bisect(w[0], w[1], |i| sign_of(&self.eval_at(i)) == sa) + 1;
            if self.eval_at(c).is_zero() {
                return Some(c);
            }
        }
        None
    }

    /// Renders the polynomial in the tail expression grammar.
    pub fn to_expr(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mag = c.abs();
            let mono = match k {
                0 => String::new(),
                1 => "i".to_string(),
                _ => format!("i^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

fn sign_of(v: &Rational) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Largest `c` in `[lo, hi)` with `keep(c)`, given `keep(lo)`, `!keep(hi)`
/// and `keep` true on a prefix.
fn bisect(mut lo: u64, mut hi: u64, keep: impl Fn(u64) -> bool) -> u64 {
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if keep(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        Poly::from_coeffs(
            (0..len)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) + rhs.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (a, ca) in self.coeffs.iter().enumerate() {
            for (b, cb) in rhs.coeffs.iter().enumerate() {
                out[a + b] += ca * cb;
            }
        }
        Poly::from_coeffs(out)
    }
}

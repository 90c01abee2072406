//! Two-phase revised simplex over exact rationals for
//! `min c^T x  s.t.  A x = b, x >= 0`, with Bland's rule throughout.
//!
//! The basis inverse is kept explicitly. Row counts here are small (the
//! caller picks the orientation with fewer rows), so each iteration costs
//! `O(m^2)` plus pricing, and pricing stops at the first improving column.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::seq::Rational;

pub(crate) struct StandardForm {
    /// Column-major constraint matrix: `cols[j]` has one entry per row.
    pub cols: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

pub(crate) enum CoreOutcome {
    /// `x` optimal, `y` row multipliers with `A^T y <= c` and `b^T y = c^T x`.
    Optimal { x: Vec<Rational>, y: Vec<Rational> },
    /// `A^T y <= 0` and `b^T y > 0`.
    Infeasible { y: Vec<Rational> },
    /// `x` feasible, `A d = 0`, `d >= 0`, `c^T d < 0`.
    Unbounded { x: Vec<Rational>, d: Vec<Rational> },
}

/// Column `[c_j; a_j]` scaled by a positive common denominator, so the
/// sign of a reduced cost needs only integer arithmetic.
struct ScaledColumn {
    entries: Vec<BigInt>,
    cost: BigInt,
}

impl ScaledColumn {
    fn new(col: &[Rational], cost: &Rational) -> Self {
        let den = col.iter().chain(std::iter::once(cost)).fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let scale = |v: &Rational| v.numer() * (&den / v.denom());
        ScaledColumn { entries: col.iter().map(scale).collect(), cost: scale(cost) }
    }
}

struct Revised<'a> {
    /// Structural columns with row signs applied lazily via `flip`.
    cols: &'a [Vec<Rational>],
    scaled: Vec<ScaledColumn>,
    flip: Vec<bool>,
    m: usize,
    n: usize,
    binv: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    xb: Vec<Rational>,
}

impl Revised<'_> {
    /// Entry `r` of column `j`; artificial column `n + r` is `e_r`.
    fn entry(&self, j: usize, r: usize) -> Rational {
        if j >= self.n {
            return if j - self.n == r { Rational::one() } else { Rational::zero() };
        }
        let v = &self.cols[j][r];
        if self.flip[r] {
            -v
        } else {
            v.clone()
        }
    }

    /// `B^{-1} a_j`.
    fn column(&self, j: usize) -> Vec<Rational> {
        let a: Vec<Rational> = (0..self.m).map(|r| self.entry(j, r)).collect();
        self.binv
            .iter()
            .map(|row| row.iter().zip(&a).filter(|(_, v)| !v.is_zero()).map(|(b, v)| b * v).sum())
            .collect()
    }

    /// `c_B^T B^{-1}`.
    fn multipliers(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); self.m];
        for (r, &bv) in self.basis.iter().enumerate() {
            let cb = &cost[bv];
            if cb.is_zero() {
                continue;
            }
            for (yk, b) in y.iter_mut().zip(&self.binv[r]) {
                if !b.is_zero() {
                    *yk += cb * b;
                }
            }
        }
        y
    }

    fn pivot(&mut self, r: usize, j: usize, alpha: &[Rational]) {
        let inv = Rational::one() / &alpha[r];
        for v in self.binv[r].iter_mut() {
            *v *= &inv;
        }
        self.xb[r] *= &inv;
        let prow = self.binv[r].clone();
        let px = self.xb[r].clone();
        for k in 0..self.m {
            if k == r || alpha[k].is_zero() {
                continue;
            }
            let f = &alpha[k];
            for (v, p) in self.binv[k].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= f * p;
                }
            }
            self.xb[k] -= f * &px;
        }
        self.basis[r] = j;
    }

    /// Lowest-index column in `0..limit` with negative reduced cost. With
    /// `phase_one` set, structural costs are zero and artificial costs one.
    fn entering(&self, y: &[Rational], phase_one: bool, limit: usize) -> Option<usize> {
        // y = ys / den with den > 0, row flips folded into ys.
        let den = y.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let ys: Vec<BigInt> = y
            .iter()
            .zip(&self.flip)
            .map(|(v, &f)| {
                let s = v.numer() * (&den / v.denom());
                if f {
                    -s
                } else {
                    s
                }
            })
            .collect();
        (0..limit).filter(|j| !self.basis.contains(j)).find(|&j| {
            if j >= self.n {
                let c = if phase_one { Rational::one() } else { Rational::zero() };
                return (c - &y[j - self.n]).is_negative();
            }
            let col = &self.scaled[j];
            let mut d = if phase_one { BigInt::zero() } else { &col.cost * &den };
            for (a, yv) in col.entries.iter().zip(&ys) {
                if !a.is_zero() && !yv.is_zero() {
                    d -= a * yv;
                }
            }
            d.is_negative()
        })
    }

    /// Bland's rule on columns `0..limit` for costs `cost`. Returns
    /// `Err((j, alpha))` when entering column `j` has no positive entry.
    fn run(&mut self, cost: &[Rational], phase_one: bool, limit: usize) -> Result<(), (usize, Vec<Rational>)> {
        loop {
            let y = self.multipliers(cost);
            let Some(j) = self.entering(&y, phase_one, limit) else { return Ok(()) };
            let alpha = self.column(j);
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.m {
                if !alpha[r].is_positive() {
                    continue;
                }
                let ratio = &self.xb[r] / &alpha[r];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, j, &alpha),
                None => return Err((j, alpha)),
            }
        }
    }

    fn basic_solution(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.n];
        for (r, &bv) in self.basis.iter().enumerate() {
            if bv < self.n {
                x[bv] = self.xb[r].clone();
            }
        }
        x
    }

    fn unflip(&self, mut y: Vec<Rational>) -> Vec<Rational> {
        for (v, &s) in y.iter_mut().zip(&self.flip) {
            if s {
                *v = -v.clone();
            }
        }
        y
    }
}

pub(crate) fn solve_standard(sf: &StandardForm) -> CoreOutcome {
    let m = sf.b.len();
    let n = sf.c.len();
    debug_assert_eq!(sf.cols.len(), n);
    // Flip rows so the right-hand side is nonnegative; artificials start basic.
    let flip: Vec<bool> = sf.b.iter().map(Signed::is_negative).collect();
    let binv = (0..m)
        .map(|r| (0..m).map(|k| if k == r { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    let xb = sf.b.iter().map(Signed::abs).collect();
    let scaled = sf.cols.iter().zip(&sf.c).map(|(col, c)| ScaledColumn::new(col, c)).collect();
    let mut s = Revised { cols: &sf.cols, scaled, flip, m, n, binv, basis: (n..n + m).collect(), xb };

    let phase1: Vec<Rational> = (0..n + m).map(|j| if j < n { Rational::zero() } else { Rational::one() }).collect();
    if s.run(&phase1, true, n + m).is_err() {
        unreachable!("phase one is bounded below by zero");
    }
    let infeasibility: Rational = s.basis.iter().zip(&s.xb).filter(|(&bv, _)| bv >= n).map(|(_, v)| v.clone()).sum();
    if infeasibility.is_positive() {
        let y = s.multipliers(&phase1);
        return CoreOutcome::Infeasible { y: s.unflip(y) };
    }

    // Drive zero-level artificials out of the basis where a structural
    // column can replace them; rows where none can are redundant.
    for r in 0..m {
        if s.basis[r] < n {
            continue;
        }
        let replacement = (0..n)
            .filter(|j| !s.basis.contains(j))
            .find(|&j| !s.binv[r].iter().enumerate().map(|(k, b)| b * s.entry(j, k)).sum::<Rational>().is_zero());
        if let Some(j) = replacement {
            let alpha = s.column(j);
            s.pivot(r, j, &alpha);
        }
    }

    let mut phase2 = sf.c.clone();
    phase2.extend((0..m).map(|_| Rational::zero()));
    match s.run(&phase2, false, n) {
        Ok(()) => {
            let y = s.multipliers(&phase2);
            CoreOutcome::Optimal { x: s.basic_solution(), y: s.unflip(y) }
        }
        Err((j, alpha)) => {
            let x = s.basic_solution();
            let mut d = vec![Rational::zero(); n];
            d[j] = Rational::one();
            for (r, &bv) in s.basis.iter().enumerate() {
                if bv < n {
                    d[bv] = -&alpha[r];
                }
            }
            CoreOutcome::Unbounded { x, d }
        }
    }
}

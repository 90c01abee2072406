//! Countable semi-infinite linear programs
//!
//! ```text
//!     inf  phi^T x   s.t.   sum_j a^j(i) x_j >= b(i)   for all i = 1, 2, ...
//! ```
//!
//! and the finite problems built from them at a truncation level `k`:
//!
//! * [`truncated_primal`]: rows `i <= k`, free variables (a relaxation).
//! * [`finite_support_dual`]: multipliers supported on `1..=k`.
//! * [`extended_dual`]: the same plus a multiple `lambda >= 0` of the limit
//!   functional, available when every coefficient sequence converges.
//! * [`limit_augmented_primal`]: the truncation plus the limit row
//!   `sum_j L_{a^j} x_j >= L_b`, the finite-LP dual of the extended dual.

mod report;

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lp::{self, LPOutcome, LPProblem, Relation, Sense, VarBound};
use crate::seq::{self, LimitResult, Rational, RationalSequence, SignCertificate};

pub use report::{
    gap_report, BoundsReport, CandidateCheck, CandidateSource, GapClassification, LevelReport, DEFAULT_EPSILON_DEN, DEFAULT_SCHEDULE,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SilpError {
    #[error("SpaceNotC: the extended dual needs every coefficient sequence and the right-hand side to converge")]
    SpaceNotC,
    #[error("instance needs at least one variable and exactly one coefficient sequence per variable")]
    Shape,
    #[error("expected a point with {expected} coordinates, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("dual multipliers must be nonnegative and supported on indices >= 1")]
    InvalidDual,
    #[error("truncation level must be at least 1")]
    ZeroLevel,
    #[error("schedule must be nonempty and strictly increasing")]
    Schedule,
    #[error("epsilon must be positive")]
    Epsilon,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SILPInstance {
    phi: Vec<Rational>,
    a: Vec<RationalSequence>,
    b: RationalSequence,
}

impl SILPInstance {
    pub fn new(phi: Vec<Rational>, a: Vec<RationalSequence>, b: RationalSequence) -> Result<Self, SilpError> {
        if phi.is_empty() || phi.len() != a.len() {
            return Err(SilpError::Shape);
        }
        Ok(SILPInstance { phi, a, b })
    }

    pub fn num_vars(&self) -> usize {
        self.phi.len()
    }

    pub fn objective(&self) -> &[Rational] {
        &self.phi
    }

    pub fn coefficients(&self) -> &[RationalSequence] {
        &self.a
    }

    pub fn rhs(&self) -> &RationalSequence {
        &self.b
    }

    /// Constraint row `i`: coefficients `a^j(i)` and right-hand side `b(i)`.
    pub fn row(&self, i: u64) -> (Vec<Rational>, Rational) {
        (self.a.iter().map(|s| s.eval(i)).collect(), self.b.eval(i))
    }

    fn objective_value(&self, x: &[Rational]) -> Rational {
        self.phi.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

/// The smallest of `R^N`, `l_inf`, `c` containing every `a^j` and `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceTag {
    RN,
    Linf,
    /// All sequences converge; limits are `(L_{a^1}, ..., L_{a^n}, L_b)`.
    C { limits: Vec<Rational> },
}

impl SpaceTag {
    pub fn name(&self) -> &'static str {
        match self {
            SpaceTag::RN => "RN",
            SpaceTag::Linf => "LINF",
            SpaceTag::C { .. } => "C",
        }
    }

    pub fn is_c(&self) -> bool {
        matches!(self, SpaceTag::C { .. })
    }
}

pub fn classify_space(inst: &SILPInstance) -> SpaceTag {
    let seqs = inst.a.iter().chain(std::iter::once(&inst.b));
    let limits: Vec<LimitResult> = seqs.map(RationalSequence::limit).collect();
    if limits.iter().all(|l| l.finite().is_some()) {
        SpaceTag::C { limits: limits.into_iter().map(|l| l.finite().unwrap().clone()).collect() }
    } else if inst.a.iter().chain(std::iter::once(&inst.b)).all(RationalSequence::is_bounded) {
        // bounded rational tails converge, so this branch is not reached
        SpaceTag::Linf
    } else {
        SpaceTag::RN
    }
}

fn c_limits(inst: &SILPInstance) -> Result<Vec<Rational>, SilpError> {
    match classify_space(inst) {
        SpaceTag::C { limits } => Ok(limits),
        _ => Err(SilpError::SpaceNotC),
    }
}

fn check_level(k: u64) -> Result<(), SilpError> {
    if k == 0 {
        Err(SilpError::ZeroLevel)
    } else {
        Ok(())
    }
}

fn primal_problem(inst: &SILPInstance, k: u64) -> LPProblem {
    let mut p = LPProblem::new(Sense::Min, inst.phi.clone(), vec![VarBound::Free; inst.num_vars()]);
    for i in 1..=k {
        let (coeffs, rhs) = inst.row(i);
        p.add_row(coeffs, Relation::Ge, rhs);
    }
    p
}

/// The finite-support dual over `u_1..u_k`, optionally with the extra
/// limit column appended as the last variable.
fn dual_problem(inst: &SILPInstance, k: u64, limit_column: Option<&[Rational]>) -> LPProblem {
    let n = inst.num_vars();
    let cols = k as usize + usize::from(limit_column.is_some());
    let mut objective: Vec<Rational> = (1..=k).map(|i| inst.b.eval(i)).collect();
    let mut columns: Vec<Vec<Rational>> = (1..=k).map(|i| inst.row(i).0).collect();
    if let Some(limits) = limit_column {
        objective.push(limits[n].clone());
        columns.push(limits[..n].to_vec());
    }
    let mut p = LPProblem::new(Sense::Max, objective, vec![VarBound::NonNegative; cols]);
    for j in 0..n {
        p.add_row(columns.iter().map(|c| c[j].clone()).collect(), Relation::Eq, inst.phi[j].clone());
    }
    p
}

/// LP behind [`truncated_primal`].
pub fn truncated_primal_problem(inst: &SILPInstance, k: u64) -> Result<LPProblem, SilpError> {
    check_level(k)?;
    Ok(primal_problem(inst, k))
}

/// LP behind [`finite_support_dual`]; variable `i - 1` is `u(i)`.
pub fn finite_support_dual_problem(inst: &SILPInstance, k: u64) -> Result<LPProblem, SilpError> {
    check_level(k)?;
    Ok(dual_problem(inst, k, None))
}

/// LP behind [`extended_dual`]; the last variable is `lambda`.
pub fn extended_dual_problem(inst: &SILPInstance, k: u64) -> Result<LPProblem, SilpError> {
    check_level(k)?;
    let limits = c_limits(inst)?;
    Ok(dual_problem(inst, k, Some(&limits)))
}

/// LP behind [`limit_augmented_primal`]; the limit row is last.
pub fn limit_augmented_primal_problem(inst: &SILPInstance, k: u64) -> Result<LPProblem, SilpError> {
    check_level(k)?;
    let limits = c_limits(inst)?;
    let n = inst.num_vars();
    let mut p = primal_problem(inst, k);
    p.add_row(limits[..n].to_vec(), Relation::Ge, limits[n].clone());
    Ok(p)
}

/// `min phi^T x` over the first `k` constraints. Its value never exceeds
/// the semi-infinite optimum and is nondecreasing in `k`.
pub fn truncated_primal(inst: &SILPInstance, k: u64) -> Result<LPOutcome, SilpError> {
    Ok(lp::solve(&truncated_primal_problem(inst, k)?))
}

/// `max sum_{i<=k} b(i) u(i)` s.t. `sum_{i<=k} a^j(i) u(i) = phi_j`, `u >= 0`.
pub fn finite_support_dual(inst: &SILPInstance, k: u64) -> Result<LPOutcome, SilpError> {
    Ok(lp::solve(&finite_support_dual_problem(inst, k)?))
}

/// The finite-support dual with an extra column `lambda >= 0` weighting the
/// limit functional. Every feasible value is a lower bound on the
/// semi-infinite optimum.
pub fn extended_dual(inst: &SILPInstance, k: u64) -> Result<LPOutcome, SilpError> {
    Ok(lp::solve(&extended_dual_problem(inst, k)?))
}

pub fn limit_augmented_primal(inst: &SILPInstance, k: u64) -> Result<LPOutcome, SilpError> {
    Ok(lp::solve(&limit_augmented_primal_problem(inst, k)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    /// Feasible for every constraint; carries `phi^T x`.
    Certified { objective: Rational },
    /// First violated constraint and its (negative) slack.
    Violated { index: u64, slack: Rational },
}

/// Slack sequence `sum_j a^j x_j - b`.
pub fn slack_sequence(inst: &SILPInstance, x: &[Rational]) -> Result<RationalSequence, SilpError> {
    if x.len() != inst.num_vars() {
        return Err(SilpError::Dimension { expected: inst.num_vars(), got: x.len() });
    }
    let mut coeffs = x.to_vec();
    coeffs.push(-Rational::from_integer(1.into()));
    let mut seqs = inst.a.clone();
    seqs.push(inst.b.clone());
    Ok(seq::linear_combination(&coeffs, &seqs).expect("shapes match"))
}

/// Checks `x` against all infinitely many constraints.
pub fn certify_feasible(inst: &SILPInstance, x: &[Rational]) -> Result<Feasibility, SilpError> {
    let slack = slack_sequence(inst, x)?;
    Ok(match slack.certify_nonneg() {
        SignCertificate::Certified => Feasibility::Certified { objective: inst.objective_value(x) },
        SignCertificate::Violated { index, value } => Feasibility::Violated { index, slack: value },
    })
}

/// A dual element: finitely supported multipliers plus a nonnegative
/// weight on the limit functional.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DualSolution {
    pub support: BTreeMap<u64, Rational>,
    pub limit_coeff: Rational,
}

impl DualSolution {
    pub fn finite(support: BTreeMap<u64, Rational>) -> Self {
        DualSolution { support, limit_coeff: Rational::zero() }
    }

    /// Reads an extended-dual LP point (`u_1..u_k`, then optionally
    /// `lambda`) back into a dual element, dropping zero entries.
    pub fn from_lp_point(point: &[Rational], k: u64) -> Self {
        let support = point
            .iter()
            .take(k as usize)
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i as u64 + 1, v.clone()))
            .collect();
        let limit_coeff = point.get(k as usize).cloned().unwrap_or_else(Rational::zero);
        DualSolution { support, limit_coeff }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DualCheck {
    FeasibleWithValue(Rational),
    /// 1-based index of the first dual equation that fails.
    InfeasibleAt(usize),
}

/// Checks `sum_i a^j(i) u(i) + lambda L_{a^j} = phi_j` for every `j` and
/// returns the dual objective `sum_i b(i) u(i) + lambda L_b`.
pub fn verify_dual(inst: &SILPInstance, d: &DualSolution) -> Result<DualCheck, SilpError> {
    if d.limit_coeff.is_negative() || d.support.iter().any(|(&i, v)| i == 0 || v.is_negative()) {
        return Err(SilpError::InvalidDual);
    }
    let n = inst.num_vars();
    let limits = if d.limit_coeff.is_zero() { vec![Rational::zero(); n + 1] } else { c_limits(inst)? };
    for j in 0..n {
        let lhs: Rational = d.support.iter().map(|(&i, u)| inst.a[j].eval(i) * u).sum::<Rational>()
            + &d.limit_coeff * &limits[j];
        if lhs != inst.phi[j] {
            return Ok(DualCheck::InfeasibleAt(j + 1));
        }
    }
    let value: Rational =
        d.support.iter().map(|(&i, u)| inst.b.eval(i) * u).sum::<Rational>() + &d.limit_coeff * &limits[n];
    Ok(DualCheck::FeasibleWithValue(value))
}

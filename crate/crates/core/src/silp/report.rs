use num_traits::Signed;
use rayon::prelude::*;

use super::{
    certify_feasible, classify_space, extended_dual, finite_support_dual, limit_augmented_primal, truncated_primal,
    Feasibility, SILPInstance, SilpError, SpaceTag,
};
use crate::lp::LPOutcome;
use crate::seq::Rational;

pub const DEFAULT_SCHEDULE: [u64; 10] = [1, 2, 5, 10, 20, 50, 100, 200, 500, 1000];

/// Default gap tolerance is `1 / DEFAULT_EPSILON_DEN`.
pub const DEFAULT_EPSILON_DEN: i64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapClassification {
    ZeroGapFiniteSupport,
    GapClosedByLimitFunctional,
    UnresolvedOrPersistentGap,
}

impl GapClassification {
    pub fn as_str(self) -> &'static str {
        match self {
            GapClassification::ZeroGapFiniteSupport => "ZeroGapFiniteSupport",
            GapClassification::GapClosedByLimitFunctional => "GapClosedByLimitFunctional",
            GapClassification::UnresolvedOrPersistentGap => "UnresolvedOrPersistentGap",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelReport {
    pub k: u64,
    pub primal: LPOutcome,
    pub fdual: LPOutcome,
    /// Present only for instances tagged `C`.
    pub edual: Option<LPOutcome>,
    pub limit_primal: Option<LPOutcome>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateSource {
    User,
    /// Optimizer of the limit-augmented truncation at the largest level.
    LimitAugmentedOptimizer,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateCheck {
    pub x: Vec<Rational>,
    pub source: CandidateSource,
    pub result: Feasibility,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub space: SpaceTag,
    pub epsilon: Rational,
    pub levels: Vec<LevelReport>,
    pub candidates: Vec<CandidateCheck>,
    /// Certified candidates with their exact objective values.
    pub certified_upper_bounds: Vec<(Vec<Rational>, Rational)>,
    pub best_upper_bound: Option<Rational>,
    pub best_fdual: Option<Rational>,
    pub best_edual: Option<Rational>,
    pub classification: GapClassification,
}

fn best(values: impl Iterator<Item = Rational>) -> Option<Rational> {
    values.max()
}

/// Solves every truncation in `schedule`, certifies the candidate points
/// (plus the limit-augmented optimizer at the largest level) and
/// classifies the gap with tolerance `epsilon`.
///
/// Extended-dual values are lower bounds from the family
/// {finite support + lambda * limit}; they are not claimed to be the value
/// of the full algebraic dual over `c`.
pub fn gap_report(
    inst: &SILPInstance,
    schedule: &[u64],
    candidates: &[Vec<Rational>],
    epsilon: &Rational,
) -> Result<BoundsReport, SilpError> {
    if schedule.is_empty() || schedule[0] == 0 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SilpError::Schedule);
    }
    if !epsilon.is_positive() {
        return Err(SilpError::Epsilon);
    }
    for x in candidates {
        if x.len() != inst.num_vars() {
            return Err(SilpError::Dimension { expected: inst.num_vars(), got: x.len() });
        }
    }
    let space = classify_space(inst);
    let with_limits = space.is_c();

    let levels: Vec<LevelReport> = schedule
        .par_iter()
        .map(|&k| -> Result<LevelReport, SilpError> {
            Ok(LevelReport {
                k,
                primal: truncated_primal(inst, k)?,
                fdual: finite_support_dual(inst, k)?,
                edual: if with_limits { Some(extended_dual(inst, k)?) } else { None },
                limit_primal: if with_limits { Some(limit_augmented_primal(inst, k)?) } else { None },
            })
        })
        .collect::<Result<_, _>>()?;

    let mut checks: Vec<CandidateCheck> = candidates
        .iter()
        .map(|x| {
            Ok(CandidateCheck { x: x.clone(), source: CandidateSource::User, result: certify_feasible(inst, x)? })
        })
        .collect::<Result<_, SilpError>>()?;
    if let Some(LPOutcome::Optimal { primal, .. }) = levels.last().and_then(|l| l.limit_primal.as_ref()) {
        checks.push(CandidateCheck {
            x: primal.clone(),
            source: CandidateSource::LimitAugmentedOptimizer,
            result: certify_feasible(inst, primal)?,
        });
    }

    let certified_upper_bounds: Vec<(Vec<Rational>, Rational)> = checks
        .iter()
        .filter_map(|c| match &c.result {
            Feasibility::Certified { objective } => Some((c.x.clone(), objective.clone())),
            Feasibility::Violated { .. } => None,
        })
        .collect();
    let best_upper_bound = certified_upper_bounds.iter().map(|(_, v)| v.clone()).min();
    let best_fdual = best(levels.iter().filter_map(|l| l.fdual.value().cloned()));
    let best_edual = best(levels.iter().filter_map(|l| l.edual.as_ref().and_then(|o| o.value().cloned())));

    let within = |dual: &Option<Rational>| match (dual, &best_upper_bound) {
        (Some(d), Some(ub)) => (ub - d).abs() <= *epsilon,
        _ => false,
    };
    let classification = if within(&best_fdual) {
        GapClassification::ZeroGapFiniteSupport
    } else if within(&best_edual) {
        GapClassification::GapClosedByLimitFunctional
    } else {
        GapClassification::UnresolvedOrPersistentGap
    };

    Ok(BoundsReport {
        space,
        epsilon: epsilon.clone(),
        levels,
        candidates: checks,
        certified_upper_bounds,
        best_upper_bound,
        best_fdual,
        best_edual,
        classification,
    })
}

impl BoundsReport {
    /// Largest finite-support-dual gap to the best certified upper bound, if
    /// both exist.
    pub fn fdual_gap(&self) -> Option<Rational> {
        Some(self.best_upper_bound.as_ref()? - self.best_fdual.as_ref()?)
    }

    pub fn edual_gap(&self) -> Option<Rational> {
        Some(self.best_upper_bound.as_ref()? - self.best_edual.as_ref()?)
    }

    pub fn is_consistent(&self) -> bool {
        // Weak duality: no dual value may exceed a certified primal objective.
        let duals = self
            .levels
            .iter()
            .flat_map(|l| l.fdual.value().into_iter().chain(l.edual.as_ref().and_then(|o| o.value())));
        let ub_ok = match &self.best_upper_bound {
            Some(ub) => duals.clone().all(|d| d <= ub),
            None => true,
        };
        let fd: Vec<&Rational> = self.levels.iter().filter_map(|l| l.fdual.value()).collect();
        let ed: Vec<&Rational> = self.levels.iter().filter_map(|l| l.edual.as_ref().and_then(|o| o.value())).collect();
        ub_ok && fd.windows(2).all(|w| w[0] <= w[1]) && ed.windows(2).all(|w| w[0] <= w[1])
    }
}

//! Executable proof constructions about positive functionals on sequence
//! spaces: a falsifier for claimed positive extensions of the limit
//! functional, a finite-support representation probe, and a generator of
//! sequences that defeat order-unit candidates.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::seq::{dominates, Domination, Poly, Rational, RationalSequence, SeqError, SignCertificate};

/// Number of randomized linearity probes per run.
pub const SPOT_CHECKS: usize = 20;

/// Number of nonnegative probes used to test a recovered representation.
pub const REPRESENTATION_PROBES: usize = 100;

/// Largest `M` the falsifier will materialize as an explicit prefix.
pub const MAX_FALSIFIER_HORIZON: u64 = 1 << 20;

const PROBE_SEED: u64 = 0x5eed_0f_11;

/// Stated with every probe report: a zero residual is evidence about one
/// horizon only.
pub const PROBE_CAVEAT: &str = "a zero residual at horizon M shows only horizon-M consistency, not finite-support representability";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("OracleNotLinear: linearity spot-check {probe} failed")]
    OracleNotLinear { probe: usize },
    #[error("oracle is not declared on all sequences; the falsifier must evaluate a divergent sequence")]
    DomainNotRN,
    #[error("oracle cannot evaluate {0}")]
    Undefined(String),
    #[error("horizon {0} is too large to materialize")]
    HorizonTooLarge(Rational),
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error(transparent)]
    Seq(#[from] SeqError),
}

/// Sequence space on which an oracle claims to be linear and positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// All real sequences.
    RN,
    /// Bounded sequences.
    Linf,
    /// Convergent sequences.
    C,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::RN => "RN",
            Domain::Linf => "LINF",
            Domain::C => "C",
        }
    }

    pub fn contains(self, s: &RationalSequence) -> bool {
        match self {
            Domain::RN => true,
            Domain::Linf => s.is_bounded(),
            Domain::C => s.is_convergent(),
        }
    }
}

/// A functional declared by its supplier to be linear and positive on
/// `domain()`. `evaluate` returns `None` outside the domain.
pub trait FunctionalOracle {
    fn domain(&self) -> Domain;
    fn evaluate(&self, s: &RationalSequence) -> Option<Rational>;
}

/// Oracle wrapping a closure.
pub struct FnOracle<F> {
    domain: Domain,
    f: F,
}

impl<F: Fn(&RationalSequence) -> Option<Rational>> FnOracle<F> {
    pub fn new(domain: Domain, f: F) -> Self {
        FnOracle { domain, f }
    }
}

impl<F: Fn(&RationalSequence) -> Option<Rational>> FunctionalOracle for FnOracle<F> {
    fn domain(&self) -> Domain {
        self.domain
    }

    fn evaluate(&self, s: &RationalSequence) -> Option<Rational> {
        (self.f)(s)
    }
}

/// The built-in oracle families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuiltinOracle {
    /// `s -> sum u(i) s(i)`, a positive functional on all sequences when
    /// every weight is nonnegative.
    FiniteSupport(BTreeMap<u64, Rational>),
    /// `s -> lim s` on convergent sequences.
    Limit,
    /// `s -> sum u(i) s(i) + lambda * lim s` on convergent sequences.
    SupportPlusLimit { support: BTreeMap<u64, Rational>, lambda: Rational },
    /// `s -> lim s` when the limit is finite and `default` otherwise; claims
    /// to be defined on all sequences.
    FakeExtension { default: Rational },
}

fn fmt_support(f: &mut fmt::Formatter<'_>, support: &BTreeMap<u64, Rational>) -> fmt::Result {
    let pairs: Vec<String> = support.iter().map(|(i, u)| format!("{i}:{u}")).collect();
    write!(f, "finite support {{{}}}", pairs.join(", "))
}

impl fmt::Display for BuiltinOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinOracle::FiniteSupport(u) => fmt_support(f, u),
            BuiltinOracle::Limit => f.write_str("limit"),
            BuiltinOracle::SupportPlusLimit { support, lambda } => {
                fmt_support(f, support)?;
                write!(f, " + {lambda} * limit")
            }
            BuiltinOracle::FakeExtension { default } => write!(f, "fake extension with divergence default {default}"),
        }
    }
}

fn support_sum(support: &BTreeMap<u64, Rational>, s: &RationalSequence) -> Rational {
    support.iter().map(|(&i, u)| u * s.eval(i)).sum()
}

impl FunctionalOracle for BuiltinOracle {
    fn domain(&self) -> Domain {
        match self {
            BuiltinOracle::FiniteSupport(_) | BuiltinOracle::FakeExtension { .. } => Domain::RN,
            BuiltinOracle::Limit | BuiltinOracle::SupportPlusLimit { .. } => Domain::C,
        }
    }

    fn evaluate(&self, s: &RationalSequence) -> Option<Rational> {
        match self {
            BuiltinOracle::FiniteSupport(u) => Some(support_sum(u, s)),
            BuiltinOracle::Limit => s.limit().finite().cloned(),
            BuiltinOracle::SupportPlusLimit { support, lambda } => {
                Some(support_sum(support, s) + lambda * s.limit().finite()?)
            }
            BuiltinOracle::FakeExtension { default } => Some(s.limit().finite().cloned().unwrap_or_else(|| default.clone())),
        }
    }
}

fn evaluate(oracle: &dyn FunctionalOracle, s: &RationalSequence) -> Result<Rational, WitnessError> {
    oracle.evaluate(s).ok_or_else(|| WitnessError::Undefined(s.to_string()))
}

fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    let den = rng.gen_range(1..=4);
    Rational::new(rng.gen_range(lo * den..=hi * den).into(), den.into())
}

/// Random convergent sequence `prefix, then c + r / (i + j)`; with
/// `nonneg` set every value is nonnegative.
fn random_convergent(rng: &mut ChaCha8Rng, nonneg: bool) -> RationalSequence {
    let lo = if nonneg { 0 } else { -10 };
    let prefix = (0..rng.gen_range(0..=5)).map(|_| random_rational(rng, lo, 10)).collect();
    let c = random_rational(rng, lo, 10);
    let r = random_rational(rng, lo, 10);
    let shift = Rational::from_integer(rng.gen_range(0..=3).into());
    let den = Poly::from_coeffs(vec![shift, Rational::one()]);
    let num = &den.scale(&c) + &Poly::constant(r);
    RationalSequence::new(prefix, num, den).expect("denominator has no positive root")
}

/// Checks `oracle(a s + b t) = a oracle(s) + b oracle(t)` on
/// [`SPOT_CHECKS`] seeded random convergent probes.
pub fn spot_check_linearity(oracle: &dyn FunctionalOracle) -> Result<(), WitnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    for probe in 0..SPOT_CHECKS {
        let (a, b) = (random_rational(&mut rng, -10, 10), random_rational(&mut rng, -10, 10));
        let (s, t) = (random_convergent(&mut rng, false), random_convergent(&mut rng, false));
        let combined = &s.scale(&a) + &t.scale(&b);
        let lhs = evaluate(oracle, &combined)?;
        let rhs = a * evaluate(oracle, &s)? + b * evaluate(oracle, &t)?;
        if lhs != rhs {
            return Err(WitnessError::OracleNotLinear { probe });
        }
    }
    Ok(())
}

/// Intermediate values of a falsifier run, for the normalized functional
/// `oracle / oracle(1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FalsifierTrace {
    /// `oracle(1)` before normalization.
    pub psi_one: Rational,
    /// Normalized `oracle(v)` with `v(i) = i`.
    pub alpha: Option<Rational>,
    pub big_m: Option<u64>,
    /// Normalized `oracle(m)`.
    pub psi_m: Option<Rational>,
    /// Normalized `oracle(y)` asked directly.
    pub direct_value: Option<Rational>,
    /// Whether the direct value differs from the linearity-implied one.
    pub direct_mismatch: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// `y = v - m` from the horizon construction.
    Construction,
    /// `y = 1` with `oracle(1) < 0`.
    NegativeOnOne,
    /// `y = v` with `oracle(v) < 0`.
    NegativeOnIndex,
}

/// A nonnegative sequence on which the oracle, extended linearly, is
/// negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionWitness {
    pub kind: WitnessKind,
    pub y: RationalSequence,
    pub claimed_value: Rational,
    pub trace: FalsifierTrace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FalsifierOutcome {
    Witness(ExtensionWitness),
    NotFalsified { reason: String, trace: FalsifierTrace },
}

/// Tries to show that `oracle` is not a positive linear functional on all
/// sequences.
///
/// With `alpha = oracle(v)` for `v(i) = i`, `M = ceil(alpha) + 1` and `m`
/// equal to `M` from index `M` on (zero before), the sequence `y = v - m`
/// is nonnegative while linearity forces `oracle(y) = alpha - oracle(m)`.
pub fn extension_falsifier(oracle: &dyn FunctionalOracle) -> Result<FalsifierOutcome, WitnessError> {
    if oracle.domain() != Domain::RN {
        return Err(WitnessError::DomainNotRN);
    }
    spot_check_linearity(oracle)?;
    let one = RationalSequence::constant(Rational::one());
    let psi_one = evaluate(oracle, &one)?;
    let mut trace =
        FalsifierTrace { psi_one: psi_one.clone(), alpha: None, big_m: None, psi_m: None, direct_value: None, direct_mismatch: false };
    if psi_one.is_negative() {
        return Ok(FalsifierOutcome::Witness(ExtensionWitness {
            kind: WitnessKind::NegativeOnOne,
            y: one,
            claimed_value: psi_one,
            trace,
        }));
    }
    if psi_one.is_zero() {
        let reason = "oracle(1) = 0, so the functional cannot be normalized".to_string();
        return Ok(FalsifierOutcome::NotFalsified { reason, trace });
    }

    let v = RationalSequence::index();
    let alpha = evaluate(oracle, &v)? / &psi_one;
    trace.alpha = Some(alpha.clone());
    if alpha.is_negative() {
        return Ok(FalsifierOutcome::Witness(ExtensionWitness {
            kind: WitnessKind::NegativeOnIndex,
            y: v,
            claimed_value: alpha,
            trace,
        }));
    }

    let m_value = alpha.ceil() + Rational::one();
    let big_m = m_value
        .to_integer()
        .to_u64()
        .filter(|&m| m <= MAX_FALSIFIER_HORIZON)
        .ok_or_else(|| WitnessError::HorizonTooLarge(m_value.clone()))?;
    let m = RationalSequence::step(big_m, m_value);
    let psi_m = evaluate(oracle, &m)? / &psi_one;
    let y = &v - &m;
    let claimed_value = &alpha - &psi_m;
    trace.big_m = Some(big_m);
    trace.psi_m = Some(psi_m);
    if let Some(direct) = oracle.evaluate(&y) {
        let direct = direct / &psi_one;
        trace.direct_mismatch = direct != claimed_value;
        trace.direct_value = Some(direct);
    }

    debug_assert!(y.certify_nonneg().is_certified());
    if claimed_value.is_negative() {
        Ok(FalsifierOutcome::Witness(ExtensionWitness { kind: WitnessKind::Construction, y, claimed_value, trace }))
    } else {
        let reason = format!("oracle(v - m) = {claimed_value} is nonnegative");
        Ok(FalsifierOutcome::NotFalsified { reason, trace })
    }
}

/// Finite-horizon view of a functional: its weights on unit sequences and
/// its mass on the tail past the horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeReport {
    pub horizon: u64,
    /// `weights[i - 1] = oracle(e^i)` for `i = 1..=horizon`.
    pub weights: Vec<Rational>,
    /// `oracle` on the indicator of indices `> horizon`.
    pub residual: Rational,
    /// Whether `sum weights(i) s(i) = oracle(s)` on every nonnegative
    /// probe `s`.
    pub agrees_on_probes: bool,
    pub caveat: &'static str,
}

impl ProbeReport {
    /// Nonzero weights keyed by index.
    pub fn support(&self) -> BTreeMap<u64, Rational> {
        (1..).zip(&self.weights).filter(|(_, u)| !u.is_zero()).map(|(i, u)| (i, u.clone())).collect()
    }
}

pub fn representation_probe(oracle: &dyn FunctionalOracle, horizon: u64) -> Result<ProbeReport, WitnessError> {
    if horizon == 0 {
        return Err(WitnessError::ZeroHorizon);
    }
    spot_check_linearity(oracle)?;
    let weights: Vec<Rational> =
        (1..=horizon).map(|i| evaluate(oracle, &RationalSequence::unit(i))).collect::<Result<_, _>>()?;
    let residual = evaluate(oracle, &RationalSequence::step(horizon + 1, Rational::one()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED.rotate_left(17));
    let mut agrees_on_probes = true;
    for _ in 0..REPRESENTATION_PROBES {
        let s = random_convergent(&mut rng, true);
        let represented: Rational = (1..).zip(&weights).map(|(i, u)| u * s.eval(i)).sum();
        if evaluate(oracle, &s)? != represented {
            agrees_on_probes = false;
            break;
        }
    }
    Ok(ProbeReport { horizon, weights, residual, agrees_on_probes, caveat: PROBE_CAVEAT })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderUnitVerdict {
    NotOrderUnit,
    /// Never produced for a correct domination test; signals an internal
    /// error.
    CandidateSurvives(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderUnitWitness {
    pub x: RationalSequence,
    pub verdict: OrderUnitVerdict,
}

/// Builds a sequence `x` no multiple of `e` dominates: `x(i) = M i` with
/// `M >= max(sup e, 2)` for bounded `e`, and `x = e^2` otherwise.
pub fn order_unit_witness(e: &RationalSequence) -> Result<OrderUnitWitness, WitnessError> {
    if let SignCertificate::Violated { index, value } = e.certify_positive() {
        return Err(SeqError::NotStrictlyPositive { index, value }.into());
    }
    let x = match e.supremum() {
        Some(sup) => {
            let big_m = sup.ceil().max(Rational::from_integer(2.into()));
            RationalSequence::polynomial(Poly::index().scale(&big_m))
        }
        None => e * e,
    };
    let verdict = match dominates(e, &x)? {
        Domination::NoLambda => OrderUnitVerdict::NotOrderUnit,
        Domination::ExistsLambda(lambda) => OrderUnitVerdict::CandidateSurvives(lambda),
    };
    Ok(OrderUnitWitness { x, verdict })
}

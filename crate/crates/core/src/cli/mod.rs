//! Command-line front end: instance files in, exact reports out.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 parse or usage error, 3 failed
//! precondition (for example `edual` on an instance whose sequences do not
//! all converge).

pub mod instance;
pub mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use self::instance::{parse_instance, parse_point, NamedInstance, ParseError};
use self::report::{fmt_rational, to_json, to_text, AnalyzeView, FeasibilityView, LpCommandView, OutcomeView, SequenceView};
use crate::seq::{parse_rational, Rational, RationalSequence};
use crate::silp::{self, DualCheck, DualSolution, DEFAULT_EPSILON_DEN, DEFAULT_SCHEDULE};
use crate::witness::{self, BuiltinOracle, FalsifierOutcome, OrderUnitVerdict, WitnessKind};

#[derive(Debug, Parser)]
#[command(name = "silp", version, about = "Exact analysis of semi-infinite linear programs with countably many constraints")]
pub struct Cli {
    /// Output format for reports.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct LevelArgs {
    /// Instance file (JSON).
    pub instance: PathBuf,
    /// Truncation level.
    #[arg(long)]
    pub k: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    /// Finite support weights, `--support`.
    Finite,
    /// The limit functional on convergent sequences.
    Limit,
    /// Finite support weights plus `--lambda` times the limit.
    SupportLimit,
    /// Limit where it exists, `--default` elsewhere.
    Fake,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, value_enum)]
    pub oracle: OracleKind,
    /// Weights as `index:value` pairs, e.g. `1:1,3:1/2`.
    #[arg(long)]
    pub support: Option<String>,
    /// Weight on the limit for `support-limit`.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Value the fake extension assigns to divergent sequences.
    #[arg(long, allow_hyphen_values = true)]
    pub default: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve every truncation level, certify candidates and classify the gap.
    Analyze {
        /// Instance file (JSON).
        instance: PathBuf,
        /// Comma-separated, strictly increasing truncation levels.
        #[arg(long, env = "SILP_SCHEDULE")]
        schedule: Option<String>,
        /// Gap tolerance as a rational, default 1/100.
        #[arg(long)]
        epsilon: Option<String>,
        /// Write per-level bound curves to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Append approximate decimal columns to the CSV.
        #[arg(long)]
        decimals: Option<usize>,
        /// Extra candidate point, comma-separated; repeatable.
        #[arg(long = "candidate", allow_hyphen_values = true)]
        candidates: Vec<String>,
    },
    /// Truncated primal at level k.
    Primal(LevelArgs),
    /// Finite-support dual at level k.
    Fdual(LevelArgs),
    /// Extended dual (finite support plus limit functional) at level k.
    Edual(LevelArgs),
    /// Check a point against all constraints.
    Certify {
        /// Instance file (JSON).
        instance: PathBuf,
        /// Point, comma-separated, e.g. `1/10,10`.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Check a dual element and report its value.
    VerifyDual {
        /// Instance file (JSON).
        instance: PathBuf,
        /// Multipliers as `index:value` pairs.
        #[arg(long, default_value = "")]
        support: String,
        /// Multiplier on the limit constraint.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        lambda: String,
    },
    /// Try to refute a claimed positive extension of the limit functional.
    WitnessExtension(OracleArgs),
    /// Recover finite-support weights of a functional up to a horizon.
    WitnessProbe {
        #[command(flatten)]
        oracle: OracleArgs,
        /// Number of leading indices to probe.
        #[arg(long)]
        horizon: u64,
    },
    /// Build a sequence that no multiple of `e` dominates.
    WitnessOrderUnit {
        /// Tail expression of the candidate order unit.
        #[arg(long = "e", allow_hyphen_values = true)]
        e: String,
        /// Explicit leading values, comma-separated.
        #[arg(long)]
        prefix: Option<String>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(String),
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Io(m) | CliError::Parse(m) | CliError::Precondition(m) => m,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<silp::SilpError> for CliError {
    fn from(e: silp::SilpError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<witness::WitnessError> for CliError {
    fn from(e: witness::WitnessError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

fn load(path: &Path) -> Result<NamedInstance, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn rational_flag(flag: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text.trim()).ok_or_else(|| CliError::Parse(format!("--{flag}: invalid rational literal {text:?}")))
}

fn parse_schedule(text: &str) -> Result<Vec<u64>, CliError> {
    let levels = text
        .split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|_| CliError::Parse(format!("--schedule: invalid level {s:?}"))))
        .collect::<Result<Vec<u64>, _>>()?;
    if levels[0] == 0 || levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Parse("--schedule: levels must be positive and strictly increasing".into()));
    }
    Ok(levels)
}

/// `index:value` pairs, e.g. `1:1,3:1/2`; the empty string is no support.
pub fn parse_support(text: &str) -> Result<BTreeMap<u64, Rational>, CliError> {
    let mut out = BTreeMap::new();
    for pair in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || CliError::Parse(format!("--support: expected index:value, got {pair:?}"));
        let (i, v) = pair.split_once(':').ok_or_else(bad)?;
        let i: u64 = i.trim().parse().map_err(|_| bad())?;
        let v = parse_rational(v.trim()).ok_or_else(bad)?;
        if i == 0 || out.insert(i, v).is_some() {
            return Err(bad());
        }
    }
    Ok(out)
}

fn build_oracle(a: &OracleArgs) -> Result<BuiltinOracle, CliError> {
    let need = |flag: &str, v: &Option<String>| {
        v.clone().ok_or_else(|| CliError::Parse(format!("--oracle {:?} needs --{flag}", a.oracle)))
    };
    Ok(match a.oracle {
        OracleKind::Finite => BuiltinOracle::FiniteSupport(parse_support(&need("support", &a.support)?)?),
        OracleKind::Limit => BuiltinOracle::Limit,
        OracleKind::SupportLimit => BuiltinOracle::SupportPlusLimit {
            support: parse_support(&need("support", &a.support)?)?,
            lambda: rational_flag("lambda", &need("lambda", &a.lambda)?)?,
        },
        OracleKind::Fake => BuiltinOracle::FakeExtension { default: rational_flag("default", &need("default", &a.default)?)? },
    })
}

fn emit<T: Serialize>(format: Format, view: &T, out: &mut dyn Write) -> Result<(), CliError> {
    let text = match format {
        Format::Json => to_json(view),
        Format::Text => to_text(view),
    };
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
}

#[derive(Serialize)]
struct CertifyView {
    name: String,
    x: Vec<String>,
    #[serde(flatten)]
    feasibility: FeasibilityView,
}

#[derive(Serialize)]
struct VerifyDualView {
    name: String,
    support: BTreeMap<String, String>,
    lambda: String,
    result: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failing_equation: Option<usize>,
}

#[derive(Serialize)]
struct ExtensionView {
    oracle: String,
    result: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    kind: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    y: Option<SequenceView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    y_nonnegative: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    claimed_value: Option<String>,
    psi_one: String,
    alpha: Option<String>,
    big_m: Option<u64>,
    psi_m: Option<String>,
    direct_value: Option<String>,
    direct_mismatch: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

#[derive(Serialize)]
struct ProbeView {
    oracle: String,
    horizon: u64,
    weights: Vec<String>,
    residual: String,
    agrees_on_probes: bool,
    caveat: &'static str,
}

#[derive(Serialize)]
struct OrderUnitView {
    e: SequenceView,
    x: SequenceView,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<String>,
}

fn lp_command(
    format: Format,
    args: &LevelArgs,
    problem: &'static str,
    solve: fn(&silp::SILPInstance, u64) -> Result<crate::lp::LPOutcome, silp::SilpError>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let named = load(&args.instance)?;
    let outcome = solve(&named.instance, args.k)?;
    let view = LpCommandView { name: named.name, problem, k: args.k, outcome: OutcomeView::new(&outcome) };
    emit(format, &view, out)
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let format = cli.format;
    match cli.command {
        Command::Analyze { instance, schedule, epsilon, csv, decimals, candidates } => {
            let named = load(&instance)?;
            let schedule = match schedule {
                Some(s) => parse_schedule(&s)?,
                None => DEFAULT_SCHEDULE.to_vec(),
            };
            let epsilon = match epsilon {
                Some(e) => rational_flag("epsilon", &e)?,
                None => Rational::new(1.into(), DEFAULT_EPSILON_DEN.into()),
            };
            let mut points = named.candidates.clone();
            for c in &candidates {
                points.push(parse_point("--candidate", c)?);
            }
            let report = silp::gap_report(&named.instance, &schedule, &points, &epsilon)?;
            if let Some(path) = csv {
                let file = fs::File::create(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                report::write_csv(&report.levels, decimals, file)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            }
            emit(format, &AnalyzeView::new(&named.name, &report), out)
        }
        Command::Primal(args) => lp_command(format, &args, "truncated primal", silp::truncated_primal, out),
        Command::Fdual(args) => lp_command(format, &args, "finite-support dual", silp::finite_support_dual, out),
        Command::Edual(args) => lp_command(format, &args, "extended dual", silp::extended_dual, out),
        Command::Certify { instance, x } => {
            let named = load(&instance)?;
            let point = parse_point("--x", &x)?;
            let feasibility = FeasibilityView::new(&silp::certify_feasible(&named.instance, &point)?);
            match format {
                Format::Text => writeln!(out, "{}", feasibility.line()).map_err(|e| CliError::Io(e.to_string())),
                Format::Json => {
                    let view = CertifyView { name: named.name, x: point.iter().map(fmt_rational).collect(), feasibility };
                    emit(format, &view, out)
                }
            }
        }
        Command::VerifyDual { instance, support, lambda } => {
            let named = load(&instance)?;
            let dual = DualSolution { support: parse_support(&support)?, limit_coeff: rational_flag("lambda", &lambda)? };
            let check = silp::verify_dual(&named.instance, &dual)?;
            let (result, value, failing_equation) = match check {
                DualCheck::FeasibleWithValue(v) => ("FEASIBLE", Some(fmt_rational(&v)), None),
                DualCheck::InfeasibleAt(j) => ("INFEASIBLE", None, Some(j)),
            };
            let view = VerifyDualView {
                name: named.name,
                support: dual.support.iter().map(|(i, v)| (i.to_string(), fmt_rational(v))).collect(),
                lambda: fmt_rational(&dual.limit_coeff),
                result,
                value,
                failing_equation,
            };
            emit(format, &view, out)
        }
        Command::WitnessExtension(args) => {
            let oracle = build_oracle(&args)?;
            let outcome = witness::extension_falsifier(&oracle)?;
            let (trace, witness, reason) = match outcome {
                FalsifierOutcome::Witness(w) => (w.trace.clone(), Some(w), None),
                FalsifierOutcome::NotFalsified { reason, trace } => (trace, None, Some(reason)),
            };
            let opt = |q: &Option<Rational>| q.as_ref().map(fmt_rational);
            let view = ExtensionView {
                oracle: oracle.to_string(),
                result: if witness.is_some() { "WITNESS" } else { "NOT_FALSIFIED" },
                kind: witness.as_ref().map(|w| match w.kind {
                    WitnessKind::Construction => "construction",
                    WitnessKind::NegativeOnOne => "negative on the constant one",
                    WitnessKind::NegativeOnIndex => "negative on the index sequence",
                }),
                y: witness.as_ref().map(|w| SequenceView::new(&w.y)),
                y_nonnegative: witness
                    .as_ref()
                    .map(|w| if w.y.certify_nonneg().is_certified() { "CERTIFIED" } else { "VIOLATED" }),
                claimed_value: witness.as_ref().map(|w| fmt_rational(&w.claimed_value)),
                psi_one: fmt_rational(&trace.psi_one),
                alpha: opt(&trace.alpha),
                big_m: trace.big_m,
                psi_m: opt(&trace.psi_m),
                direct_value: opt(&trace.direct_value),
                direct_mismatch: trace.direct_mismatch,
                reason,
            };
            emit(format, &view, out)
        }
        Command::WitnessProbe { oracle, horizon } => {
            let o = build_oracle(&oracle)?;
            let r = witness::representation_probe(&o, horizon)?;
            let view = ProbeView {
                oracle: o.to_string(),
                horizon,
                weights: r.weights.iter().map(fmt_rational).collect(),
                residual: fmt_rational(&r.residual),
                agrees_on_probes: r.agrees_on_probes,
                caveat: r.caveat,
            };
            emit(format, &view, out)
        }
        Command::WitnessOrderUnit { e, prefix } => {
            let prefix = match prefix {
                Some(p) => parse_point("--prefix", &p)?,
                None => Vec::new(),
            };
            let e = RationalSequence::parse(prefix, &e).map_err(|err| CliError::Parse(format!("--e: {err}")))?;
            let w = witness::order_unit_witness(&e)?;
            let (verdict, lambda) = match &w.verdict {
                OrderUnitVerdict::NotOrderUnit => ("NotOrderUnit", None),
                OrderUnitVerdict::CandidateSurvives(l) => ("CandidateSurvives", Some(fmt_rational(l))),
            };
            let view = OrderUnitView { e: SequenceView::new(&e), x: SequenceView::new(&w.x), verdict, lambda };
            emit(format, &view, out)
        }
    }
}

/// Parses `args` (program name first) and runs the command, writing
/// reports to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

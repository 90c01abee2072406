//! Acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{brute_force, drop_last_column, random_instance, small_rational, workspace_file};
use silp::cli::instance::parse_instance;
use silp::lp::{self, verify_certificate, LPOutcome, Status};
use silp::seq::{dominates, integer, rational, Domination, Rational, RationalSequence};
use silp::silp::{
    certify_feasible, classify_space, extended_dual, extended_dual_problem, finite_support_dual,
    finite_support_dual_problem, gap_report, limit_augmented_primal, limit_augmented_primal_problem, truncated_primal,
    truncated_primal_problem, Feasibility, GapClassification, SILPInstance,
};
use silp::witness::{
    extension_falsifier, order_unit_witness, representation_probe, BuiltinOracle, FalsifierOutcome, OrderUnitVerdict,
};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn flagship() -> Check {
    let start = Instant::now();
    let text = fs::read_to_string(workspace_file("instances/example31.json")).map_err(|e| e.to_string())?;
    let named = parse_instance(&text).map_err(|e| e.to_string())?;
    let inst = &named.instance;
    for k in [1, 10, 100, 1000] {
        let p = truncated_primal(inst, k).map_err(|e| e.to_string())?;
        ensure(p.status() == Status::Unbounded, || format!("primal at k={k} is {}", p.status()))?;
        let f = finite_support_dual(inst, k).map_err(|e| e.to_string())?;
        ensure(f.status() == Status::Infeasible, || format!("fdual at k={k} is {}", f.status()))?;
        let e = extended_dual(inst, k).map_err(|e| e.to_string())?;
        ensure(e.value() == Some(&integer(0)), || format!("edual at k={k} is {:?}", e.value()))?;
        let l = limit_augmented_primal(inst, k).map_err(|e| e.to_string())?;
        ensure(l.value() == Some(&integer(0)), || format!("limit-augmented primal at k={k} is {:?}", l.value()))?;
    }
    let expected = [
        (vec![integer(1), integer(1)], integer(1)),
        (vec![rational(1, 10), integer(10)], rational(1, 10)),
        (vec![rational(1, 100), integer(100)], rational(1, 100)),
    ];
    for (x, obj) in &expected {
        let got = certify_feasible(inst, x).map_err(|e| e.to_string())?;
        ensure(got == Feasibility::Certified { objective: obj.clone() }, || format!("certify {x:?} gave {got:?}"))?;
    }
    let r = gap_report(inst, &[1, 10, 100, 1000], &named.candidates, &rational(1, 50)).map_err(|e| e.to_string())?;
    ensure(r.classification == GapClassification::GapClosedByLimitFunctional, || {
        format!("classification {}", r.classification.as_str())
    })?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("all levels and certificates exact, {elapsed:.2?}"))
}

fn agree(primal: &LPOutcome, dual: &LPOutcome) -> bool {
    use Status::*;
    match (primal.status(), dual.status()) {
        (Optimal, Optimal) => primal.value() == dual.value(),
        (Unbounded, Infeasible) | (Infeasible, Unbounded) | (Infeasible, Infeasible) => true,
        _ => false,
    }
}

fn strong_duality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut pairs = 0;
    for case in 0..200 {
        let convergent = case % 2 == 0;
        let inst = random_instance(&mut rng, convergent);
        let k = rng.gen_range(1..=20);
        let problems = [
            (truncated_primal_problem(&inst, k), finite_support_dual_problem(&inst, k)),
            (limit_augmented_primal_problem(&inst, k), extended_dual_problem(&inst, k)),
        ];
        for (p, d) in problems {
            let (Ok(p), Ok(d)) = (p, d) else { continue };
            let (po, dof) = (lp::solve(&p), lp::solve(&d));
            ensure(verify_certificate(&p, &po) && verify_certificate(&d, &dof), || {
                format!("case {case}: certificate check failed")
            })?;
            ensure(agree(&po, &dof), || format!("case {case} k={k}: primal {} vs dual {}", po.status(), dof.status()))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} primal/dual pairs, zero violations"))
}

fn oracle_equivalence() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for case in 0..150 {
        let inst = random_instance(&mut rng, case % 3 != 0);
        for k in 1..=5 {
            let problems = [
                truncated_primal_problem(&inst, k),
                finite_support_dual_problem(&inst, k),
                extended_dual_problem(&inst, k),
                limit_augmented_primal_problem(&inst, k),
            ];
            for p in problems.into_iter().flatten() {
                let o = lp::solve(&p);
                let b = brute_force(&p);
                ensure(b.matches(&o), || format!("case {case} k={k}: solver {o:?} vs enumeration {b:?}"))?;
                checked += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{checked} LPs match enumeration, {elapsed:.2?}"))
}

/// Value of a maximization in the extended reals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Extended {
    MinusInfinity,
    Finite(Rational),
    PlusInfinity,
}

impl Extended {
    fn of_max(o: &LPOutcome) -> Self {
        match o {
            LPOutcome::Optimal { value, .. } => Extended::Finite(value.clone()),
            LPOutcome::Infeasible { .. } => Extended::MinusInfinity,
            LPOutcome::Unbounded { .. } => Extended::PlusInfinity,
        }
    }
}

fn monotone_and_weak() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut instances: Vec<SILPInstance> = Vec::new();
    for name in ["example31", "creeping", "nonconvergent"] {
        let text = fs::read_to_string(workspace_file(&format!("instances/{name}.json"))).map_err(|e| e.to_string())?;
        instances.push(parse_instance(&text).map_err(|e| e.to_string())?.instance);
    }
    for case in 0..60 {
        instances.push(random_instance(&mut rng, case % 2 == 0));
    }
    let mut certified = 0;
    for (idx, inst) in instances.iter().enumerate() {
        let candidates: Vec<Vec<Rational>> =
            (0..6).map(|_| (0..inst.num_vars()).map(|_| small_rational(&mut rng, 8)).collect()).collect();
        let r = gap_report(inst, &[1, 2, 5, 10, 20], &candidates, &rational(1, 100)).map_err(|e| e.to_string())?;
        certified += r.certified_upper_bounds.len();
        ensure(r.is_consistent(), || format!("instance {idx}: report is not consistent"))?;
        let fd: Vec<Extended> = r.levels.iter().map(|l| Extended::of_max(&l.fdual)).collect();
        ensure(fd.windows(2).all(|w| w[0] <= w[1]), || format!("instance {idx}: fdual decreases"))?;
        if r.space.is_c() {
            let ed: Vec<Extended> = r.levels.iter().map(|l| Extended::of_max(l.edual.as_ref().unwrap())).collect();
            ensure(ed.windows(2).all(|w| w[0] <= w[1]), || format!("instance {idx}: edual decreases"))?;
            ensure(fd.iter().zip(&ed).all(|(f, e)| e >= f), || format!("instance {idx}: edual below fdual"))?;
        }
        for (_, ub) in &r.certified_upper_bounds {
            let ub = Extended::Finite(ub.clone());
            let duals = r.levels.iter().flat_map(|l| [Some(&l.fdual), l.edual.as_ref()]).flatten();
            ensure(duals.map(Extended::of_max).all(|d| d <= ub), || format!("instance {idx}: a dual value exceeds {ub:?}"))?;
        }
    }
    Ok(format!("{} instances, {certified} certified primal objectives", instances.len()))
}

fn lambda_free_shadow() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut compared = 0;
    while compared < 150 {
        let inst = random_instance(&mut rng, true);
        if !classify_space(&inst).is_c() {
            continue;
        }
        for k in [1, 5, 20] {
            let without = lp::solve(&drop_last_column(&extended_dual_problem(&inst, k).map_err(|e| e.to_string())?));
            let fdual = finite_support_dual(&inst, k).map_err(|e| e.to_string())?;
            ensure(without.status() == fdual.status() && without.value() == fdual.value(), || {
                format!("k={k}: {} vs {}", without.status(), fdual.status())
            })?;
            compared += 1;
        }
    }
    Ok(format!("{} instances x 3 levels identical", compared / 3))
}

fn random_support(rng: &mut ChaCha8Rng) -> BTreeMap<u64, Rational> {
    let mut u = BTreeMap::new();
    while u.is_empty() {
        for i in 1..=8 {
            if rng.gen_bool(0.4) {
                u.insert(i, Rational::new(rng.gen_range(1..=20).into(), rng.gen_range(1..=4).into()));
            }
        }
    }
    u
}

fn falsifier() -> Check {
    for (d, big_m) in [(integer(0), 1), (integer(7), 8), (rational(100, 3), 35)] {
        let outcome = extension_falsifier(&BuiltinOracle::FakeExtension { default: d.clone() }).map_err(|e| e.to_string())?;
        let FalsifierOutcome::Witness(w) = outcome else { return Err(format!("default {d}: not falsified")) };
        ensure(w.y.certify_nonneg().is_certified() && w.claimed_value.is_negative(), || format!("default {d}: bad witness"))?;
        ensure(w.trace.big_m == Some(big_m), || format!("default {d}: M = {:?}", w.trace.big_m))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..20 {
        let o = BuiltinOracle::FiniteSupport(random_support(&mut rng));
        let outcome = extension_falsifier(&o).map_err(|e| e.to_string())?;
        ensure(matches!(outcome, FalsifierOutcome::NotFalsified { .. }), || format!("genuine oracle {case} falsified"))?;
    }
    Ok("3 fake extensions refuted, 20 genuine oracles survive".to_string())
}

fn probe() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..20 {
        let u = random_support(&mut rng);
        let r = representation_probe(&BuiltinOracle::FiniteSupport(u.clone()), 10).map_err(|e| e.to_string())?;
        ensure(r.support() == u && r.residual.is_zero() && r.agrees_on_probes, || format!("finite case {case}"))?;
    }
    for case in 0..20 {
        let u = random_support(&mut rng);
        let lambda = Rational::new(rng.gen_range(1..=30).into(), rng.gen_range(1..=5).into());
        let o = BuiltinOracle::SupportPlusLimit { support: u.clone(), lambda: lambda.clone() };
        let r = representation_probe(&o, 10).map_err(|e| e.to_string())?;
        ensure(r.support() == u && r.residual == lambda, || format!("limit case {case}: residual {}", r.residual))?;
    }
    Ok("20 finite-support recoveries, 20 exact limit residuals".to_string())
}

fn order_unit() -> Check {
    for e in ["1", "i", "(i+1)/i", "i^2", "5 + 1/i"] {
        let seq = RationalSequence::parse(Vec::new(), e).map_err(|err| err.to_string())?;
        let w = order_unit_witness(&seq).map_err(|err| err.to_string())?;
        ensure(w.verdict == OrderUnitVerdict::NotOrderUnit, || format!("e = {e}: {:?}", w.verdict))?;
        let d = dominates(&seq, &w.x).map_err(|err| err.to_string())?;
        ensure(d == Domination::NoLambda, || format!("e = {e}: dominates gave {d:?}"))?;
    }
    Ok("5 candidates defeated".to_string())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("flagship example", flagship),
        ("finite LP strong duality", strong_duality),
        ("brute-force oracle equivalence", oracle_equivalence),
        ("monotonicity and weak duality", monotone_and_weak),
        ("extended dual without lambda equals finite-support dual", lambda_free_shadow),
        ("extension falsifier", falsifier),
        ("representation probe", probe),
        ("order unit witness", order_unit),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail})", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({why})", n + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

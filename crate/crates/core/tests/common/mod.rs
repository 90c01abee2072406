//! Shared test support: a brute-force LP oracle and random instance
//! generators.
#![allow(dead_code)]

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use silp::lp::{LPOutcome, LPProblem, Relation, Sense, VarBound};
use silp::seq::{Poly, Rational, RationalSequence};
use silp::silp::SILPInstance;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Brute {
    Optimal(Rational),
    Infeasible,
    Unbounded,
}

impl Brute {
    pub fn matches(&self, o: &LPOutcome) -> bool {
        match (self, o) {
            (Brute::Optimal(v), LPOutcome::Optimal { value, .. }) => v == value,
            (Brute::Infeasible, LPOutcome::Infeasible { .. }) => true,
            (Brute::Unbounded, LPOutcome::Unbounded { .. }) => true,
            _ => false,
        }
    }
}

/// Some solution of `rows * x = rhs` (free parameters set to zero), or
/// `None` when the system is inconsistent.
pub fn solve_system(n: usize, rows: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.iter().zip(rhs).map(|(r, b)| r.iter().cloned().chain([b.clone()]).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = Rational::one() / &m[row][col];
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..=n {
                    let d = &f * &m[row][c];
                    m[r][c] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &col) in pivots.iter().enumerate() {
        x[col] = m[r][n].clone();
    }
    Some(x)
}

fn subsets(len: usize, max: usize, f: &mut impl FnMut(&[usize])) {
    fn go(start: usize, len: usize, max: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        f(cur);
        if cur.len() == max {
            return;
        }
        for i in start..len {
            cur.push(i);
            go(i + 1, len, max, cur, f);
            cur.pop();
        }
    }
    go(0, len, max, &mut Vec::new(), f);
}

/// One point from every minimal face of `{x : eq x = eq_rhs, ge x >= ge_rhs}`.
/// Empty exactly when the polyhedron is empty.
pub fn minimal_face_points(
    n: usize,
    eq: &[(Vec<Rational>, Rational)],
    ge: &[(Vec<Rational>, Rational)],
) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    subsets(ge.len(), n, &mut |s| {
        let rows: Vec<Vec<Rational>> = eq.iter().map(|r| r.0.clone()).chain(s.iter().map(|&i| ge[i].0.clone())).collect();
        let rhs: Vec<Rational> = eq.iter().map(|r| r.1.clone()).chain(s.iter().map(|&i| ge[i].1.clone())).collect();
        if let Some(x) = solve_system(n, &rows, &rhs) {
            let dot = |a: &[Rational]| a.iter().zip(&x).map(|(p, q)| p * q).sum::<Rational>();
            if ge.iter().all(|(a, b)| dot(a) >= *b) {
                out.push(x);
            }
        }
    });
    out
}

/// Exhaustive solve: primal minimal faces for the value, dual nonemptiness
/// for boundedness.
pub fn brute_force(p: &LPProblem) -> Brute {
    let n = p.num_vars();
    let cost: Vec<Rational> = match p.sense {
        Sense::Min => p.objective.clone(),
        Sense::Max => p.objective.iter().map(|c| -c).collect(),
    };
    let mut eq = Vec::new();
    let mut ge = Vec::new();
    for r in &p.rows {
        match r.relation {
            Relation::Eq => eq.push((r.coeffs.clone(), r.rhs.clone())),
            Relation::Ge => ge.push((r.coeffs.clone(), r.rhs.clone())),
            Relation::Le => ge.push((r.coeffs.iter().map(|v| -v).collect(), -&r.rhs)),
        }
    }
    let structural_ge = ge.len();
    for (j, b) in p.bounds.iter().enumerate() {
        if *b == VarBound::NonNegative {
            let mut e = vec![Rational::zero(); n];
            e[j] = Rational::one();
            ge.push((e, Rational::zero()));
        }
    }
    let points = minimal_face_points(n, &eq, &ge);
    if points.is_empty() {
        return Brute::Infeasible;
    }

    // Dual of min c x over the rows above: y >= 0 on >= rows, free on
    // equalities, A^T y = c_j for free x_j and <= c_j for nonnegative x_j.
    let rows: Vec<&Vec<Rational>> = eq.iter().map(|r| &r.0).chain(ge[..structural_ge].iter().map(|r| &r.0)).collect();
    let m = rows.len();
    let mut deq = Vec::new();
    let mut dge = Vec::new();
    for i in 0..m {
        if i >= eq.len() {
            let mut e = vec![Rational::zero(); m];
            e[i] = Rational::one();
            dge.push((e, Rational::zero()));
        }
    }
    for j in 0..n {
        let col: Vec<Rational> = rows.iter().map(|r| r[j].clone()).collect();
        match p.bounds[j] {
            VarBound::Free => deq.push((col, cost[j].clone())),
            VarBound::NonNegative => dge.push((col.iter().map(|v| -v).collect(), -&cost[j])),
        }
    }
    if minimal_face_points(m, &deq, &dge).is_empty() {
        return Brute::Unbounded;
    }
    let best = points
        .iter()
        .map(|x| x.iter().zip(&cost).map(|(a, b)| a * b).sum::<Rational>())
        .min()
        .expect("nonempty");
    Brute::Optimal(match p.sense {
        Sense::Min => best,
        Sense::Max => -best,
    })
}

pub fn small_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    let den = rng.gen_range(1..=2);
    Rational::new(rng.gen_range(-bound * den..=bound * den).into(), den.into())
}

/// A sequence from a few simple families; convergent when asked.
pub fn random_sequence(rng: &mut ChaCha8Rng, convergent: bool) -> RationalSequence {
    let c = small_rational(rng, 3);
    let r = small_rational(rng, 3);
    let families = if convergent { 4 } else { 5 };
    let (num, den) = match rng.gen_range(0..families) {
        0 => (Poly::constant(c), Poly::one()),
        1 => (Poly::from_coeffs(vec![r, c]), Poly::index()),
        2 => (Poly::from_coeffs(vec![r, Rational::zero(), c]), Poly::index().pow(2)),
        3 => {
            let den = Poly::from_coeffs(vec![Rational::from_integer(rng.gen_range(1..=3).into()), Rational::one()]);
            (&den.scale(&c) + &Poly::constant(r), den)
        }
        _ => (Poly::from_coeffs(vec![c, r]), Poly::one()),
    };
    let prefix = (0..rng.gen_range(0..=2)).map(|_| small_rational(rng, 3)).collect();
    RationalSequence::new(prefix, num, den).expect("denominators have no positive roots")
}

pub fn random_instance(rng: &mut ChaCha8Rng, convergent: bool) -> SILPInstance {
    let n = rng.gen_range(1..=3);
    let phi = (0..n).map(|_| small_rational(rng, 3)).collect();
    let a = (0..n).map(|_| random_sequence(rng, convergent)).collect();
    SILPInstance::new(phi, a, random_sequence(rng, convergent)).expect("shapes match")
}

/// `p` without its last variable.
pub fn drop_last_column(p: &LPProblem) -> LPProblem {
    let n = p.num_vars() - 1;
    let mut q = LPProblem::new(p.sense, p.objective[..n].to_vec(), p.bounds[..n].to_vec());
    for r in &p.rows {
        q.add_row(r.coeffs[..n].to_vec(), r.relation, r.rhs.clone());
    }
    q
}

pub fn workspace_file(rel: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

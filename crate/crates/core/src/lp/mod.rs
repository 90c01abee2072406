//! Exact-rational finite linear programming.
//!
//! [`solve`] returns one of three statuses, each carrying a certificate
//! that [`verify_certificate`] re-checks with exact arithmetic only.
//!
//! Sign conventions, for a problem with objective `c`, rows `a_r . x rel b_r`:
//!
//! * Optimal duals `y`: for `Min`, `y_r >= 0` on `>=` rows and `y_r <= 0` on
//!   `<=` rows; `(A^T y)_j = c_j` for free variables and `<= c_j` for
//!   nonnegative ones. For `Max` every inequality flips. In both senses
//!   `b^T y` equals the optimal value and complementary slackness holds.
//! * Farkas vector `y` (sense independent): `y_r >= 0` on `>=` rows,
//!   `<= 0` on `<=` rows, free on `=` rows; `(A^T y)_j = 0` for free and
//!   `<= 0` for nonnegative variables; `b^T y > 0`.
//! * Unbounded: `point` is feasible and `ray` is a recession direction along
//!   which the objective strictly improves.

mod simplex;

use num_traits::{Signed, Zero};

use crate::seq::Rational;
use simplex::{solve_standard, CoreOutcome, StandardForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarBound {
    Free,
    NonNegative,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPProblem {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub rows: Vec<Row>,
    pub bounds: Vec<VarBound>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LPOutcome {
    Optimal { value: Rational, primal: Vec<Rational>, duals: Vec<Rational> },
    Infeasible { farkas: Vec<Rational> },
    Unbounded { point: Vec<Rational>, ray: Vec<Rational> },
}

impl LPOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LPOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn status(&self) -> Status {
        match self {
            LPOutcome::Optimal { .. } => Status::Optimal,
            LPOutcome::Infeasible { .. } => Status::Infeasible,
            LPOutcome::Unbounded { .. } => Status::Unbounded,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "OPTIMAL",
            Status::Infeasible => "INFEASIBLE",
            Status::Unbounded => "UNBOUNDED",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl LPProblem {
    pub fn new(sense: Sense, objective: Vec<Rational>, bounds: Vec<VarBound>) -> Self {
        assert_eq!(objective.len(), bounds.len(), "one bound per variable");
        assert!(!objective.is_empty(), "at least one variable");
        LPProblem { sense, objective, rows: Vec::new(), bounds }
    }

    pub fn add_row(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> &mut Self {
        assert_eq!(coeffs.len(), self.objective.len(), "row width must match the objective");
        self.rows.push(Row { coeffs, relation, rhs });
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Objective in minimisation form.
    fn min_cost(&self) -> Vec<Rational> {
        match self.sense {
            Sense::Min => self.objective.clone(),
            Sense::Max => self.objective.iter().map(|c| -c).collect(),
        }
    }

    fn flip_for_sense(&self, mut y: Vec<Rational>) -> Vec<Rational> {
        if self.sense == Sense::Max {
            for v in y.iter_mut() {
                *v = -v.clone();
            }
        }
        y
    }
}

/// Solves the problem exactly.
///
/// Works on whichever orientation has fewer rows: problems with more rows
/// than variables are solved through their LP dual and the certificates
/// are translated back.
pub fn solve(p: &LPProblem) -> LPOutcome {
    assert!(p.num_vars() >= 1, "at least one variable");
    for row in &p.rows {
        assert_eq!(row.coeffs.len(), p.num_vars(), "row width must match the objective");
    }
    if p.rows.len() > p.num_vars() {
        solve_transposed(p)
    } else {
        solve_direct(p)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Standard form with free variables split and one slack per inequality.
fn solve_direct(p: &LPProblem) -> LPOutcome {
    let n = p.num_vars();
    let mut col_of = Vec::with_capacity(n);
    let mut ncols = 0;
    for b in &p.bounds {
        col_of.push(ncols);
        ncols += if *b == VarBound::Free { 2 } else { 1 };
    }
    let slack_base = ncols;
    let nslack = p.rows.iter().filter(|r| r.relation != Relation::Eq).count();
    let total = ncols + nslack;
    let cost = p.min_cost();
    let mut c = vec![Rational::zero(); total];
    for j in 0..n {
        c[col_of[j]] = cost[j].clone();
        if p.bounds[j] == VarBound::Free {
            c[col_of[j] + 1] = -&cost[j];
        }
    }
    let m = p.rows.len();
    let mut cols = vec![vec![Rational::zero(); m]; total];
    let mut s = slack_base;
    for (r, row) in p.rows.iter().enumerate() {
        for j in 0..n {
            cols[col_of[j]][r] = row.coeffs[j].clone();
            if p.bounds[j] == VarBound::Free {
                cols[col_of[j] + 1][r] = -&row.coeffs[j];
            }
        }
        match row.relation {
            Relation::Ge => {
                cols[s][r] = Rational::from_integer((-1).into());
                s += 1;
            }
            Relation::Le => {
                cols[s][r] = Rational::from_integer(1.into());
                s += 1;
            }
            Relation::Eq => {}
        }
    }
    let sf = StandardForm { cols, b: p.rows.iter().map(|r| r.rhs.clone()).collect(), c };
    let fold = |v: &[Rational]| -> Vec<Rational> {
        (0..n)
            .map(|j| match p.bounds[j] {
                VarBound::Free => &v[col_of[j]] - &v[col_of[j] + 1],
                VarBound::NonNegative => v[col_of[j]].clone(),
            })
            .collect()
    };
    match solve_standard(&sf) {
        CoreOutcome::Optimal { x, y } => {
            let primal = fold(&x);
            LPOutcome::Optimal { value: dot(&p.objective, &primal), primal, duals: p.flip_for_sense(y) }
        }
        CoreOutcome::Infeasible { y } => LPOutcome::Infeasible { farkas: y },
        CoreOutcome::Unbounded { x, d } => LPOutcome::Unbounded { point: fold(&x), ray: fold(&d) },
    }
}

/// Builds the standard-form dual `min -b^T y` over the row multipliers,
/// with one row per primal variable. Returns the problem and, for each
/// standard column, the primal row it belongs to and its sign.
fn dual_standard_form(p: &LPProblem, cost: &[Rational]) -> (StandardForm, Vec<(usize, bool)>) {
    let n = p.num_vars();
    let mut cols: Vec<(usize, bool)> = Vec::new();
    for (r, row) in p.rows.iter().enumerate() {
        match row.relation {
            Relation::Ge => cols.push((r, true)),
            Relation::Le => cols.push((r, false)),
            Relation::Eq => {
                cols.push((r, true));
                cols.push((r, false));
            }
        }
    }
    let slacks: Vec<usize> = (0..n).filter(|&j| p.bounds[j] == VarBound::NonNegative).collect();
    let mut std_cols = Vec::with_capacity(cols.len() + slacks.len());
    let mut c = Vec::with_capacity(cols.len() + slacks.len());
    for &(r, pos) in &cols {
        let row = &p.rows[r];
        std_cols.push(if pos { row.coeffs.clone() } else { row.coeffs.iter().map(|v| -v).collect() });
        c.push(if pos { -&row.rhs } else { row.rhs.clone() });
    }
    for &j in &slacks {
        let mut e = vec![Rational::zero(); n];
        e[j] = Rational::from_integer(1.into());
        std_cols.push(e);
        c.push(Rational::zero());
    }
    (StandardForm { cols: std_cols, b: cost.to_vec(), c }, cols)
}

fn fold_multipliers(p: &LPProblem, cols: &[(usize, bool)], v: &[Rational]) -> Vec<Rational> {
    let mut y = vec![Rational::zero(); p.rows.len()];
    for (k, &(r, pos)) in cols.iter().enumerate() {
        if pos {
            y[r] += &v[k];
        } else {
            y[r] -= &v[k];
        }
    }
    y
}

fn solve_transposed(p: &LPProblem) -> LPOutcome {
    let cost = p.min_cost();
    let (sf, cols) = dual_standard_form(p, &cost);
    match solve_standard(&sf) {
        CoreOutcome::Optimal { x, y } => {
            // The standard problem's multipliers z give the primal point -z.
            let primal: Vec<Rational> = y.iter().map(|v| -v).collect();
            let duals = fold_multipliers(p, &cols, &x);
            LPOutcome::Optimal { value: dot(&p.objective, &primal), primal, duals: p.flip_for_sense(duals) }
        }
        CoreOutcome::Unbounded { d, .. } => LPOutcome::Infeasible { farkas: fold_multipliers(p, &cols, &d) },
        CoreOutcome::Infeasible { y } => {
            // The dual is infeasible: -y is an improving primal ray, and the
            // primal is unbounded exactly when it is feasible.
            let ray: Vec<Rational> = y.iter().map(|v| -v).collect();
            let zero = vec![Rational::zero(); p.num_vars()];
            let (sf0, cols0) = dual_standard_form(p, &zero);
            match solve_standard(&sf0) {
                CoreOutcome::Optimal { y: z, .. } => {
                    LPOutcome::Unbounded { point: z.iter().map(|v| -v).collect(), ray }
                }
                CoreOutcome::Unbounded { d, .. } => {
                    LPOutcome::Infeasible { farkas: fold_multipliers(p, &cols0, &d) }
                }
                CoreOutcome::Infeasible { .. } => unreachable!("zero is feasible for the homogeneous dual"),
            }
        }
    }
}

fn row_satisfied(relation: Relation, lhs: &Rational, rhs: &Rational) -> bool {
    match relation {
        Relation::Ge => lhs >= rhs,
        Relation::Le => lhs <= rhs,
        Relation::Eq => lhs == rhs,
    }
}

fn is_feasible(p: &LPProblem, x: &[Rational]) -> bool {
    x.len() == p.num_vars()
        && p.bounds.iter().zip(x).all(|(b, v)| *b == VarBound::Free || !v.is_negative())
        && p.rows.iter().all(|r| row_satisfied(r.relation, &dot(&r.coeffs, x), &r.rhs))
}

/// `A^T y` column sums.
fn transpose_apply(p: &LPProblem, y: &[Rational]) -> Vec<Rational> {
    (0..p.num_vars()).map(|j| p.rows.iter().zip(y).map(|(r, v)| &r.coeffs[j] * v).sum()).collect()
}

/// Row multiplier sign admissible for a `Min`-oriented certificate.
fn multiplier_sign_ok(relation: Relation, y: &Rational) -> bool {
    match relation {
        Relation::Ge => !y.is_negative(),
        Relation::Le => !y.is_positive(),
        Relation::Eq => true,
    }
}

/// Re-checks the certificate carried by `o` using exact arithmetic only.
pub fn verify_certificate(p: &LPProblem, o: &LPOutcome) -> bool {
    let m = p.rows.len();
    match o {
        LPOutcome::Optimal { value, primal, duals } => {
            if duals.len() != m || !is_feasible(p, primal) || *value != dot(&p.objective, primal) {
                return false;
            }
            // Orient everything as a minimisation.
            let y = p.flip_for_sense(duals.clone());
            let c = p.min_cost();
            if !p.rows.iter().zip(&y).all(|(r, v)| multiplier_sign_ok(r.relation, v)) {
                return false;
            }
            let aty = transpose_apply(p, &y);
            let dual_ok = (0..p.num_vars()).all(|j| match p.bounds[j] {
                VarBound::Free => aty[j] == c[j],
                VarBound::NonNegative => aty[j] <= c[j],
            });
            let slack_ok = p.rows.iter().zip(&y).all(|(r, v)| v.is_zero() || dot(&r.coeffs, primal) == r.rhs);
            let reduced_ok = (0..p.num_vars()).all(|j| primal[j].is_zero() || aty[j] == c[j]);
            let by: Rational = p.rows.iter().zip(duals).map(|(r, v)| &r.rhs * v).sum();
            dual_ok && slack_ok && reduced_ok && by == *value
        }
        LPOutcome::Infeasible { farkas } => {
            if farkas.len() != m || !p.rows.iter().zip(farkas).all(|(r, v)| multiplier_sign_ok(r.relation, v)) {
                return false;
            }
            let aty = transpose_apply(p, farkas);
            let cols_ok = (0..p.num_vars()).all(|j| match p.bounds[j] {
                VarBound::Free => aty[j].is_zero(),
                VarBound::NonNegative => !aty[j].is_positive(),
            });
            let by: Rational = p.rows.iter().zip(farkas).map(|(r, v)| &r.rhs * v).sum();
            cols_ok && by.is_positive()
        }
        LPOutcome::Unbounded { point, ray } => {
            if ray.len() != p.num_vars() || !is_feasible(p, point) {
                return false;
            }
            let zero = Rational::zero();
            let recession = p.bounds.iter().zip(ray).all(|(b, v)| *b == VarBound::Free || !v.is_negative())
                && p.rows.iter().all(|r| row_satisfied(r.relation, &dot(&r.coeffs, ray), &zero));
            let slope = dot(&p.objective, ray);
            let improving = match p.sense {
                Sense::Min => slope.is_negative(),
                Sense::Max => slope.is_positive(),
            };
            recession && improving
        }
    }
}

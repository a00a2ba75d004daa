//! Dense two-phase simplex kernel for the tiny feasibility and
//! optimization problems raised by cone membership, invariance checks,
//! and the conic subradius bound.
//!
//! All variables are nonnegative; callers split free variables
//! themselves. Pivoting uses Bland's rule throughout, so the iteration
//! terminates without anti-cycling perturbations and runs are fully
//! deterministic.

use crate::error::{Error, Result};

/// Relation of a single linear constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

#[derive(Debug, Clone)]
pub struct LpConstraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone)]
pub struct LpObjective {
    pub maximize: bool,
    pub coeffs: Vec<f64>,
}

/// Linear program over nonnegative variables.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub num_vars: usize,
    pub constraints: Vec<LpConstraint>,
    pub objective: Option<LpObjective>,
}

impl LpProblem {
    pub fn feasibility(num_vars: usize, constraints: Vec<LpConstraint>) -> Self {
        Self {
            num_vars,
            constraints,
            objective: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.num_vars == 0 {
            return Err(Error::Domain("LP must have at least one variable".into()));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != self.num_vars {
                return Err(Error::Domain(format!(
                    "constraint {i} has {} coefficients, expected {}",
                    c.coeffs.len(),
                    self.num_vars
                )));
            }
            if !c.rhs.is_finite() || c.coeffs.iter().any(|v| !v.is_finite()) {
                return Err(Error::Domain(format!(
                    "constraint {i} has a non-finite value"
                )));
            }
        }
        if let Some(obj) = &self.objective {
            if obj.coeffs.len() != self.num_vars {
                return Err(Error::Domain(format!(
                    "objective has {} coefficients, expected {}",
                    obj.coeffs.len(),
                    self.num_vars
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    /// A point satisfying all constraints within the caller's tolerance.
    Feasible(Vec<f64>),
    /// Phase-one optimum bounded away from zero by more than the tolerance.
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

const PIVOT_EPS: f64 = 1e-9;
const MAX_PIVOTS: usize = 20_000;

/// Feasibility of `p` (the objective, if any, is ignored).
pub fn lp_feasible(p: &LpProblem, tol: f64) -> Result<Feasibility> {
    p.validate()?;
    let mut tab = Tableau::build(p)?;
    let w = tab.phase_one()?;
    if w > tol {
        return Ok(Feasibility::Infeasible);
    }
    Ok(Feasibility::Feasible(tab.solution(p.num_vars)))
}

/// Two-phase solve of `p`; requires an objective.
pub fn lp_solve(p: &LpProblem, tol: f64) -> Result<LpOutcome> {
    p.validate()?;
    let obj = p
        .objective
        .as_ref()
        .ok_or_else(|| Error::Domain("lp_solve requires an objective".into()))?;
    let mut tab = Tableau::build(p)?;
    let w = tab.phase_one()?;
    if w > tol {
        return Ok(LpOutcome::Infeasible);
    }
    match tab.phase_two(obj)? {
        PhaseTwo::Optimal(value) => {
            let x = tab.solution(p.num_vars);
            let objective = if obj.maximize { -value } else { value };
            Ok(LpOutcome::Optimal { x, objective })
        }
        PhaseTwo::Unbounded => Ok(LpOutcome::Unbounded),
    }
}

enum PhaseTwo {
    Optimal(f64),
    Unbounded,
}

struct Tableau {
    /// `rows` of `[coefficients | rhs]`, rhs kept nonnegative.
    rows: Vec<Vec<f64>>,
    /// Reduced-cost row for the current (minimization) objective, last
    /// entry holding the current objective value.
    obj: Vec<f64>,
    basis: Vec<usize>,
    total_vars: usize,
    artificial_start: usize,
}

impl Tableau {
    fn build(p: &LpProblem) -> Result<Self> {
        let n = p.num_vars;
        let m = p.constraints.len();
        let mut slack = 0;
        let mut artificial = 0;
        for c in &p.constraints {
            // Orient so the right-hand side is nonnegative first.
            let rel = if c.rhs < 0.0 {
                flip(c.relation)
            } else {
                c.relation
            };
            match rel {
                Relation::Le => slack += 1,
                Relation::Ge => {
                    slack += 1;
                    artificial += 1;
                }
                Relation::Eq => artificial += 1,
            }
        }
        let total = n + slack + artificial;
        let mut rows = vec![vec![0.0; total + 1]; m];
        let mut basis = vec![0usize; m];
        let mut next_slack = n;
        let artificial_start = n + slack;
        let mut next_artificial = artificial_start;

        for (i, c) in p.constraints.iter().enumerate() {
            let (mut rel, sign) = if c.rhs < 0.0 {
                (flip(c.relation), -1.0)
            } else {
                (c.relation, 1.0)
            };
            for (j, &v) in c.coeffs.iter().enumerate() {
                rows[i][j] = sign * v;
            }
            rows[i][total] = sign * c.rhs;
            if rows[i][total] == 0.0 && rel == Relation::Ge {
                // ax >= 0 is -ax <= 0: the slack alone carries the row and
                // no artificial is needed.
                for v in rows[i].iter_mut().take(total) {
                    *v = -*v;
                }
                rel = Relation::Le;
            }
            match rel {
                Relation::Le => {
                    rows[i][next_slack] = 1.0;
                    basis[i] = next_slack;
                    next_slack += 1;
                }
                Relation::Ge => {
                    rows[i][next_slack] = -1.0;
                    next_slack += 1;
                    rows[i][next_artificial] = 1.0;
                    basis[i] = next_artificial;
                    next_artificial += 1;
                }
                Relation::Eq => {
                    rows[i][next_artificial] = 1.0;
                    basis[i] = next_artificial;
                    next_artificial += 1;
                }
            }
        }

        Ok(Self {
            rows,
            obj: vec![0.0; total + 1],
            basis,
            total_vars: total,
            artificial_start,
        })
    }

    /// Minimize the sum of artificial variables; returns the optimum.
    fn phase_one(&mut self) -> Result<f64> {
        let total = self.total_vars;
        // Reduced costs of min sum(artificials) under the initial basis.
        for v in self.obj.iter_mut() {
            *v = 0.0;
        }
        for j in self.artificial_start..total {
            self.obj[j] = 1.0;
        }
        for (i, &b) in self.basis.iter().enumerate() {
            if b >= self.artificial_start {
                let row = self.rows[i].clone();
                for (o, r) in self.obj.iter_mut().zip(&row) {
                    *o -= r;
                }
            }
        }
        // The stored last entry is -objective after the eliminations above;
        // normalize so obj[total] always holds the current objective value.
        self.obj[total] = -self.obj[total];
        self.iterate()?;
        Ok(self.obj[total])
    }

    fn phase_two(&mut self, objective: &LpObjective) -> Result<PhaseTwo> {
        self.drive_out_artificials();
        let total = self.total_vars;
        for v in self.obj.iter_mut() {
            *v = 0.0;
        }
        let sign = if objective.maximize { -1.0 } else { 1.0 };
        for (j, &c) in objective.coeffs.iter().enumerate() {
            self.obj[j] = sign * c;
        }
        // Canonicalize reduced costs against the current basis.
        for i in 0..self.rows.len() {
            let b = self.basis[i];
            let cb = self.obj[b];
            if cb != 0.0 {
                let row = self.rows[i].clone();
                for (o, r) in self.obj.iter_mut().take(total).zip(&row) {
                    *o -= cb * r;
                }
                self.obj[b] = 0.0;
            }
        }
        // The last entry tracks the current objective value.
        self.obj[total] = 0.0;
        for i in 0..self.rows.len() {
            let b = self.basis[i];
            if b < objective.coeffs.len() {
                self.obj[total] += sign * objective.coeffs[b] * self.rows[i][total];
            }
        }
        match self.iterate() {
            Ok(()) => Ok(PhaseTwo::Optimal(self.obj[total])),
            Err(Error::Numerical(msg)) if msg == "unbounded" => Ok(PhaseTwo::Unbounded),
            Err(e) => Err(e),
        }
    }

    /// Bland-rule simplex loop. Artificial columns never enter: once one
    /// leaves the basis it is effectively dropped, which preserves the
    /// phase-one optimum of zero exactly when the problem is feasible.
    fn iterate(&mut self) -> Result<()> {
        let total = self.total_vars;
        for _ in 0..MAX_PIVOTS {
            // Entering: smallest-index column with negative reduced cost.
            let entering = (0..self.artificial_start).find(|&j| self.obj[j] < -PIVOT_EPS);
            let Some(entering) = entering else {
                return Ok(());
            };
            // Leaving: minimum ratio, ties by smallest basic variable index.
            let mut leaving: Option<usize> = None;
            let mut best = f64::INFINITY;
            for (i, row) in self.rows.iter().enumerate() {
                let a = row[entering];
                if a > PIVOT_EPS {
                    let ratio = row[total] / a;
                    let better = ratio < best - 1e-12
                        || ((ratio - best).abs() <= 1e-12
                            && leaving.is_none_or(|l| self.basis[i] < self.basis[l]));
                    if better {
                        best = ratio;
                        leaving = Some(i);
                    }
                }
            }
            let Some(leaving) = leaving else {
                return Err(Error::Numerical("unbounded".into()));
            };
            self.pivot(leaving, entering);
        }
        Err(Error::Numerical(
            "simplex iteration cap exceeded (degenerate cycling)".into(),
        ))
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let total = self.total_vars;
        let p = self.rows[r][e];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[e];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[e] = 0.0;
            }
        }
        let f = self.obj[e];
        if f != 0.0 {
            for (v, pv) in self.obj.iter_mut().take(total).zip(&pivot_row) {
                *v -= f * pv;
            }
            self.obj[e] = 0.0;
            // Entering at value pivot_row[total] changes the objective by
            // reduced_cost * value.
            self.obj[total] += f * pivot_row[total];
        }
        self.basis[r] = e;
    }

    /// Pivot basic artificials (at value zero after phase one) out of the
    /// basis where possible; rows with no eligible column are redundant
    /// and keep a zero-valued artificial that is never allowed back in.
    fn drive_out_artificials(&mut self) {
        for i in 0..self.rows.len() {
            if self.basis[i] < self.artificial_start {
                continue;
            }
            let col = (0..self.artificial_start).find(|&j| self.rows[i][j].abs() > PIVOT_EPS);
            if let Some(j) = col {
                self.pivot(i, j);
            }
        }
    }

    fn solution(&self, num_vars: usize) -> Vec<f64> {
        let total = self.total_vars;
        let mut x = vec![0.0; num_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < num_vars {
                x[b] = self.rows[i][total];
            }
        }
        x
    }
}

fn flip(r: Relation) -> Relation {
    match r {
        Relation::Le => Relation::Ge,
        Relation::Ge => Relation::Le,
        Relation::Eq => Relation::Eq,
    }
}

//! Certified lower bound on the joint spectral subradius from a common
//! invariant cone.
//!
//! If some nonzero `x` in the cone satisfies `A x >=_K r x` for every
//! member, then the subradius is at least `r`. For a polyhedral cone and
//! fixed `r` this is a pure feasibility question over the generator
//! coefficients, so the largest certifiable `r` is found by bisection.

use crate::cone::{is_invariant, PolyhedralCone};
use crate::error::{Error, Result};
use crate::lp::{lp_feasible, Feasibility, LpConstraint, LpProblem, Relation};
use crate::matrix::{operator_norm, MatrixSet, NormKind};

const MAX_BISECTIONS: usize = 60;

/// Certified conic lower bound with its witness direction.
#[derive(Debug, Clone, PartialEq)]
pub struct ConicBound {
    /// Largest `r` for which the feasibility problem admitted a witness.
    pub r: f64,
    /// Witness `x` (a convex combination of the cone generators).
    pub witness: Vec<f64>,
    pub bisection_iterations: usize,
    /// Upper end of the bisection bracket (the smallest member norm).
    pub bracket_upper: f64,
}

/// Feasibility of: `x` a convex combination of the generators, and
/// `A x - r x` in the cone for every member `A`.
fn conic_feasible(
    sigma: &MatrixSet,
    k: &PolyhedralCone,
    r: f64,
    tol: f64,
) -> Result<Option<Vec<f64>>> {
    let n = k.dim();
    let gens = k.generators();
    let g = gens.len();
    let m = sigma.len();
    // Variables: g combination coefficients, then g slack coefficients
    // per member expressing the cone membership of A x - r x.
    let num_vars = g * (1 + m);
    let mut constraints = Vec::with_capacity(1 + n * m);

    let mut normalization = vec![0.0; num_vars];
    for v in normalization.iter_mut().take(g) {
        *v = 1.0;
    }
    constraints.push(LpConstraint {
        coeffs: normalization,
        relation: Relation::Eq,
        rhs: 1.0,
    });

    for (ai, a) in sigma.iter().enumerate() {
        // Image coordinates of each generator under A - rI.
        let images: Vec<Vec<f64>> = gens
            .iter()
            .map(|gen| {
                let mut img = a.matvec(gen);
                for (iv, gv) in img.iter_mut().zip(gen) {
                    *iv -= r * gv;
                }
                img
            })
            .collect();
        for i in 0..n {
            let mut coeffs = vec![0.0; num_vars];
            for (j, img) in images.iter().enumerate() {
                coeffs[j] = img[i];
            }
            for (j, gen) in gens.iter().enumerate() {
                coeffs[g * (1 + ai) + j] = -gen[i];
            }
            constraints.push(LpConstraint {
                coeffs,
                relation: Relation::Eq,
                rhs: 0.0,
            });
        }
    }

    let p = LpProblem::feasibility(num_vars, constraints);
    match lp_feasible(&p, tol)? {
        Feasibility::Feasible(vars) => {
            let mut x = vec![0.0; n];
            for (j, gen) in gens.iter().enumerate() {
                for (xi, gv) in x.iter_mut().zip(gen) {
                    *xi += vars[j] * gv;
                }
            }
            Ok(Some(x))
        }
        Feasibility::Infeasible => Ok(None),
    }
}

/// Largest `r` certifiable by the conic feasibility problem, searched over
/// `[0, min member norm]` by bisection (the subradius never exceeds the
/// smallest member norm).
pub fn conic_subradius_lower(
    sigma: &MatrixSet,
    k: &PolyhedralCone,
    tol: f64,
) -> Result<ConicBound> {
    if sigma.dim() != k.dim() {
        return Err(Error::Domain(format!(
            "matrix set dimension {} does not match cone dimension {}",
            sigma.dim(),
            k.dim()
        )));
    }
    if tol <= 0.0 {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    for (idx, a) in sigma.iter().enumerate() {
        if !is_invariant(a, k, tol)? {
            return Err(Error::Domain(format!(
                "conic lower bound requires an invariant cone, but member {idx} maps a \
                 generator outside"
            )));
        }
    }

    let bracket_upper = sigma
        .iter()
        .map(|a| operator_norm(a, NormKind::Two))
        .fold(f64::INFINITY, f64::min);
    if bracket_upper <= 0.0 {
        return Ok(ConicBound {
            r: 0.0,
            witness: k.average_generator(),
            bisection_iterations: 0,
            bracket_upper: 0.0,
        });
    }

    // Invariance makes r = 0 feasible with any convex generator
    // combination; the top of the bracket may also be feasible outright.
    if let Some(witness) = conic_feasible(sigma, k, bracket_upper, tol)? {
        return Ok(ConicBound {
            r: bracket_upper,
            witness,
            bisection_iterations: 0,
            bracket_upper,
        });
    }
    let mut lo = 0.0_f64;
    let mut witness = conic_feasible(sigma, k, 0.0, tol)?.ok_or_else(|| {
        Error::Numerical("feasibility failed at r = 0 despite cone invariance".into())
    })?;
    let mut hi = bracket_upper;
    let mut iterations = 0;
    while iterations < MAX_BISECTIONS && hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        iterations += 1;
        match conic_feasible(sigma, k, mid, tol)? {
            Some(w) => {
                lo = mid;
                witness = w;
            }
            None => hi = mid,
        }
    }
    Ok(ConicBound {
        r: lo,
        witness,
        bisection_iterations: iterations,
        bracket_upper,
    })
}

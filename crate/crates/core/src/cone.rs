//! Polyhedral cones in generator form, with membership, invariance,
//! positivity, and primitivity tests.
//!
//! A cone is given by finitely many generator rays; membership reduces to
//! nonnegative-combination feasibility, which the orthant answers by sign
//! inspection and general cones answer through the LP kernel. Interior
//! membership subtracts a small multiple of the average generator and
//! retests, which errs toward the boundary under floating-point noise.

use crate::error::{Error, Result};
use crate::lp::{lp_feasible, Feasibility, LpConstraint, LpProblem, Relation};
use crate::matrix::Matrix;

/// Shift used by the interior test: a point is interior when it remains a
/// member after subtracting `INTERIOR_EPS` times the average generator.
pub const INTERIOR_EPS: f64 = 1e-7;

/// Finitely generated cone in `R^dim`, generators kept at unit Euclidean
/// length.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralCone {
    dim: usize,
    generators: Vec<Vec<f64>>,
    is_orthant: bool,
}

impl PolyhedralCone {
    /// The nonnegative orthant of dimension `dim`.
    pub fn orthant(dim: usize) -> Self {
        let generators = (0..dim)
            .map(|i| {
                let mut e = vec![0.0; dim];
                e[i] = 1.0;
                e
            })
            .collect();
        Self {
            dim,
            generators,
            is_orthant: true,
        }
    }

    pub fn from_generators(dim: usize, generators: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("cone dimension must be at least 1".into()));
        }
        if generators.is_empty() {
            return Err(Error::Domain("cone needs at least one generator".into()));
        }
        let mut unit = Vec::with_capacity(generators.len());
        for (idx, g) in generators.into_iter().enumerate() {
            if g.len() != dim {
                return Err(Error::Domain(format!(
                    "generator {idx} has length {}, expected {dim}",
                    g.len()
                )));
            }
            if g.iter().any(|v| !v.is_finite()) {
                return Err(Error::Domain(format!(
                    "generator {idx} has a non-finite entry"
                )));
            }
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Error::Domain(format!("generator {idx} is the zero vector")));
            }
            unit.push(g.iter().map(|v| v / norm).collect());
        }
        Ok(Self {
            dim,
            generators: unit,
            is_orthant: false,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    pub fn is_orthant(&self) -> bool {
        self.is_orthant
    }

    pub fn average_generator(&self) -> Vec<f64> {
        let m = self.generators.len() as f64;
        let mut avg = vec![0.0; self.dim];
        for g in &self.generators {
            for (a, v) in avg.iter_mut().zip(g) {
                *a += v / m;
            }
        }
        avg
    }

    /// Rank of the generator family (Gaussian elimination with partial
    /// pivoting).
    pub fn generator_rank(&self, tol: f64) -> usize {
        let mut rows: Vec<Vec<f64>> = self.generators.clone();
        let n = self.dim;
        let mut rank = 0;
        for col in 0..n {
            let pivot = (rank..rows.len())
                .max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs()))
                .filter(|&r| rows[r][col].abs() > tol);
            let Some(pivot) = pivot else { continue };
            rows.swap(rank, pivot);
            let lead = rows[rank][col];
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[col].abs() > 0.0 {
                    let f = row[col] / lead;
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    pub fn is_full_dimensional(&self, tol: f64) -> bool {
        self.is_orthant || self.generator_rank(tol) == self.dim
    }

    /// A cone is pointed when no nontrivial nonnegative combination of
    /// generators vanishes.
    pub fn is_pointed(&self, tol: f64) -> Result<bool> {
        if self.is_orthant {
            return Ok(true);
        }
        let g = self.generators.len();
        let mut constraints: Vec<LpConstraint> = (0..self.dim)
            .map(|i| LpConstraint {
                coeffs: self.generators.iter().map(|gen| gen[i]).collect(),
                relation: Relation::Eq,
                rhs: 0.0,
            })
            .collect();
        constraints.push(LpConstraint {
            coeffs: vec![1.0; g],
            relation: Relation::Eq,
            rhs: 1.0,
        });
        let p = LpProblem::feasibility(g, constraints);
        Ok(matches!(lp_feasible(&p, tol)?, Feasibility::Infeasible))
    }

    /// Proper: closed convex (by construction), full-dimensional, pointed.
    pub fn is_proper(&self, tol: f64) -> Result<bool> {
        Ok(self.is_full_dimensional(tol) && self.is_pointed(tol)?)
    }
}

/// Classification of a point against a cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Outside,
    Boundary,
    Interior,
}

/// Membership result; `degenerate_cone` flags that the cone has empty
/// interior, in which case no point classifies as `Interior`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MembershipCheck {
    pub class: Membership,
    pub degenerate_cone: bool,
}

fn euclid_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn is_member(x: &[f64], cone: &PolyhedralCone, tol: f64) -> Result<bool> {
    if cone.is_orthant {
        return Ok(x.iter().all(|&v| v >= -tol));
    }
    let g = cone.generators.len();
    let constraints = (0..cone.dim)
        .map(|i| LpConstraint {
            coeffs: cone.generators.iter().map(|gen| gen[i]).collect(),
            relation: Relation::Eq,
            rhs: x[i],
        })
        .collect();
    let p = LpProblem::feasibility(g, constraints);
    Ok(matches!(lp_feasible(&p, tol)?, Feasibility::Feasible(_)))
}

/// Classifies `x` as outside, boundary, or interior of `k`.
///
/// Membership is scale invariant, so the point is normalized first; the
/// zero vector sits in every cone and is classified as boundary.
pub fn cone_membership(x: &[f64], k: &PolyhedralCone, tol: f64) -> Result<MembershipCheck> {
    if x.len() != k.dim {
        return Err(Error::Domain(format!(
            "point has dimension {}, cone has dimension {}",
            x.len(),
            k.dim
        )));
    }
    let degenerate = !k.is_full_dimensional(1e-9);
    let norm = euclid_norm(x);
    if norm == 0.0 {
        return Ok(MembershipCheck {
            class: Membership::Boundary,
            degenerate_cone: degenerate,
        });
    }
    let unit: Vec<f64> = x.iter().map(|v| v / norm).collect();
    if !is_member(&unit, k, tol)? {
        return Ok(MembershipCheck {
            class: Membership::Outside,
            degenerate_cone: degenerate,
        });
    }
    if degenerate {
        return Ok(MembershipCheck {
            class: Membership::Boundary,
            degenerate_cone: true,
        });
    }
    let avg = k.average_generator();
    let shifted: Vec<f64> = unit
        .iter()
        .zip(&avg)
        .map(|(v, a)| v - INTERIOR_EPS * a)
        .collect();
    let class = if is_member(&shifted, k, tol)? {
        Membership::Interior
    } else {
        Membership::Boundary
    };
    Ok(MembershipCheck {
        class,
        degenerate_cone: false,
    })
}

/// True when `a` maps every generator of `k` back into `k`; exact for
/// polyhedral cones by convexity.
pub fn is_invariant(a: &Matrix, k: &PolyhedralCone, tol: f64) -> Result<bool> {
    if a.dim() != k.dim {
        return Err(Error::Domain(format!(
            "matrix dimension {} does not match cone dimension {}",
            a.dim(),
            k.dim
        )));
    }
    for g in &k.generators {
        let image = a.matvec(g);
        if cone_membership(&image, k, tol)?.class == Membership::Outside {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True when `a` maps every generator of `k` into the interior of `k`;
/// for polyhedral cones this is equivalent to mapping all of `k \ {0}`
/// into the interior. Requires a proper cone.
pub fn is_positive_map(a: &Matrix, k: &PolyhedralCone, tol: f64) -> Result<bool> {
    if a.dim() != k.dim {
        return Err(Error::Domain(format!(
            "matrix dimension {} does not match cone dimension {}",
            a.dim(),
            k.dim
        )));
    }
    if !k.is_proper(tol.max(1e-9))? {
        return Err(Error::Domain(
            "positivity test requires a proper (pointed, full-dimensional) cone".into(),
        ));
    }
    for g in &k.generators {
        let image = a.matvec(g);
        if cone_membership(&image, k, tol)?.class != Membership::Interior {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Result of a primitivity search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primitivity {
    /// Smallest exponent `t` with `A^t` mapping the cone into its interior.
    Primitive(usize),
    NotFoundWithin(usize),
}

/// Default search horizon: the classical exponent bound `(n-1)^2 + 1` on
/// the orthant, `n^2 + 1` for other cones (no sharper bound is assumed).
pub fn default_primitivity_horizon(k: &PolyhedralCone) -> usize {
    let n = k.dim;
    if k.is_orthant {
        (n - 1) * (n - 1) + 1
    } else {
        n * n + 1
    }
}

/// Searches for the smallest `t <= t_max` with `A^t` a positive map of
/// `k`. Powers are renormalized as they grow; positivity is scale
/// invariant.
pub fn is_primitive(
    a: &Matrix,
    k: &PolyhedralCone,
    t_max: Option<usize>,
    tol: f64,
) -> Result<Primitivity> {
    if !is_invariant(a, k, tol)? {
        return Err(Error::Domain(
            "primitivity requires the matrix to leave the cone invariant".into(),
        ));
    }
    let horizon = t_max.unwrap_or_else(|| default_primitivity_horizon(k));
    if horizon == 0 {
        return Err(Error::Domain(
            "primitivity horizon must be at least 1".into(),
        ));
    }
    let mut power = a.clone();
    for t in 1..=horizon {
        if is_positive_map(&power, k, tol)? {
            return Ok(Primitivity::Primitive(t));
        }
        if t < horizon {
            power = power.mul(a);
            let scale = power.max_abs();
            if scale == 0.0 {
                // Nilpotent: no later power can be positive.
                return Ok(Primitivity::NotFoundWithin(horizon));
            }
            power = power.scale(1.0 / scale);
        }
    }
    Ok(Primitivity::NotFoundWithin(horizon))
}

//! Embedded cone pairs and their embedding constant.
//!
//! A pair `{K, K'}` is embedded when every nonzero point of the inner cone
//! lies in the interior of the outer one. The embedding constant is the
//! worst ratio, over lines cutting both cones in segments, of the
//! outer-entry-to-inner-exit chord against the outer-entry-to-inner-entry
//! chord. For sets of strictly positive matrices an explicit pair with a
//! closed-form bound on the constant is available from the column ratios.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cone::{cone_membership, is_invariant, Membership, PolyhedralCone};
use crate::error::{Error, Result};
use crate::lp::{lp_solve, LpConstraint, LpObjective, LpOutcome, LpProblem, Relation};
use crate::matrix::MatrixSet;

/// Chord denominators shorter than this are discarded: they come from
/// lines through the apex, where the defining ratio degenerates.
pub const MIN_CHORD: f64 = 1e-9;

/// Outer cone, inner cone, and the known information about the embedding
/// constant: `beta_bound` is an analytic upper bound, `beta_estimate` a
/// sampled lower estimate, `column_ratio_c` the column ratio that produced
/// the bound when the pair came from a positive matrix set.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedPair {
    pub outer: PolyhedralCone,
    pub inner: PolyhedralCone,
    pub beta_bound: Option<f64>,
    pub beta_estimate: Option<f64>,
    pub column_ratio_c: Option<f64>,
    /// Whether every member of the originating matrix set mapped the inner
    /// cone into itself (checked numerically at construction time).
    pub inner_invariant: Option<bool>,
}

impl EmbeddedPair {
    pub fn new(outer: PolyhedralCone, inner: PolyhedralCone, tol: f64) -> Result<Self> {
        if !is_embedded_pair(&outer, &inner, tol)? {
            return Err(Error::Domain(
                "inner cone generators must lie in the interior of the outer cone".into(),
            ));
        }
        Ok(Self {
            outer,
            inner,
            beta_bound: None,
            beta_estimate: None,
            column_ratio_c: None,
            inner_invariant: None,
        })
    }

    /// Attaches a sampled estimate, enforcing consistency with an analytic
    /// bound when one is present.
    pub fn with_estimate(mut self, estimate: f64, sampling_tol: f64) -> Result<Self> {
        if let Some(bound) = self.beta_bound {
            if bound < estimate - sampling_tol {
                return Err(Error::Numerical(format!(
                    "sampled embedding estimate {estimate} exceeds analytic bound {bound}"
                )));
            }
        }
        self.beta_estimate = Some(estimate);
        Ok(self)
    }
}

/// True when every generator of `inner` is interior to `outer`.
pub fn is_embedded_pair(outer: &PolyhedralCone, inner: &PolyhedralCone, tol: f64) -> Result<bool> {
    if outer.dim() != inner.dim() {
        return Err(Error::Domain(format!(
            "outer cone dimension {} does not match inner cone dimension {}",
            outer.dim(),
            inner.dim()
        )));
    }
    for g in inner.generators() {
        if cone_membership(g, outer, tol)?.class != Membership::Interior {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Builds the explicit invariant embedded pair for a set of strictly
/// positive matrices.
///
/// With `c` the largest within-column max/min entry ratio over all
/// members, the outer cone is the orthant and the inner cone collects the
/// directions whose entries differ by a factor of at most `c`; its extreme
/// rays are the `{1, c}`-vectors containing both values. The embedding
/// constant of the pair is at most `c^2`, and every member maps the inner
/// cone into itself (verified numerically and reported).
pub fn construct_embedded_pair(sigma: &MatrixSet) -> Result<EmbeddedPair> {
    let n = sigma.dim();
    for (idx, a) in sigma.iter().enumerate() {
        if !a.is_strictly_positive() {
            return Err(Error::Domain(format!(
                "positivity required: matrix {idx} has a non-positive entry"
            )));
        }
    }
    let mut c = 1.0_f64;
    for a in sigma.iter() {
        for j in 0..n {
            let mut lo = f64::INFINITY;
            let mut hi = 0.0_f64;
            for i in 0..n {
                let v = a.get(i, j);
                lo = lo.min(v);
                hi = hi.max(v);
            }
            c = c.max(hi / lo);
        }
    }

    let outer = PolyhedralCone::orthant(n);
    let generators = ratio_cone_generators(n, c);
    let inner = PolyhedralCone::from_generators(n, generators)?;

    let tol = 1e-9;
    let mut pair = EmbeddedPair::new(outer, inner, tol)?;
    let mut invariant = true;
    for a in sigma.iter() {
        if !is_invariant(a, &pair.inner, tol)? {
            invariant = false;
            break;
        }
    }
    pair.beta_bound = Some(c * c);
    pair.column_ratio_c = Some(c);
    pair.inner_invariant = Some(invariant);
    Ok(pair)
}

/// Extreme rays of `{x >= 0 : max_i x_i <= c * min_i x_i}`: all vectors
/// with entries in `{1, c}` containing both values; the all-ones ray when
/// `c = 1` or `n = 1`.
fn ratio_cone_generators(n: usize, c: f64) -> Vec<Vec<f64>> {
    if c <= 1.0 || n == 1 {
        return vec![vec![1.0; n]];
    }
    let mut gens = Vec::with_capacity((1usize << n) - 2);
    for mask in 1..(1u64 << n) - 1 {
        let g = (0..n)
            .map(|i| if mask >> i & 1 == 1 { c } else { 1.0 })
            .collect();
        gens.push(g);
    }
    gens
}

/// Interval of line parameters `s` with `anchor + s * dir` inside `cone`.
///
/// `None` endpoints mark unboundedness in that direction; `Ok(None)` means
/// the line misses the cone entirely.
pub fn line_cone_interval(
    anchor: &[f64],
    dir: &[f64],
    cone: &PolyhedralCone,
    tol: f64,
) -> Result<Option<(Option<f64>, Option<f64>)>> {
    let n = cone.dim();
    let g = cone.generators().len();
    // Variables: s+ , s-, then one coefficient per generator.
    let num_vars = 2 + g;
    let constraints: Vec<LpConstraint> = (0..n)
        .map(|i| {
            let mut coeffs = vec![0.0; num_vars];
            coeffs[0] = dir[i];
            coeffs[1] = -dir[i];
            for (j, gen) in cone.generators().iter().enumerate() {
                coeffs[2 + j] = -gen[i];
            }
            LpConstraint {
                coeffs,
                relation: Relation::Eq,
                rhs: -anchor[i],
            }
        })
        .collect();
    let mut objective = vec![0.0; num_vars];
    objective[0] = 1.0;
    objective[1] = -1.0;

    let solve = |maximize: bool| -> Result<Option<Option<f64>>> {
        let p = LpProblem {
            num_vars,
            constraints: constraints.clone(),
            objective: Some(LpObjective {
                maximize,
                coeffs: objective.clone(),
            }),
        };
        match lp_solve(&p, tol)? {
            LpOutcome::Optimal { objective, .. } => Ok(Some(Some(objective))),
            LpOutcome::Unbounded => Ok(Some(None)),
            LpOutcome::Infeasible => Ok(None),
        }
    };

    let Some(hi) = solve(true)? else {
        return Ok(None);
    };
    let Some(lo) = solve(false)? else {
        return Ok(None);
    };
    Ok(Some((lo, hi)))
}

/// Monte-Carlo lower estimate of the embedding constant.
///
/// Samples lines through the inner cone, computes the chord intersections
/// with both cones, and returns the largest observed ratio. Lines whose
/// intersection with either cone is unbounded are discarded (the defining
/// ratio ranges over genuine segments only), as are orientations whose
/// denominator chord is shorter than [`MIN_CHORD`]. Deterministic for a
/// fixed seed, and nondecreasing in the sample count because every sample
/// index draws from its own derived stream.
pub fn estimate_beta(pair: &EmbeddedPair, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::Domain("sample count must be at least 1".into()));
    }
    let tol = 1e-9;
    if !is_embedded_pair(&pair.outer, &pair.inner, tol)? {
        return Err(Error::Domain(
            "embedding estimate requires an embedded pair".into(),
        ));
    }
    let n = pair.outer.dim();
    let inner_gens = pair.inner.generators();
    let mut best: Option<f64> = None;

    for sample in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(sample as u64 + 1);

        let mut anchor = vec![0.0; n];
        for gen in inner_gens {
            let w: f64 = rng.random_range(0.05..1.0);
            for (a, v) in anchor.iter_mut().zip(gen) {
                *a += w * v;
            }
        }
        let mut dir: Vec<f64> = (0..n).map(|_| standard_normal(&mut rng)).collect();
        let dn = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        if dn < 1e-12 {
            continue;
        }
        for v in dir.iter_mut() {
            *v /= dn;
        }

        let Some((Some(outer_lo), Some(outer_hi))) =
            line_cone_interval(&anchor, &dir, &pair.outer, tol)?
        else {
            continue;
        };
        let Some((Some(inner_lo), Some(inner_hi))) =
            line_cone_interval(&anchor, &dir, &pair.inner, tol)?
        else {
            continue;
        };
        // The inner segment sits inside the outer one; clamp LP noise.
        let inner_lo = inner_lo.max(outer_lo);
        let inner_hi = inner_hi.min(outer_hi);
        if inner_hi < inner_lo {
            continue;
        }
        for (entry, near, far) in [
            (outer_lo, inner_lo, inner_hi),
            (outer_hi, inner_hi, inner_lo),
        ] {
            let den = (near - entry).abs();
            let num = (far - entry).abs();
            if den >= MIN_CHORD {
                let ratio = num / den;
                best = Some(best.map_or(ratio, |b: f64| b.max(ratio)));
            }
        }
    }

    match best {
        Some(b) => Ok(b.max(1.0)),
        None => Err(Error::Sampling(format!(
            "no sampled line produced a measurable chord through the inner cone after {samples} samples"
        ))),
    }
}

fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller; 1 - u keeps the logarithm argument in (0, 1].
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

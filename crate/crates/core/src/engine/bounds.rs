//! Exhaustive product enumeration and the bound sequences it yields.
//!
//! For each product length `t` up to a horizon, five sequences are
//! computed over all products of that length: the largest operator norm
//! and spectral radius (upper and lower bounds on the joint spectral
//! radius after a `1/t` root), the averaged-trace lower bound, and the
//! smallest spectral radius and norm (upper bounds on the subradius).
//! Enumeration proceeds breadth-first, memoizing the previous layer of
//! prefix products, with a hard product budget.

use std::collections::HashMap;

use crate::cone::PolyhedralCone;
use crate::engine::conic::{conic_subradius_lower, ConicBound};
use crate::error::{Error, Result};
use crate::matrix::{operator_norm, Matrix, MatrixSet, NormKind};
use crate::spectral::spectral_radius;

/// Tolerance used by the per-product spectral radius computation.
const RHO_TOL: f64 = 1e-12;

/// Gap below which a noise-inverted interval is collapsed to its midpoint.
const COLLAPSE_TOL: f64 = 1e-9;

pub const RULE_MAX_NORM: &str = "max-norm-root";
pub const RULE_MAX_RHO: &str = "max-rho-root";
pub const RULE_TRACE_AVG: &str = "max-trace-avg-root";
pub const RULE_MIN_RHO: &str = "min-rho-root";
pub const RULE_MIN_NORM: &str = "min-norm-root";
pub const RULE_CONIC_LP: &str = "conic-lp";
pub const RULE_TRIVIAL_ZERO: &str = "trivial-zero";

/// Enumeration limits: a hard cap on the total number of products formed,
/// and an optional tolerance for merging numerically equal products.
#[derive(Debug, Clone)]
pub struct EnumConfig {
    pub budget: usize,
    pub dedup_tol: Option<f64>,
}

impl Default for EnumConfig {
    fn default() -> Self {
        Self {
            budget: 2_000_000,
            dedup_tol: None,
        }
    }
}

/// Closed interval with a flag marking that numerical noise inverted the
/// endpoints and the report fell back to the midpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    pub collapsed: bool,
}

impl Interval {
    pub fn from_endpoints(lower: f64, upper: f64) -> Self {
        if lower > upper && lower - upper < COLLAPSE_TOL {
            let mid = 0.5 * (lower + upper);
            Interval {
                lower: mid,
                upper: mid,
                collapsed: true,
            }
        } else {
            Interval {
                lower,
                upper,
                collapsed: false,
            }
        }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Which rule produced a bound, and at which product length.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub rule: String,
    pub t: Option<usize>,
}

/// Per-length bound sequences plus the best certified intervals.
///
/// The averaged-trace entries are absent at lengths where every product
/// has negative trace (no real `t`-th root exists there for even `t`).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub norm_kind: NormKind,
    pub t_values: Vec<usize>,
    pub upper_jsr: Vec<f64>,
    pub lower_jsr_rho: Vec<f64>,
    pub lower_jsr_trace: Vec<Option<f64>>,
    pub upper_sub_rho: Vec<f64>,
    pub upper_sub_norm: Vec<f64>,
    pub best_interval_jsr: Interval,
    pub best_interval_sub: Interval,
    pub jsr_lower_provenance: Provenance,
    pub jsr_upper_provenance: Provenance,
    pub sub_lower_provenance: Provenance,
    pub sub_upper_provenance: Provenance,
    pub products_enumerated: usize,
}

/// Number of products a full enumeration up to `t_max` forms.
fn enumeration_cost(m: usize, t_max: usize) -> u128 {
    let mut total: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 1..=t_max {
        layer = layer.saturating_mul(m as u128);
        total = total.saturating_add(layer);
    }
    total
}

fn check_budget(m: usize, t_max: usize, budget: usize) -> Result<()> {
    if enumeration_cost(m, t_max) <= budget as u128 {
        return Ok(());
    }
    let mut admissible = 0usize;
    for t in 1..=t_max {
        if enumeration_cost(m, t) <= budget as u128 {
            admissible = t;
        } else {
            break;
        }
    }
    Err(Error::Resource(format!(
        "enumerating {m}^t products up to t_max={t_max} exceeds the budget of {budget}; \
         the largest admissible t_max is {admissible}"
    )))
}

/// Streams the layers of products of each length to `visit`, keeping only
/// one layer in memory. Layers may be thinned by the dedup tolerance.
pub(crate) fn enumerate_layers<F>(
    sigma: &MatrixSet,
    t_max: usize,
    cfg: &EnumConfig,
    mut visit: F,
) -> Result<usize>
where
    F: FnMut(usize, &[Matrix]) -> Result<()>,
{
    if t_max == 0 {
        return Err(Error::Domain(
            "enumeration horizon must be at least 1".into(),
        ));
    }
    check_budget(sigma.len(), t_max, cfg.budget)?;
    let mut layer: Vec<Matrix> = sigma.iter().cloned().collect();
    if let Some(d) = cfg.dedup_tol {
        dedup_layer(&mut layer, d);
    }
    let mut produced = layer.len();
    visit(1, &layer)?;
    for t in 2..=t_max {
        let mut next = Vec::with_capacity(layer.len() * sigma.len());
        // Extend memoized suffixes on the left, so every word product is
        // grouped from the right (see `mat_product`).
        for suffix in &layer {
            for member in sigma.iter() {
                next.push(member.mul(suffix));
            }
        }
        if next.iter().any(|p| !p.all_finite()) {
            return Err(Error::Numerical(format!(
                "product entries overflowed the floating-point range at length {t}; \
                 rescale the set or lower t_max"
            )));
        }
        produced += next.len();
        if let Some(d) = cfg.dedup_tol {
            dedup_layer(&mut next, d);
        }
        visit(t, &next)?;
        layer = next;
    }
    Ok(produced)
}

/// Keeps the first representative of each group of products whose entries
/// agree after quantization to multiples of `tol`.
fn dedup_layer(layer: &mut Vec<Matrix>, tol: f64) {
    if tol <= 0.0 {
        return;
    }
    let mut seen: HashMap<Vec<i64>, ()> = HashMap::with_capacity(layer.len());
    layer.retain(|m| {
        let key: Vec<i64> = m
            .entries()
            .iter()
            .map(|v| (v / tol).round() as i64)
            .collect();
        seen.insert(key, ()).is_none()
    });
}

/// Exhaustive bound sequences for `t = 1..=t_max`.
pub fn enumerate_bounds(
    sigma: &MatrixSet,
    t_max: usize,
    norm_kind: NormKind,
    cfg: &EnumConfig,
) -> Result<BoundReport> {
    let n = sigma.dim() as f64;
    let mut upper_jsr = Vec::with_capacity(t_max);
    let mut lower_jsr_rho = Vec::with_capacity(t_max);
    let mut lower_jsr_trace: Vec<Option<f64>> = Vec::with_capacity(t_max);
    let mut upper_sub_rho = Vec::with_capacity(t_max);
    let mut upper_sub_norm = Vec::with_capacity(t_max);

    let products = enumerate_layers(sigma, t_max, cfg, |t, layer| {
        let mut max_norm = 0.0_f64;
        let mut max_rho = 0.0_f64;
        let mut max_trace: Option<f64> = None;
        let mut min_rho = f64::INFINITY;
        let mut min_norm = f64::INFINITY;
        for p in layer {
            let norm = operator_norm(p, norm_kind);
            let rho = spectral_radius(p, RHO_TOL)?;
            let tr = p.trace();
            max_norm = max_norm.max(norm);
            max_rho = max_rho.max(rho);
            min_norm = min_norm.min(norm);
            min_rho = min_rho.min(rho);
            if tr >= 0.0 {
                max_trace = Some(max_trace.map_or(tr, |m: f64| m.max(tr)));
            }
        }
        let inv_t = 1.0 / t as f64;
        upper_jsr.push(max_norm.powf(inv_t));
        lower_jsr_rho.push(max_rho.powf(inv_t));
        lower_jsr_trace.push(max_trace.map(|tr| (tr / n).powf(inv_t)));
        upper_sub_rho.push(min_rho.powf(inv_t));
        upper_sub_norm.push(min_norm.powf(inv_t));
        Ok(())
    })?;

    let (jsr_lo_t, jsr_lo) = argmax(&lower_jsr_rho);
    let (jsr_hi_t, jsr_hi) = argmin(&upper_jsr);
    let (sub_hi_rho_t, sub_hi_rho) = argmin(&upper_sub_rho);
    let (sub_hi_norm_t, sub_hi_norm) = argmin(&upper_sub_norm);
    let (sub_hi, sub_hi_rule, sub_hi_t) = if sub_hi_rho <= sub_hi_norm {
        (sub_hi_rho, RULE_MIN_RHO, sub_hi_rho_t)
    } else {
        (sub_hi_norm, RULE_MIN_NORM, sub_hi_norm_t)
    };

    Ok(BoundReport {
        norm_kind,
        t_values: (1..=t_max).collect(),
        upper_jsr,
        lower_jsr_rho,
        lower_jsr_trace,
        upper_sub_rho,
        upper_sub_norm,
        best_interval_jsr: Interval::from_endpoints(jsr_lo, jsr_hi),
        best_interval_sub: Interval::from_endpoints(0.0, sub_hi),
        jsr_lower_provenance: Provenance {
            rule: RULE_MAX_RHO.into(),
            t: Some(jsr_lo_t),
        },
        jsr_upper_provenance: Provenance {
            rule: RULE_MAX_NORM.into(),
            t: Some(jsr_hi_t),
        },
        sub_lower_provenance: Provenance {
            rule: RULE_TRIVIAL_ZERO.into(),
            t: None,
        },
        sub_upper_provenance: Provenance {
            rule: sub_hi_rule.into(),
            t: Some(sub_hi_t),
        },
        products_enumerated: products,
    })
}

fn argmax(values: &[f64]) -> (usize, f64) {
    let mut best_t = 1;
    let mut best = f64::NEG_INFINITY;
    for (i, &v) in values.iter().enumerate() {
        if v > best {
            best = v;
            best_t = i + 1;
        }
    }
    (best_t, best)
}

fn argmin(values: &[f64]) -> (usize, f64) {
    let mut best_t = 1;
    let mut best = f64::INFINITY;
    for (i, &v) in values.iter().enumerate() {
        if v < best {
            best = v;
            best_t = i + 1;
        }
    }
    (best_t, best)
}

/// Subradius interval: conic lower bound (when a cone is supplied and the
/// set leaves it invariant) against the best single-product upper bound.
#[derive(Debug, Clone, PartialEq)]
pub struct SubradiusOutcome {
    pub interval: Interval,
    pub report: BoundReport,
    /// Conic certificate, present when the cone check succeeded.
    pub conic: Option<ConicBound>,
    /// `None` when no cone was supplied; otherwise whether every member
    /// left it invariant. A failed check downgrades the lower bound to
    /// zero instead of erroring.
    pub cone_invariant: Option<bool>,
    pub lower_provenance: Provenance,
}

pub fn subradius_bounds(
    sigma: &MatrixSet,
    t_max: usize,
    cone: Option<&PolyhedralCone>,
    norm_kind: NormKind,
    tol: f64,
    cfg: &EnumConfig,
) -> Result<SubradiusOutcome> {
    let report = enumerate_bounds(sigma, t_max, norm_kind, cfg)?;
    let upper = report.best_interval_sub.upper;
    let mut lower = 0.0;
    let mut conic = None;
    let mut cone_invariant = None;
    let mut lower_provenance = Provenance {
        rule: RULE_TRIVIAL_ZERO.into(),
        t: None,
    };
    if let Some(k) = cone {
        let invariant = sigma.iter().try_fold(true, |acc, a| {
            crate::cone::is_invariant(a, k, tol).map(|ok| acc && ok)
        })?;
        cone_invariant = Some(invariant);
        if invariant {
            let bound = conic_subradius_lower(sigma, k, tol)?;
            lower = bound.r;
            lower_provenance = Provenance {
                rule: RULE_CONIC_LP.into(),
                t: None,
            };
            conic = Some(bound);
        }
    }
    Ok(SubradiusOutcome {
        interval: Interval::from_endpoints(lower, upper),
        report,
        conic,
        cone_invariant,
        lower_provenance,
    })
}

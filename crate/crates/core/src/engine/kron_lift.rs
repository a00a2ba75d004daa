//! Kronecker-lift bounds on the joint spectral radius.
//!
//! For a set leaving a cone invariant, the spectral radius of the sum of
//! the k-th Kronecker powers of the members sandwiches the k-th power of
//! the joint spectral radius between itself and itself divided by the
//! member count, and the sandwich tightens as k grows.

use crate::cone::{is_invariant, PolyhedralCone};
use crate::engine::bounds::EnumConfig;
use crate::engine::enumerate_layers;
use crate::error::{Error, Result};
use crate::matrix::{Matrix, MatrixSet};
use crate::spectral::spectral_radius;

const RHO_TOL: f64 = 1e-12;

/// Spectral radii of the lifted sums and the resulting sandwich.
#[derive(Debug, Clone, PartialEq)]
pub struct KronReport {
    pub k_values: Vec<usize>,
    /// `rho(sum of k-th Kronecker powers)` per k.
    pub rho_sum: Vec<f64>,
    /// `rho_sum^(1/k)`: upper end of the sandwich.
    pub upper_k: Vec<f64>,
    /// `(rho_sum / m)^(1/k)`: lower end of the sandwich.
    pub lower_k: Vec<f64>,
    pub m: usize,
    /// `None` when no cone was supplied (invariance caller-asserted);
    /// otherwise the result of checking every member against the cone.
    /// `Some(false)` means the sandwich is not certified.
    pub cone_checked: Option<bool>,
}

impl KronReport {
    pub fn certified(&self) -> bool {
        self.cone_checked == Some(true)
    }
}

fn lifted_sum(sigma: &MatrixSet, k: usize, cap: usize) -> Result<Matrix> {
    let mut sum: Option<Matrix> = None;
    for a in sigma.iter() {
        let lifted = a.kron_power(k, cap)?;
        sum = Some(match sum {
            Some(s) => s.add(&lifted),
            None => lifted,
        });
    }
    Ok(sum.expect("matrix set is nonempty"))
}

/// Lifted-sum sandwich for `k = 1..=k_max`.
pub fn kron_lift_bounds(
    sigma: &MatrixSet,
    k_max: usize,
    cone: Option<&PolyhedralCone>,
    dim_cap: usize,
    tol: f64,
) -> Result<KronReport> {
    if k_max == 0 {
        return Err(Error::Domain("lift order must be at least 1".into()));
    }
    let mut lifted_dim: usize = 1;
    for _ in 0..k_max {
        lifted_dim = lifted_dim
            .checked_mul(sigma.dim())
            .filter(|&d| d <= dim_cap)
            .ok_or_else(|| {
                Error::Size(format!(
                    "lifted dimension {}^{k_max} exceeds cap {dim_cap}",
                    sigma.dim()
                ))
            })?;
    }
    let cone_checked = match cone {
        None => None,
        Some(k) => {
            let ok = sigma
                .iter()
                .try_fold(true, |acc, a| is_invariant(a, k, tol).map(|inv| acc && inv))?;
            Some(ok)
        }
    };
    let m = sigma.len() as f64;
    let mut rho_sum = Vec::with_capacity(k_max);
    let mut upper_k = Vec::with_capacity(k_max);
    let mut lower_k = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let sum = lifted_sum(sigma, k, dim_cap)?;
        let rho = spectral_radius(&sum, RHO_TOL)?;
        rho_sum.push(rho);
        let inv_k = 1.0 / k as f64;
        upper_k.push(rho.powf(inv_k));
        lower_k.push((rho / m).powf(inv_k));
    }
    Ok(KronReport {
        k_values: (1..=k_max).collect(),
        rho_sum,
        upper_k,
        lower_k,
        m: sigma.len(),
        cone_checked,
    })
}

/// Both sides of the lifted-trace inequality
/// `trace((sum_A Aoxk / m)^t)^(1/(kt)) <= max over length-t products of
/// trace^(1/t)`, each side marked undefined when a negative trace leaves
/// no real root.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceKronCheck {
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    /// `lhs <= rhs + tol` when both sides are defined.
    pub holds: Option<bool>,
}

pub fn trace_kron_inequality(
    sigma: &MatrixSet,
    k: usize,
    t: usize,
    dim_cap: usize,
    tol: f64,
) -> Result<TraceKronCheck> {
    if k == 0 || t == 0 {
        return Err(Error::Domain(
            "lift order and product length must be at least 1".into(),
        ));
    }
    let m = sigma.len() as f64;
    let averaged = lifted_sum(sigma, k, dim_cap)?.scale(1.0 / m);
    let tr = averaged.mat_power(t).trace();
    let lhs = (tr >= 0.0).then(|| tr.powf(1.0 / (k as f64 * t as f64)));

    let mut max_trace: Option<f64> = None;
    enumerate_layers(sigma, t, &EnumConfig::default(), |length, layer| {
        if length == t {
            for p in layer {
                let ptr = p.trace();
                if ptr >= 0.0 {
                    max_trace = Some(max_trace.map_or(ptr, |b: f64| b.max(ptr)));
                }
            }
        }
        Ok(())
    })?;
    let rhs = max_trace.map(|v| v.powf(1.0 / t as f64));

    let holds = match (lhs, rhs) {
        (Some(l), Some(r)) => Some(l <= r + tol),
        _ => None,
    };
    Ok(TraceKronCheck { lhs, rhs, holds })
}

//! Hausdorff distance between matrix sets and the perturbation study
//! behind the continuity checks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cone::PolyhedralCone;
use crate::engine::bounds::{subradius_bounds, EnumConfig, Interval};
use crate::error::{Error, Result};
use crate::matrix::{operator_norm, Matrix, MatrixSet, NormKind};

/// Norm used to measure distances between set members.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetNorm {
    Operator(NormKind),
    /// Largest absolute entry of the difference. Not an induced norm, but
    /// the natural gauge for entrywise perturbations.
    MaxEntry,
}

fn member_distance(a: &Matrix, b: &Matrix, norm: SetNorm) -> f64 {
    let diff = a.sub(b);
    match norm {
        SetNorm::Operator(kind) => operator_norm(&diff, kind),
        SetNorm::MaxEntry => diff.max_abs(),
    }
}

/// Symmetric sup-inf distance between two finite matrix sets.
pub fn hausdorff_distance(a: &MatrixSet, b: &MatrixSet, norm: SetNorm) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::Domain(format!(
            "matrix sets have different dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let directed = |from: &MatrixSet, to: &MatrixSet| -> f64 {
        from.iter()
            .map(|x| {
                to.iter()
                    .map(|y| member_distance(x, y, norm))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    Ok(directed(a, b).max(directed(b, a)))
}

/// Worst deviations observed at one perturbation radius.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaOutcome {
    pub delta: f64,
    /// Largest realized set distance (max-entry norm) over the trials.
    pub max_realized_hausdorff: f64,
    pub max_jsr_mid_deviation: f64,
    pub max_sub_mid_deviation: f64,
    /// Intervals of the trial with the worst subradius deviation.
    pub worst_jsr_interval: Interval,
    pub worst_sub_interval: Interval,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationReport {
    pub deltas: Vec<f64>,
    pub outcomes: Vec<DeltaOutcome>,
    pub trials: usize,
    pub seed: u64,
    pub t_max: usize,
    /// Entrywise perturbations were constrained to keep all entries
    /// strictly positive (enabled automatically for positive inputs).
    pub positivity_mode: bool,
    pub base_jsr: Interval,
    pub base_sub: Interval,
}

/// Entrywise-uniform perturbation study.
///
/// For each radius and trial, every entry moves by an independent uniform
/// draw from `[-delta, delta]`; the realized set distance is reported
/// rather than assumed equal to the radius. Strictly positive inputs
/// switch on positivity mode, which requires every radius to stay below
/// the smallest entry so the perturbed sets remain positive. Deterministic
/// for a fixed seed: each (radius, trial) pair draws from its own derived
/// stream.
#[allow(clippy::too_many_arguments)]
pub fn perturbation_study(
    sigma: &MatrixSet,
    deltas: &[f64],
    trials: usize,
    seed: u64,
    t_max: usize,
    cone: Option<&PolyhedralCone>,
    norm_kind: NormKind,
    tol: f64,
    cfg: &EnumConfig,
) -> Result<PerturbationReport> {
    if trials == 0 {
        return Err(Error::Domain("trial count must be at least 1".into()));
    }
    if deltas.is_empty() {
        return Err(Error::Domain(
            "at least one perturbation radius is required".into(),
        ));
    }
    for pair in deltas.windows(2) {
        if pair[1] > pair[0] {
            return Err(Error::Domain(
                "perturbation radii must be nonincreasing".into(),
            ));
        }
    }
    if let Some(&bad) = deltas.iter().find(|&&d| d < 0.0 || !d.is_finite()) {
        return Err(Error::Domain(format!("invalid perturbation radius {bad}")));
    }
    let positivity_mode = sigma.iter().all(|a| a.is_strictly_positive());
    if positivity_mode {
        let min_entry = sigma
            .iter()
            .map(|a| a.min_entry())
            .fold(f64::INFINITY, f64::min);
        if let Some(&bad) = deltas.iter().find(|&&d| d >= min_entry) {
            return Err(Error::Domain(format!(
                "radius {bad} is not below the smallest entry {min_entry}; positivity cannot \
                 be preserved"
            )));
        }
    }

    let base = subradius_bounds(sigma, t_max, cone, norm_kind, tol, cfg)?;
    let base_jsr = base.report.best_interval_jsr;
    let base_sub = base.interval;

    let n = sigma.dim();
    let mut outcomes = Vec::with_capacity(deltas.len());
    for (di, &delta) in deltas.iter().enumerate() {
        let mut max_dist = 0.0_f64;
        let mut max_jsr_dev = 0.0_f64;
        let mut max_sub_dev = 0.0_f64;
        let mut worst_jsr = base_jsr;
        let mut worst_sub = base_sub;
        for trial in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((di * trials + trial) as u64 + 1);
            let members: Vec<Matrix> = sigma
                .iter()
                .map(|a| {
                    let data = a
                        .entries()
                        .iter()
                        .map(|&v| {
                            if delta > 0.0 {
                                v + rng.random_range(-delta..=delta)
                            } else {
                                v
                            }
                        })
                        .collect();
                    Matrix::new(n, data)
                })
                .collect::<Result<_>>()?;
            let perturbed = MatrixSet::new(members)?;
            debug_assert!(!positivity_mode || perturbed.iter().all(|a| a.is_strictly_positive()));

            let dist = hausdorff_distance(sigma, &perturbed, SetNorm::MaxEntry)?;
            max_dist = max_dist.max(dist);

            let outcome = subradius_bounds(&perturbed, t_max, cone, norm_kind, tol, cfg)?;
            let jsr_dev = (outcome.report.best_interval_jsr.midpoint() - base_jsr.midpoint()).abs();
            let sub_dev = (outcome.interval.midpoint() - base_sub.midpoint()).abs();
            max_jsr_dev = max_jsr_dev.max(jsr_dev);
            if sub_dev >= max_sub_dev {
                max_sub_dev = sub_dev;
                worst_jsr = outcome.report.best_interval_jsr;
                worst_sub = outcome.interval;
            }
        }
        outcomes.push(DeltaOutcome {
            delta,
            max_realized_hausdorff: max_dist,
            max_jsr_mid_deviation: max_jsr_dev,
            max_sub_mid_deviation: max_sub_dev,
            worst_jsr_interval: worst_jsr,
            worst_sub_interval: worst_sub,
        });
    }

    Ok(PerturbationReport {
        deltas: deltas.to_vec(),
        outcomes,
        trials,
        seed,
        t_max,
        positivity_mode,
        base_jsr,
        base_sub,
    })
}

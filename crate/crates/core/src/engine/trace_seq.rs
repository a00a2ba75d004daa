//! Maximal trace and maximal spectral radius sequences over product
//! lengths, with a convergence diagnostic.
//!
//! Both sequences approach the joint spectral radius when the set shares
//! an invariant cone and contains a primitive member; without one they
//! may oscillate forever. The diagnostic reports whether an
//! orthant-primitive member exists and how wide the sequences still swing
//! over the final window of lengths.

use crate::cone::{is_invariant, is_primitive, PolyhedralCone, Primitivity};
use crate::engine::bounds::EnumConfig;
use crate::engine::enumerate_layers;
use crate::error::Result;
use crate::matrix::MatrixSet;
use crate::spectral::spectral_radius;

const RHO_TOL: f64 = 1e-12;

/// Number of trailing lengths inspected for residual oscillation.
pub const OSCILLATION_WINDOW: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct TraceSeqReport {
    pub t_values: Vec<usize>,
    /// `max trace(A)^(1/t)` over products with nonnegative trace; absent
    /// at lengths where every product has negative trace.
    pub s: Vec<Option<f64>>,
    /// `max rho(A)^(1/t)` over all products.
    pub r: Vec<f64>,
    pub diagnostic: TraceDiagnostic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceDiagnostic {
    /// Every member is entrywise nonnegative (leaves the orthant invariant).
    pub all_members_nonnegative: bool,
    /// Some member is primitive on the orthant.
    pub has_primitive_member: bool,
    /// Indices of the orthant-primitive members.
    pub primitive_members: Vec<usize>,
    /// Inclusive window of lengths inspected for oscillation.
    pub window: (usize, usize),
    /// Max minus min of the defined trace-sequence entries in the window.
    pub s_oscillation: Option<f64>,
    /// Max minus min of the radius sequence in the window.
    pub r_oscillation: f64,
    /// Number of lengths at which the trace sequence is undefined.
    pub s_undefined: usize,
}

pub fn trace_sequence(sigma: &MatrixSet, t_max: usize, cfg: &EnumConfig) -> Result<TraceSeqReport> {
    let mut s: Vec<Option<f64>> = Vec::with_capacity(t_max);
    let mut r: Vec<f64> = Vec::with_capacity(t_max);
    enumerate_layers(sigma, t_max, cfg, |t, layer| {
        let mut max_trace: Option<f64> = None;
        let mut max_rho = 0.0_f64;
        for p in layer {
            let tr = p.trace();
            if tr >= 0.0 {
                max_trace = Some(max_trace.map_or(tr, |m: f64| m.max(tr)));
            }
            max_rho = max_rho.max(spectral_radius(p, RHO_TOL)?);
        }
        let inv_t = 1.0 / t as f64;
        s.push(max_trace.map(|tr| tr.powf(inv_t)));
        r.push(max_rho.powf(inv_t));
        Ok(())
    })?;

    let orthant = PolyhedralCone::orthant(sigma.dim());
    let all_members_nonnegative = sigma.iter().all(|a| a.is_nonnegative());
    let mut primitive_members = Vec::new();
    for (i, a) in sigma.iter().enumerate() {
        if a.is_nonnegative() && is_invariant(a, &orthant, 1e-12)? {
            if let Primitivity::Primitive(_) = is_primitive(a, &orthant, None, 1e-12)? {
                primitive_members.push(i);
            }
        }
    }

    let win_lo = t_max.saturating_sub(OSCILLATION_WINDOW - 1).max(1);
    let window = (win_lo, t_max);
    let s_window: Vec<f64> = s[win_lo - 1..].iter().flatten().copied().collect();
    let s_oscillation = if s_window.is_empty() {
        None
    } else {
        let hi = s_window.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = s_window.iter().copied().fold(f64::INFINITY, f64::min);
        Some(hi - lo)
    };
    let r_window = &r[win_lo - 1..];
    let r_oscillation = r_window.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - r_window.iter().copied().fold(f64::INFINITY, f64::min);

    Ok(TraceSeqReport {
        t_values: (1..=t_max).collect(),
        diagnostic: TraceDiagnostic {
            all_members_nonnegative,
            has_primitive_member: !primitive_members.is_empty(),
            primitive_members,
            window,
            s_oscillation,
            r_oscillation,
            s_undefined: s.iter().filter(|v| v.is_none()).count(),
        },
        s,
        r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use approx::assert_abs_diff_eq;

    fn m2(rows: [[f64; 2]; 2]) -> Matrix {
        Matrix::from_rows(&[rows[0].to_vec(), rows[1].to_vec()]).unwrap()
    }

    #[test]
    fn scaled_identity_sequences() {
        // trace(2^t I) = 2^(t+1), so s[t] = 2 * 2^(1/t) while r[t] = 2.
        let sigma = MatrixSet::new(vec![m2([[2.0, 0.0], [0.0, 2.0]])]).unwrap();
        let report = trace_sequence(&sigma, 6, &EnumConfig::default()).unwrap();
        for (i, t) in report.t_values.iter().enumerate() {
            let expected = 2.0 * 2.0_f64.powf(1.0 / *t as f64);
            assert_abs_diff_eq!(report.s[i].unwrap(), expected, epsilon = 1e-10);
            assert_abs_diff_eq!(report.r[i], 2.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn odd_even_pair_oscillates_without_primitive_member() {
        let sigma = MatrixSet::new(vec![
            m2([[0.0, 1.0], [0.0, 0.0]]),
            m2([[0.0, 0.0], [1.0, 0.0]]),
        ])
        .unwrap();
        let report = trace_sequence(&sigma, 10, &EnumConfig::default()).unwrap();
        assert!(!report.diagnostic.has_primitive_member);
        assert!(report.diagnostic.all_members_nonnegative);
        for (i, t) in report.t_values.iter().enumerate() {
            let expected = if t % 2 == 0 { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(report.s[i].unwrap(), expected, epsilon = 1e-12);
            assert_abs_diff_eq!(report.r[i], expected, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(
            report.diagnostic.s_oscillation.unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(report.diagnostic.r_oscillation, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn primitive_pair_settles() {
        let sigma = MatrixSet::new(vec![
            m2([[1.0, 1.0], [1.0, 0.0]]),
            m2([[0.0, 1.0], [1.0, 1.0]]),
        ])
        .unwrap();
        let report = trace_sequence(&sigma, 16, &EnumConfig::default()).unwrap();
        assert!(report.diagnostic.has_primitive_member);
        assert_eq!(report.diagnostic.primitive_members, vec![0, 1]);
        assert!(report.diagnostic.s_oscillation.unwrap() < 0.05);
        assert!(report.diagnostic.r_oscillation < 0.05);
        assert_eq!(report.diagnostic.window, (11, 16));
    }

    #[test]
    fn negative_traces_are_marked_undefined() {
        let sigma = MatrixSet::new(vec![m2([[-1.0, 0.0], [0.0, -1.0]])]).unwrap();
        let report = trace_sequence(&sigma, 4, &EnumConfig::default()).unwrap();
        // Odd powers of -I have trace -2; even powers have trace 2.
        assert!(report.s[0].is_none());
        assert!(report.s[1].is_some());
        assert!(report.s[2].is_none());
        assert!(report.s[3].is_some());
        assert_eq!(report.diagnostic.s_undefined, 2);
    }
}

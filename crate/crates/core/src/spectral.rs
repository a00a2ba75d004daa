//! Spectral radius and eigenvalue computation for dense real matrices.
//!
//! Dimensions up to three use closed forms for the characteristic
//! polynomial (with a Newton polish); larger matrices go through a real
//! Schur reduction. A norm-doubling estimate serves as a fallback that
//! converges to the spectral radius from above, so bound engines stay
//! on the safe side even when the Schur iteration gives up.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::matrix::{operator_norm, Matrix, NormKind};

pub type C64 = Complex<f64>;

/// All eigenvalues of `a`, in unspecified order.
pub fn eigenvalues(a: &Matrix) -> Result<Vec<C64>> {
    // Scale to unit max entry so the closed forms stay clear of overflow;
    // eigenvalues are homogeneous in the matrix.
    let scale = a.max_abs();
    if scale == 0.0 {
        return Ok(vec![C64::new(0.0, 0.0); a.dim()]);
    }
    let b = a.scale(1.0 / scale);
    let eigs = match b.dim() {
        1 => vec![C64::new(b.get(0, 0), 0.0)],
        2 => eigenvalues2(&b),
        3 => eigenvalues3(&b),
        _ => eigenvalues_schur(&b)?,
    };
    Ok(eigs.into_iter().map(|z| z * scale).collect())
}

fn eigenvalues2(a: &Matrix) -> Vec<C64> {
    let tr = a.trace();
    let det = a.get(0, 0) * a.get(1, 1) - a.get(0, 1) * a.get(1, 0);
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        let s = disc.sqrt();
        // Evaluate the larger-magnitude root first to avoid cancellation.
        let r1 = if tr >= 0.0 {
            0.5 * (tr + s)
        } else {
            0.5 * (tr - s)
        };
        let r2 = if r1 != 0.0 {
            det / r1
        } else {
            0.5 * (tr - s.copysign(tr))
        };
        vec![C64::new(r1, 0.0), C64::new(r2, 0.0)]
    } else {
        let im = 0.5 * (-disc).sqrt();
        vec![C64::new(0.5 * tr, im), C64::new(0.5 * tr, -im)]
    }
}

fn eigenvalues3(a: &Matrix) -> Vec<C64> {
    // Characteristic polynomial l^3 - c2 l^2 + c1 l - c0.
    let c2 = a.trace();
    let minor = |i: usize, j: usize| a.get(i, i) * a.get(j, j) - a.get(i, j) * a.get(j, i);
    let c1 = minor(0, 1) + minor(0, 2) + minor(1, 2);
    let c0 = a.get(0, 0) * minor(1, 2)
        - a.get(0, 1) * (a.get(1, 0) * a.get(2, 2) - a.get(1, 2) * a.get(2, 0))
        + a.get(0, 2) * (a.get(1, 0) * a.get(2, 1) - a.get(1, 1) * a.get(2, 0));

    // Depressed cubic y^3 + p y + q with l = y + c2/3.
    let shift = c2 / 3.0;
    let p = c1 - c2 * c2 / 3.0;
    let q = -2.0 * c2 * c2 * c2 / 27.0 + c1 * c2 / 3.0 - c0;
    let mut roots = depressed_cubic_roots(p, q);
    for r in roots.iter_mut() {
        *r += shift;
        *r = polish_cubic_root(*r, c2, c1, c0);
    }
    roots
}

fn depressed_cubic_roots(p: f64, q: f64) -> Vec<C64> {
    let half_q = q / 2.0;
    let disc = half_q * half_q + p * p * p / 27.0;
    if disc > 0.0 {
        // One real root, one complex conjugate pair. Pick the cube root of
        // the larger-magnitude branch so u and v never cancel.
        let sd = disc.sqrt();
        let w = if q >= 0.0 { -half_q - sd } else { -half_q + sd };
        let u = w.cbrt();
        let v = if u != 0.0 { -p / (3.0 * u) } else { 0.0 };
        let real = u + v;
        let re = -0.5 * real;
        let im = (3.0_f64.sqrt() / 2.0) * (u - v).abs();
        vec![C64::new(real, 0.0), C64::new(re, im), C64::new(re, -im)]
    } else {
        // Three real roots (trigonometric form); p <= 0 here.
        let mp3 = (-p / 3.0).max(0.0);
        let amp = 2.0 * mp3.sqrt();
        if amp == 0.0 {
            return vec![C64::new(0.0, 0.0); 3];
        }
        let cos_arg = (3.0 * q / (p * amp)).clamp(-1.0, 1.0);
        let theta = cos_arg.acos() / 3.0;
        (0..3)
            .map(|k| {
                let angle = theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                C64::new(amp * angle.cos(), 0.0)
            })
            .collect()
    }
}

fn polish_cubic_root(z0: C64, c2: f64, c1: f64, c0: f64) -> C64 {
    let mut z = z0;
    for _ in 0..3 {
        let f = ((z - c2) * z + c1) * z - c0;
        let df = (z * 3.0 - 2.0 * c2) * z + c1;
        if df.norm() < 1e-300 {
            break;
        }
        let step = f / df;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
    }
    // A real matrix has conjugate-symmetric spectrum; snap tiny imaginary
    // parts produced by rounding.
    if z.im.abs() <= 1e-12 * z.norm().max(1.0) * 1e-2 {
        z.im = 0.0;
    }
    z
}

fn eigenvalues_schur(a: &Matrix) -> Result<Vec<C64>> {
    let n = a.dim();
    let dm = DMatrix::from_row_slice(n, n, a.entries());
    let schur = nalgebra::linalg::Schur::try_new(dm, f64::EPSILON, 100_000).ok_or_else(|| {
        Error::Numerical(format!(
            "Schur reduction did not converge for a {n}x{n} matrix"
        ))
    })?;
    let eigs = schur.complex_eigenvalues();
    Ok(eigs.iter().copied().collect())
}

/// Maximal eigenvalue modulus of `a`, absolute error at most `tol`.
///
/// Returns exactly 0 for the zero matrix. If the eigenvalue reduction does
/// not converge, falls back to the norm-doubling estimate
/// `||A^(2^j)||^(1/2^j)`, refined until successive estimates differ by
/// less than `tol` (the fallback approaches the true value from above).
pub fn spectral_radius(a: &Matrix, tol: f64) -> Result<f64> {
    if tol <= 0.0 {
        return Err(Error::Domain(
            "spectral radius tolerance must be positive".into(),
        ));
    }
    if a.is_zero() {
        return Ok(0.0);
    }
    match eigenvalues(a) {
        Ok(eigs) => Ok(eigs.iter().map(|z| z.norm()).fold(0.0, f64::max)),
        Err(_) => gelfand_upper(a, tol),
    }
}

/// Norm-doubling upper estimate of the spectral radius.
pub fn gelfand_upper(a: &Matrix, tol: f64) -> Result<f64> {
    let n0 = operator_norm(a, NormKind::Two);
    if n0 == 0.0 {
        return Ok(0.0);
    }
    let mut log_norm = n0.ln();
    let mut unit = a.scale(1.0 / n0);
    let mut estimate = n0;
    for j in 1..=48u32 {
        let squared = unit.mul(&unit);
        let sn = operator_norm(&squared, NormKind::Two);
        if sn == 0.0 {
            return Ok(0.0);
        }
        log_norm = 2.0 * log_norm + sn.ln();
        unit = squared.scale(1.0 / sn);
        let next = (log_norm / 2f64.powi(j as i32)).exp();
        if (estimate - next).abs() < tol {
            return Ok(next);
        }
        estimate = next;
    }
    Err(Error::Numerical(format!(
        "norm-doubling estimate did not stabilize within tolerance {tol}"
    )))
}

/// Dominant-eigenvalue summary used by the Perron–Frobenius style checks.
#[derive(Debug, Clone)]
pub struct DominantEigen {
    /// Eigenvalue of maximal modulus.
    pub value: C64,
    /// No other eigenvalue comes within `tol` of the maximal modulus.
    pub unique: bool,
    /// The dominant eigenvalue is real and strictly positive (within `tol`).
    pub real_positive: bool,
}

pub fn dominant_eigenvalue(a: &Matrix, tol: f64) -> Result<DominantEigen> {
    let eigs = eigenvalues(a)?;
    let top = eigs
        .iter()
        .copied()
        .max_by(|x, y| x.norm().total_cmp(&y.norm()))
        .expect("matrix has at least one eigenvalue");
    let scale = top.norm().max(1.0);
    let near = eigs
        .iter()
        .filter(|z| z.norm() >= top.norm() - tol * scale)
        .count();
    Ok(DominantEigen {
        value: top,
        unique: near == 1,
        real_positive: top.im.abs() <= tol * scale && top.re > 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::MatrixSet;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m2(rows: [[f64; 2]; 2]) -> Matrix {
        Matrix::from_rows(&[rows[0].to_vec(), rows[1].to_vec()]).unwrap()
    }

    fn m3(rows: [[f64; 3]; 3]) -> Matrix {
        Matrix::from_rows(&[rows[0].to_vec(), rows[1].to_vec(), rows[2].to_vec()]).unwrap()
    }

    #[test]
    fn trivial_radii() {
        assert_abs_diff_eq!(spectral_radius(&Matrix::identity(2), 1e-10).unwrap(), 1.0);
        let nilp = m2([[0.0, 1.0], [0.0, 0.0]]);
        assert_abs_diff_eq!(spectral_radius(&nilp, 1e-10).unwrap(), 0.0);
        let rot = m2([[0.0, -1.0], [1.0, 0.0]]);
        assert_abs_diff_eq!(spectral_radius(&rot, 1e-10).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(spectral_radius(&Matrix::zeros(3), 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn symmetric_2x2_and_kron_square() {
        let a = m2([[2.0, 1.0], [1.0, 2.0]]);
        assert_abs_diff_eq!(spectral_radius(&a, 1e-10).unwrap(), 3.0, epsilon = 1e-10);
        let a2 = a.kron_power(2, 4096).unwrap();
        assert_abs_diff_eq!(spectral_radius(&a2, 1e-10).unwrap(), 9.0, epsilon = 1e-8);
    }

    #[test]
    fn cubic_matches_schur_on_random_3x3() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let data: Vec<f64> = (0..9).map(|_| rng.random_range(-3.0..3.0)).collect();
            let a = Matrix::new(3, data).unwrap();
            let via_cubic = spectral_radius(&a, 1e-10).unwrap();
            let via_schur = {
                let dm = DMatrix::from_row_slice(3, 3, a.entries());
                dm.complex_eigenvalues()
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max)
            };
            assert_abs_diff_eq!(via_cubic, via_schur, epsilon = 1e-8);
        }
    }

    #[test]
    fn norm_power_roots_dominate_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.random_range(2..=4usize);
            let data: Vec<f64> = (0..n * n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let a = Matrix::new(n, data).unwrap();
            let rho = spectral_radius(&a, 1e-10).unwrap();
            for t in [1usize, 2, 4, 8] {
                let bound = operator_norm(&a.mat_power(t), NormKind::Two).powf(1.0 / t as f64);
                assert!(
                    rho <= bound + 1e-8,
                    "rho {rho} exceeded norm bound {bound} at t={t}"
                );
            }
        }
    }

    #[test]
    fn norm_dominates_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let n = rng.random_range(1..=5usize);
            let data: Vec<f64> = (0..n * n).map(|_| rng.random_range(-4.0..4.0)).collect();
            let a = Matrix::new(n, data).unwrap();
            let rho = spectral_radius(&a, 1e-10).unwrap();
            for kind in [NormKind::Two, NormKind::One, NormKind::Inf] {
                assert!(operator_norm(&a, kind) >= rho - 1e-9);
            }
        }
    }

    #[test]
    fn kron_power_radius_multiplicativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..40 {
            let data: Vec<f64> = (0..4).map(|_| rng.random_range(-2.0..2.0)).collect();
            let a = Matrix::new(2, data).unwrap();
            let rho = spectral_radius(&a, 1e-12).unwrap();
            for k in [2usize, 3] {
                let lifted = a.kron_power(k, 4096).unwrap();
                let lifted_rho = spectral_radius(&lifted, 1e-12).unwrap();
                let expected = rho.powi(k as i32);
                assert!(
                    (lifted_rho - expected).abs() <= 1e-8 * expected.max(1.0),
                    "rho(kron^{k}) = {lifted_rho}, rho^{k} = {expected}"
                );
            }
        }
    }

    #[test]
    fn dominant_eigenvalue_flags() {
        let pos = m2([[1.0, 1.0], [1.0, 1.0]]);
        let d = dominant_eigenvalue(&pos, 1e-8).unwrap();
        assert!(d.unique && d.real_positive);
        assert_abs_diff_eq!(d.value.re, 2.0, epsilon = 1e-10);

        let perm = m2([[0.0, 1.0], [1.0, 0.0]]);
        let d = dominant_eigenvalue(&perm, 1e-8).unwrap();
        assert!(
            !d.unique,
            "permutation has eigenvalues 1 and -1 of equal modulus"
        );
    }

    #[test]
    fn schur_path_matches_block_construction() {
        // Block diagonal embedding: spectrum is the union of the blocks'.
        let mut a = Matrix::zeros(4);
        a.set(0, 0, 2.0);
        a.set(0, 1, 1.0);
        a.set(1, 0, 1.0);
        a.set(1, 1, 2.0);
        a.set(2, 2, 0.0);
        a.set(2, 3, -1.0);
        a.set(3, 2, 1.0);
        a.set(3, 3, 0.0);
        let rho = spectral_radius(&a, 1e-10).unwrap();
        assert_abs_diff_eq!(rho, 3.0, epsilon = 1e-9);
    }

    #[test]
    fn word_products_radius_example() {
        let a = m3([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]);
        // Cyclic permutation: all eigenvalues on the unit circle.
        assert_abs_diff_eq!(spectral_radius(&a, 1e-10).unwrap(), 1.0, epsilon = 1e-12);
        let sigma = MatrixSet::new(vec![a]).unwrap();
        let p = crate::matrix::mat_product(&[0, 0, 0], &sigma).unwrap();
        assert_eq!(p, Matrix::identity(3));
    }
}

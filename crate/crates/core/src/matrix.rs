//! Dense real square matrices, finite matrix sets, operator norms, traces,
//! and Kronecker products — the numerical substrate for every bound engine.

use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the dimension of Kronecker products and powers.
///
/// Keeps desk-scale runs under seconds while allowing fourth Kronecker
/// powers of matrices up to dimension eight.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Induced operator norm selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    /// Largest singular value.
    Two,
    /// Maximum absolute column sum.
    One,
    /// Maximum absolute row sum.
    Inf,
}

impl NormKind {
    pub fn label(self) -> &'static str {
        match self {
            NormKind::Two => "two",
            NormKind::One => "one",
            NormKind::Inf => "inf",
        }
    }
}

impl std::str::FromStr for NormKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "two" | "2" => Ok(NormKind::Two),
            "one" | "1" => Ok(NormKind::One),
            "inf" => Ok(NormKind::Inf),
            other => Err(format!(
                "unknown norm kind '{other}' (expected two|one|inf)"
            )),
        }
    }
}

/// Dense real square matrix, stored row-major.
///
/// Invariants enforced on construction: dimension at least one, all
/// entries finite.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<f64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            writeln!(f, "  {:?}", &self.data[i * self.dim..(i + 1) * self.dim])?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("matrix dimension must be at least 1".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::Domain(format!(
                "matrix data length {} does not match dimension {dim}",
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("matrix entry {v} is not finite")));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Domain(format!(
                "expected a square {dim}x{dim} matrix, got a ragged or rectangular row set"
            )));
        }
        Self::new(dim, rows.concat())
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matrix product");
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            let a_row = &self.data[i * n..(i + 1) * n];
            let out_row = &mut out[i * n..(i + 1) * n];
            for (k, &aik) in a_row.iter().enumerate() {
                if aik == 0.0 {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for j in 0..n {
                    out_row[j] += aik * b_row[j];
                }
            }
        }
        Matrix { dim: n, data: out }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(
            self.dim,
            x.len(),
            "dimension mismatch in matrix-vector product"
        );
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matrix sum");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Matrix {
            dim: self.dim,
            data,
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            self.dim, other.dim,
            "dimension mismatch in matrix difference"
        );
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Matrix {
            dim: self.dim,
            data,
        }
    }

    pub fn scale(&self, alpha: f64) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|v| v * alpha).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.data[i * n + j];
            }
        }
        Matrix { dim: n, data: out }
    }

    /// Sum of the diagonal entries.
    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// `t`-th power by binary exponentiation; `t = 0` yields the identity.
    pub fn mat_power(&self, t: usize) -> Matrix {
        let mut result = Matrix::identity(self.dim);
        let mut base = self.clone();
        let mut e = t;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Kronecker product, block layout `[a_ij * B]`, with the default
    /// dimension cap.
    pub fn kron(&self, other: &Matrix) -> Result<Matrix> {
        self.kron_with_cap(other, DEFAULT_DIM_CAP)
    }

    pub fn kron_with_cap(&self, other: &Matrix, cap: usize) -> Result<Matrix> {
        let n = self.dim;
        let p = other.dim;
        let np = n
            .checked_mul(p)
            .ok_or_else(|| Error::Size(format!("Kronecker product dimension {n}*{p} overflows")))?;
        if np > cap {
            return Err(Error::Size(format!(
                "Kronecker product dimension {np} exceeds cap {cap}"
            )));
        }
        let mut out = vec![0.0; np * np];
        for i in 0..n {
            for j in 0..n {
                let a_ij = self.data[i * n + j];
                if a_ij == 0.0 {
                    continue;
                }
                for r in 0..p {
                    let dst = (i * p + r) * np + j * p;
                    let src = r * p;
                    for c in 0..p {
                        out[dst + c] = a_ij * other.data[src + c];
                    }
                }
            }
        }
        Ok(Matrix { dim: np, data: out })
    }

    /// `k`-fold Kronecker power; `kron_power(a, 1)` is `a` itself.
    pub fn kron_power(&self, k: usize, cap: usize) -> Result<Matrix> {
        if k == 0 {
            return Err(Error::Domain("Kronecker power requires k >= 1".into()));
        }
        let target = checked_pow(self.dim, k)
            .filter(|&d| d <= cap)
            .ok_or_else(|| {
                Error::Size(format!(
                    "Kronecker power dimension {}^{k} exceeds cap {cap}",
                    self.dim
                ))
            })?;
        let mut out = self.clone();
        for _ in 1..k {
            out = self.kron_with_cap(&out, cap)?;
        }
        debug_assert_eq!(out.dim, target);
        Ok(out)
    }

    /// Largest absolute entry (the max-entry norm).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// Arithmetic on validated matrices can still overflow; products are
    /// checked with this before their entries feed any bound.
    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&v| v >= 0.0)
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.data.iter().all(|&v| v > 0.0)
    }

    pub fn min_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Induced operator norm of the requested kind.
///
/// Submultiplicative and never below the spectral radius. The two-norm is
/// the largest singular value, obtained from the dominant eigenvalue of
/// the Gram matrix. Returns exactly 0 for the zero matrix.
pub fn operator_norm(a: &Matrix, kind: NormKind) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    match kind {
        NormKind::One => (0..a.dim)
            .map(|j| (0..a.dim).map(|i| a.get(i, j).abs()).sum())
            .fold(0.0_f64, f64::max),
        NormKind::Inf => (0..a.dim)
            .map(|i| a.row(i).iter().map(|v| v.abs()).sum())
            .fold(0.0_f64, f64::max),
        NormKind::Two => two_norm(a),
    }
}

fn two_norm(a: &Matrix) -> f64 {
    // sigma_max(A)^2 = lambda_max(A^T A); the Gram matrix is symmetric PSD.
    // Scale first so the squared entries cannot overflow.
    let scale = a.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    let b = a.scale(1.0 / scale);
    let gram = b.transpose().mul(&b);
    let lambda = match gram.dim {
        1 => gram.get(0, 0),
        2 => sym2_max_eigenvalue(&gram),
        3 => sym3_max_eigenvalue(&gram),
        _ => sym_power_iteration_max(&gram),
    };
    scale * lambda.max(0.0).sqrt()
}

fn sym2_max_eigenvalue(b: &Matrix) -> f64 {
    let (a, c) = (b.get(0, 0), b.get(1, 1));
    let off = 0.5 * (b.get(0, 1) + b.get(1, 0));
    let half_diff = 0.5 * (a - c);
    0.5 * (a + c) + (half_diff * half_diff + off * off).sqrt()
}

/// Largest eigenvalue of a symmetric 3x3 matrix by the trigonometric
/// closed form for the characteristic cubic.
fn sym3_max_eigenvalue(b: &Matrix) -> f64 {
    let (a00, a11, a22) = (b.get(0, 0), b.get(1, 1), b.get(2, 2));
    let a01 = 0.5 * (b.get(0, 1) + b.get(1, 0));
    let a02 = 0.5 * (b.get(0, 2) + b.get(2, 0));
    let a12 = 0.5 * (b.get(1, 2) + b.get(2, 1));
    let p1 = a01 * a01 + a02 * a02 + a12 * a12;
    if p1 == 0.0 {
        return a00.max(a11).max(a22);
    }
    let q = (a00 + a11 + a22) / 3.0;
    let p2 = (a00 - q).powi(2) + (a11 - q).powi(2) + (a22 - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return q;
    }
    // det((B - qI)/p) / 2, clamped against rounding before acos.
    let (c00, c11, c22) = ((a00 - q) / p, (a11 - q) / p, (a22 - q) / p);
    let (c01, c02, c12) = (a01 / p, a02 / p, a12 / p);
    let det = c00 * (c11 * c22 - c12 * c12) - c01 * (c01 * c22 - c12 * c02)
        + c02 * (c01 * c12 - c11 * c02);
    let r = (det / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    q + 2.0 * p * phi.cos()
}

/// Dominant eigenvalue of a symmetric PSD matrix by power iteration with a
/// Rayleigh-quotient stop. Falls back to alternative deterministic starts
/// if the iterate stalls below the Frobenius floor.
fn sym_power_iteration_max(b: &Matrix) -> f64 {
    let n = b.dim;
    let floor = b.frobenius() / (n as f64).sqrt();
    let mut best = 0.0_f64;
    for attempt in 0..3u64 {
        let mut v: Vec<f64> = (0..n)
            .map(|i| 1.0 + ((i as u64 * 2654435761 + attempt * 40503) % 1000) as f64 / 1000.0)
            .collect();
        normalize(&mut v);
        let mut lambda = 0.0;
        for _ in 0..5000 {
            let mut w = b.matvec(&v);
            let new_lambda: f64 = w.iter().zip(&v).map(|(a, b)| a * b).sum();
            let wn = normalize(&mut w);
            if wn == 0.0 {
                return 0.0;
            }
            v = w;
            if (new_lambda - lambda).abs() <= 1e-14 * new_lambda.abs().max(1e-300) {
                lambda = new_lambda;
                break;
            }
            lambda = new_lambda;
        }
        best = best.max(lambda);
        if best >= floor * floor / (n as f64) || best >= floor {
            break;
        }
    }
    best
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    norm
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc = 1usize;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Finite ordered list of same-dimension matrices.
///
/// The member order is stable: product words index into it
/// deterministically.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSet {
    members: Vec<Matrix>,
}

impl MatrixSet {
    pub fn new(members: Vec<Matrix>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::Domain("matrix set must be nonempty".into()))?;
        let dim = first.dim();
        if let Some(m) = members.iter().find(|m| m.dim() != dim) {
            return Err(Error::Domain(format!(
                "matrix set is not homogeneous: found dimensions {dim} and {}",
                m.dim()
            )));
        }
        Ok(Self { members })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, i: usize) -> &Matrix {
        &self.members[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Matrix> {
        self.members.iter()
    }

    pub fn members(&self) -> &[Matrix] {
        &self.members
    }

    pub fn scale(&self, alpha: f64) -> MatrixSet {
        MatrixSet {
            members: self.members.iter().map(|m| m.scale(alpha)).collect(),
        }
    }
}

/// Left-to-right product of the members indexed by `word`.
///
/// The accumulation is grouped from the right, matching the suffix
/// memoization of the enumeration engine; integer-valued suffix runs then
/// stay exact, which lets structurally zero products vanish exactly in
/// floating point.
pub fn mat_product(word: &[usize], sigma: &MatrixSet) -> Result<Matrix> {
    if word.is_empty() {
        return Err(Error::Domain("product word must be nonempty".into()));
    }
    if let Some(&bad) = word.iter().find(|&&i| i >= sigma.len()) {
        return Err(Error::Domain(format!(
            "word index {bad} out of range for a set of {} matrices",
            sigma.len()
        )));
    }
    let mut acc = sigma.get(*word.last().unwrap()).clone();
    for &i in word[..word.len() - 1].iter().rev() {
        acc = sigma.get(i).mul(&acc);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn m2(rows: [[f64; 2]; 2]) -> Matrix {
        Matrix::from_rows(&[rows[0].to_vec(), rows[1].to_vec()]).unwrap()
    }

    /// Test-local naive product, independent of `Matrix::mul`.
    fn naive_mul(a: &Matrix, b: &Matrix) -> Vec<f64> {
        let n = a.dim();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out[i * n + j] += a.get(i, k) * b.get(k, j);
                }
            }
        }
        out
    }

    #[test]
    fn rejects_nonsquare_and_nonfinite() {
        assert!(Matrix::new(2, vec![1.0, 2.0, 3.0]).is_err());
        assert!(Matrix::new(0, vec![]).is_err());
        assert!(Matrix::new(1, vec![f64::NAN]).is_err());
        assert!(Matrix::new(1, vec![f64::INFINITY]).is_err());
        assert!(Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).is_err());
    }

    #[test]
    fn matrix_set_requires_homogeneous_dims() {
        assert!(MatrixSet::new(vec![]).is_err());
        let bad = MatrixSet::new(vec![Matrix::identity(2), Matrix::identity(3)]);
        assert!(bad.is_err());
    }

    #[test]
    fn product_identity_word() {
        let sigma = MatrixSet::new(vec![Matrix::identity(2)]).unwrap();
        let p = mat_product(&[0], &sigma).unwrap();
        assert_eq!(p, Matrix::identity(2));
    }

    #[test]
    fn product_matches_naive_oracle() {
        let a = m2([[0.0, 1.0], [0.0, 0.0]]);
        let b = m2([[0.0, 0.0], [1.0, 0.0]]);
        let sigma = MatrixSet::new(vec![a.clone(), b.clone()]).unwrap();
        let p = mat_product(&[0, 1], &sigma).unwrap();
        assert_eq!(p.entries(), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(p.entries(), naive_mul(&a, &b).as_slice());
    }

    #[test]
    fn product_rejects_bad_words() {
        let sigma = MatrixSet::new(vec![Matrix::identity(2)]).unwrap();
        assert!(mat_product(&[], &sigma).is_err());
        assert!(mat_product(&[1], &sigma).is_err());
    }

    #[test]
    fn zero_product_of_discontinuity_family_is_exact() {
        // (A1 A0^3)^2 vanishes exactly in IEEE double for the k = 3 member
        // of the discontinuity family: fl(3 * fl(1/3)) rounds to 1.
        let a0 = m2([[1.0, 1.0], [0.0, 1.0]]);
        let a1 = m2([[0.0, 0.0], [-1.0 / 3.0, 1.0]]);
        let sigma = MatrixSet::new(vec![a0, a1]).unwrap();
        let factor = mat_product(&[1, 0, 0, 0], &sigma).unwrap();
        let square = factor.mul(&factor);
        assert!(square.is_zero());
    }

    #[test]
    fn trace_examples() {
        assert_eq!(Matrix::identity(3).trace(), 3.0);
        assert_eq!(m2([[1.0, 1.0], [0.0, 1.0]]).trace(), 2.0);
        assert_eq!(m2([[0.0, 1.0], [1.0, 0.0]]).trace(), 0.0);
    }

    #[test]
    fn operator_norm_examples() {
        for kind in [NormKind::Two, NormKind::One, NormKind::Inf] {
            assert_abs_diff_eq!(
                operator_norm(&Matrix::identity(4), kind),
                1.0,
                epsilon = 1e-12
            );
        }
        let d = m2([[3.0, 0.0], [0.0, 1.0]]);
        assert_abs_diff_eq!(operator_norm(&d, NormKind::Two), 3.0, epsilon = 1e-12);
        let nilp = m2([[0.0, 1.0], [0.0, 0.0]]);
        assert_abs_diff_eq!(operator_norm(&nilp, NormKind::Two), 1.0, epsilon = 1e-12);
        assert_eq!(operator_norm(&Matrix::zeros(3), NormKind::Two), 0.0);
    }

    #[test]
    fn two_norm_matches_gram_eigenvalue_in_higher_dims() {
        // 4x4 case exercises the power-iteration path; compare against the
        // 2x2 closed form through a block-diagonal embedding.
        let mut a = Matrix::zeros(4);
        a.set(0, 0, 1.0);
        a.set(0, 1, 2.0);
        a.set(1, 0, -1.0);
        a.set(1, 1, 0.5);
        a.set(2, 3, 4.0);
        let block = m2([[1.0, 2.0], [-1.0, 0.5]]);
        let expected = operator_norm(&block, NormKind::Two).max(4.0);
        assert_abs_diff_eq!(operator_norm(&a, NormKind::Two), expected, epsilon = 1e-9);
    }

    #[test]
    fn kron_identity_and_trace() {
        let i2 = Matrix::identity(2);
        assert_eq!(i2.kron(&i2).unwrap(), Matrix::identity(4));
        let a = m2([[1.0, 2.0], [3.0, 4.0]]);
        let aa = a.kron(&a).unwrap();
        assert_abs_diff_eq!(aa.trace(), 25.0, epsilon = 1e-12);
        assert_abs_diff_eq!(aa.trace(), a.trace() * a.trace(), epsilon = 1e-12);
    }

    #[test]
    fn kron_block_layout() {
        let a = m2([[1.0, 2.0], [0.0, 3.0]]);
        let b = m2([[5.0, 6.0], [7.0, 8.0]]);
        let k = a.kron(&b).unwrap();
        // First block row: [1*B | 2*B].
        assert_eq!(k.row(0), &[5.0, 6.0, 10.0, 12.0]);
        assert_eq!(k.row(1), &[7.0, 8.0, 14.0, 16.0]);
        assert_eq!(k.row(2), &[0.0, 0.0, 15.0, 18.0]);
        assert_eq!(k.row(3), &[0.0, 0.0, 21.0, 24.0]);
    }

    #[test]
    fn kron_power_base_case_and_cap() {
        let a = m2([[1.0, 2.0], [3.0, 4.0]]);
        assert_eq!(a.kron_power(1, 4096).unwrap(), a);
        assert!(a.kron_power(0, 4096).is_err());
        let err = a.kron_power(13, 4096).unwrap_err();
        assert!(matches!(err, Error::Size(_)));
    }

    #[test]
    fn mat_power_matches_repeated_multiplication() {
        let a = m2([[1.0, 1.0], [1.0, 0.0]]);
        let mut acc = Matrix::identity(2);
        for t in 0..8 {
            assert_eq!(a.mat_power(t), acc);
            acc = acc.mul(&a);
        }
    }
}

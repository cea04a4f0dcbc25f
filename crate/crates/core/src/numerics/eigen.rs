//! Symmetric eigendecomposition by cyclic Jacobi rotations, and the PSD
//! utilities built on it.

use super::{Matrix, SymMatrix};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Default relative tolerance for [`jacobi_eigen`] callers that do not care.
pub const EIGEN_TOL: f64 = 1e-14;

/// Eigenvalues in ascending order; eigenvector `k` is column `k` of `vectors`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl Eigen {
    /// `V diag(f(λ)) Vᵀ`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.values.len();
        let mapped: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        let v = &self.vectors;
        SymMatrix::from_fn(n, |i, j| (0..n).map(|k| v[(i, k)] * mapped[k] * v[(j, k)]).sum())
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.reconstruct_with(|x| x)
    }
}

/// Cyclic Jacobi eigendecomposition.
///
/// Sweeps until the off-diagonal Frobenius mass drops below
/// `tol · ‖S‖_F`. Each rotation annihilates one off-diagonal pair and the
/// accumulated rotations form the orthogonal eigenvector matrix.
pub fn jacobi_eigen(s: &SymMatrix, tol: f64) -> Result<Eigen> {
    let n = s.dim();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if !s.is_finite() {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    let mut a = s.to_matrix().into_data();
    let mut v = Matrix::identity(n).into_data();
    let scale = s.frobenius_norm();
    let target = tol * scale;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .map(|(i, j)| 2.0 * a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= target || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - sn * akq;
                    a[k * n + q] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - sn * aqk;
                    a[q * n + k] = sn * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - sn * vkq;
                    v[k * n + q] = sn * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x * n + x].total_cmp(&a[y * n + y]));
    let values = order.iter().map(|&k| a[k * n + k]).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| v[i * n + order[j]]);
    Ok(Eigen { values, vectors })
}

pub fn eigen(s: &SymMatrix) -> Result<Eigen> {
    jacobi_eigen(s, EIGEN_TOL)
}

pub fn min_eigenvalue(s: &SymMatrix) -> Result<f64> {
    Ok(eigen(s)?.values[0])
}

pub fn is_psd(s: &SymMatrix, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue(s)? >= -tol)
}

/// Nearest PSD matrix in Frobenius norm: negative eigenvalues clipped to zero.
pub fn project_psd(s: &SymMatrix) -> Result<SymMatrix> {
    Ok(eigen(s)?.reconstruct_with(|x| x.max(0.0)))
}

/// One step of Cholesky elimination on the leading pivot: returns the Schur
/// complement `q(i, j) = p(i+1, j+1) - p(0, i+1) p(0, j+1) / p(0, 0)`.
pub fn cholesky_reduce(p: &SymMatrix) -> Result<SymMatrix> {
    let pivot = p.get(0, 0);
    if !(pivot > 0.0) {
        return Err(Error::InvalidArgument(format!("pivot p(0,0) = {pivot} is not positive")));
    }
    let n = p.dim();
    if n < 2 {
        return Err(Error::InvalidArgument("need at least a 2x2 matrix".into()));
    }
    Ok(SymMatrix::from_fn(n - 1, |i, j| p.get(i + 1, j + 1) - p.get(0, i + 1) * p.get(0, j + 1) / pivot))
}

/// Factors a PSD matrix as a Gram matrix: row `i` of the result is a vector
/// `x_i` with `⟨x_i, x_j⟩ = s(i, j)`. Eigenvalues at or below
/// `tol · max(1, λ_max)` are dropped, so the vector length is the numerical rank.
pub fn gram_factor(s: &SymMatrix, tol: f64) -> Result<Vec<Vec<f64>>> {
    let e = eigen(s)?;
    let top = e.values.last().copied().unwrap_or(0.0);
    let cut = tol * top.abs().max(1.0);
    if e.values[0] < -cut {
        return Err(Error::InvalidArgument(format!("matrix is not PSD: eigenvalue {}", e.values[0])));
    }
    let keep: Vec<usize> = (0..e.values.len()).filter(|&k| e.values[k] > cut).collect();
    Ok((0..s.dim())
        .map(|i| keep.iter().map(|&k| e.vectors[(i, k)] * e.values[k].sqrt()).collect())
        .collect())
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn diagonal_input() {
        let e = eigen(&SymMatrix::diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn all_ones_2x2() {
        let e = eigen(&SymMatrix::identity_plus_ones(2, 0.0, 1.0)).unwrap();
        assert_close(&e.values, &[0.0, 2.0], 1e-14);
    }

    #[test]
    fn complete_graph_schur_spectrum() {
        // (t - σ) I + (σ - t²) J with n = 3, t = 1/3, σ = 0
        let t = 1.0 / 3.0;
        let q = SymMatrix::identity_plus_ones(3, t, -t * t);
        let e = eigen(&q).unwrap();
        assert_close(&e.values, &[0.0, t, t], 1e-14);
    }

    #[test]
    fn psd_checks() {
        assert_eq!(min_eigenvalue(&SymMatrix::identity(4)).unwrap(), 1.0);
        assert!(is_psd(&SymMatrix::identity(4), 1e-9).unwrap());
        assert!(!is_psd(&SymMatrix::diag(&[1.0, -0.5]), 1e-9).unwrap());
    }

    #[test]
    fn projection_clips() {
        let p = project_psd(&SymMatrix::diag(&[2.0, -1.0])).unwrap();
        assert!(p.distance(&SymMatrix::diag(&[2.0, 0.0])) < 1e-15);
        let psd = SymMatrix::identity_plus_ones(3, 1.0, 0.5);
        assert!(project_psd(&psd).unwrap().distance(&psd) < 1e-12);
    }

    #[test]
    fn cholesky_examples() {
        let q = cholesky_reduce(&SymMatrix::identity(3)).unwrap();
        assert_eq!(q, SymMatrix::identity(2));

        let v = [2.0, -1.0, 0.5, 3.0];
        let rank1 = SymMatrix::from_fn(4, |i, j| v[i] * v[j]);
        assert!(cholesky_reduce(&rank1).unwrap().frobenius_norm() < 1e-14);

        assert!(cholesky_reduce(&SymMatrix::diag(&[0.0, 1.0])).is_err());
    }

    #[test]
    fn gram_roundtrip() {
        let s = SymMatrix::identity_plus_ones(4, 0.75, 0.25);
        let x = gram_factor(&s, 1e-12).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((dot(&x[i], &x[j]) - s.get(i, j)).abs() < 1e-13);
            }
        }
        // rank deficient: J has rank one
        let x = gram_factor(&SymMatrix::identity_plus_ones(3, 0.0, 1.0), 1e-12).unwrap();
        assert_eq!(x[0].len(), 1);
    }
}

//! Dense symmetric eigendecomposition and the classic eigenvector GFT.

use ndarray::{Array2, ArrayView1};

use crate::basis::GftBasis;
use crate::error::{Error, Result};
use crate::graph::SymMatrix;

/// Default relative off-diagonal tolerance for [`sym_eigendecomposition`].
pub const DEFAULT_EIGEN_TOL: f64 = 1e-12;
/// Default sweep budget for [`sym_eigendecomposition`].
pub const DEFAULT_MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching unit eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Array2<f64>,
}

impl EigenDecomposition {
    pub fn largest(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Cyclic Jacobi eigensolver with the default sweep budget.
pub fn sym_eigendecomposition(m: &SymMatrix, tol: f64) -> Result<EigenDecomposition> {
    jacobi_eigen(m, tol, DEFAULT_MAX_SWEEPS)
}

/// Cyclic Jacobi eigensolver.
///
/// Sweeps over every `(p, q)` pair with `p < q`, annihilating each nonzero
/// off-diagonal entry with a plane rotation, until the off-diagonal Frobenius
/// norm drops to `tol · ‖M‖_F`. Exact zeros are never rotated, so a
/// block-diagonal input yields eigenvectors supported on single blocks.
///
/// Each eigenvector is signed so that its largest-magnitude entry is positive
/// (lowest index wins a tie), then pairs are sorted by ascending eigenvalue.
pub fn jacobi_eigen(m: &SymMatrix, tol: f64, max_sweeps: usize) -> Result<EigenDecomposition> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let n = m.dim();
    let mut a: Vec<f64> = m.as_array().iter().copied().collect();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = tol * scale;

    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * a[i * n + j] * a[i * n + j];
            }
        }
        s.sqrt()
    };

    let mut converged = off_norm(&a) <= target;
    let mut sweep = 0;
    while !converged && sweep < max_sweeps {
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        sweep += 1;
        converged = off_norm(&a) <= target;
    }
    if !converged {
        return Err(Error::NoConvergence(sweep));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]).then(i.cmp(&j)));

    let mut eigenvectors = Array2::zeros((n, n));
    let mut eigenvalues = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues.push(a[src * n + src]);
        let mut lead = 0;
        for k in 1..n {
            if v[k * n + src].abs() > v[lead * n + src].abs() {
                lead = k;
            }
        }
        let sign = if v[lead * n + src] < 0.0 { -1.0 } else { 1.0 };
        for k in 0..n {
            eigenvectors[[k, dst]] = sign * v[k * n + src];
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Laplacian quadratic form `bᵀ Φ b`.
pub fn quadratic_form(b: ArrayView1<f64>, phi: &SymMatrix) -> f64 {
    b.dot(&phi.view().dot(&b))
}

/// Classic GFT: the full eigenbasis of `phi`, smoothest component first.
pub fn classic_gft_basis(phi: &SymMatrix) -> Result<GftBasis> {
    let eig = sym_eigendecomposition(phi, DEFAULT_EIGEN_TOL)?;
    let p = phi.dim();
    Ok(GftBasis::new(
        eig.eigenvectors,
        eig.eigenvalues,
        vec![false; p],
        true,
        None,
    ))
}

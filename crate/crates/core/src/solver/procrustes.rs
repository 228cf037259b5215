//! Orthogonal Procrustes step: the `A` minimising the reconstruction error
//! for fixed `B` subject to `AᵀA = I` is `UVᵀ`, where `ΦB = UΣVᵀ`.

use ndarray::{Array1, Array2, ArrayView2};

use crate::graph::SymMatrix;
use crate::spectral::{sym_eigendecomposition, DEFAULT_EIGEN_TOL};

/// Singular values below this are treated as zero.
pub const SINGULAR_FLOOR: f64 = 1e-10;

/// Returns `A = UVᵀ` from a thin SVD of `m` (`p × k`, `k ≤ p`).
///
/// The SVD is taken through the eigendecomposition of `mᵀm`. Left singular
/// vectors belonging to zero singular values are filled in deterministically
/// by Gram–Schmidt over `e₀, e₁, …` against the columns already chosen.
pub fn procrustes_update(m: ArrayView2<f64>) -> Array2<f64> {
    let (p, k) = m.dim();
    assert!(
        k <= p,
        "procrustes_update needs k <= p (got k = {k}, p = {p})"
    );
    let gram = SymMatrix::gram(m);
    let eig = sym_eigendecomposition(&gram, DEFAULT_EIGEN_TOL)
        .expect("Jacobi converges on small Gram matrices");
    let v = &eig.eigenvectors;

    let mut u: Vec<Option<Array1<f64>>> = vec![None; k];
    let mut accepted: Vec<Array1<f64>> = Vec::with_capacity(k);
    for idx in (0..k).rev() {
        let sigma = eig.eigenvalues[idx].max(0.0).sqrt();
        if sigma < SINGULAR_FLOOR {
            continue;
        }
        let candidate = m.dot(&v.column(idx)) / sigma;
        // Re-orthogonalise: singular vectors of tiny σ lose orthogonality
        // when recovered through the Gram matrix.
        if let Some(col) = orthonormalize(candidate, &accepted, 0.5) {
            accepted.push(col.clone());
            u[idx] = Some(col);
        }
    }

    let mut next_basis = 0;
    for slot in u.iter_mut() {
        if slot.is_some() {
            continue;
        }
        while next_basis < p {
            let mut e = Array1::zeros(p);
            e[next_basis] = 1.0;
            next_basis += 1;
            if let Some(col) = orthonormalize(e, &accepted, 1e-8) {
                accepted.push(col.clone());
                *slot = Some(col);
                break;
            }
        }
    }

    let mut a = Array2::zeros((p, k));
    for (idx, col) in u.into_iter().enumerate() {
        let col = col.expect("orthonormal completion exists while k <= p");
        let vi = v.column(idx);
        for j in 0..k {
            a.column_mut(j).scaled_add(vi[j], &col);
        }
    }
    a
}

/// Two passes of modified Gram–Schmidt; `None` when less than `keep` of the
/// original norm survives.
fn orthonormalize(mut x: Array1<f64>, basis: &[Array1<f64>], keep: f64) -> Option<Array1<f64>> {
    let original = x.dot(&x).sqrt();
    if original == 0.0 {
        return None;
    }
    for _ in 0..2 {
        for q in basis {
            let c = q.dot(&x);
            x.scaled_add(-c, q);
        }
    }
    let norm = x.dot(&x).sqrt();
    if norm <= keep * original {
        return None;
    }
    Some(x / norm)
}

//! Regression-based GFT with an optional lasso penalty.
//!
//! The components solve
//!
//! ```text
//! minimise  Σᵢ ‖sᵢ − ABᵀsᵢ‖² + λ Σₘ ‖bₘ‖² + λ₁ Σₘ ‖bₘ‖₁   s.t. AᵀA = I
//! ```
//!
//! over `p × k` matrices `A` and `B`, where the `sᵢ` are the rows of any
//! factor with `SᵀS = Φ`. Expanding the sum gives
//! `tr Φ − 2 tr(AᵀΦB) + tr(BᵀΦB)`, so the solver works on `Φ` alone and
//! alternates two exact block updates:
//!
//! * B-step: one independent elastic-net problem per column, solved by FISTA.
//! * A-step: orthogonal Procrustes on `ΦB`.

mod fista;
mod procrustes;

use ndarray::{Array2, ArrayView1, Axis};
use rayon::prelude::*;

pub use fista::{
    elastic_net_objective, estimate_lipschitz, fista_elastic_net, power_iteration_max_eigenvalue,
    soft_threshold, FistaOutcome,
};
pub use procrustes::{procrustes_update, SINGULAR_FLOOR};

use crate::basis::{GftBasis, SolverDiagnostics};
use crate::error::{Error, Result};
use crate::graph::SymMatrix;
use crate::spectral::{quadratic_form, sym_eigendecomposition, DEFAULT_EIGEN_TOL};

/// Tunables for [`sparse_gft`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Number of components; `None` means one per vertex.
    pub k: Option<usize>,
    /// Ridge weight `λ`.
    pub ridge: f64,
    /// Lasso weight `λ₁`.
    pub lasso: f64,
    pub outer_max_iters: usize,
    pub outer_tol: f64,
    pub fista_max_iters: usize,
    pub fista_tol: f64,
    /// Power iterations for the FISTA step size.
    pub power_iters: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            k: None,
            ridge: 1e-4,
            lasso: 0.0,
            outer_max_iters: 200,
            outer_tol: 1e-6,
            fista_max_iters: 2000,
            fista_tol: 1e-9,
            power_iters: 200,
        }
    }
}

impl SolverConfig {
    /// Checks the invariants and resolves `k` against the vertex count.
    pub fn resolve_k(&self, p: usize) -> Result<usize> {
        let k = self.k.unwrap_or(p);
        if k < 1 || k > p {
            return Err(Error::InvalidConfig(format!(
                "component count k = {k} must lie in [1, {p}]"
            )));
        }
        if !(self.ridge >= 0.0 && self.ridge.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "ridge must be >= 0, got {}",
                self.ridge
            )));
        }
        if !(self.lasso >= 0.0 && self.lasso.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "lasso must be >= 0, got {}",
                self.lasso
            )));
        }
        if !(self.outer_tol > 0.0 && self.fista_tol > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be positive".into()));
        }
        if self.outer_max_iters == 0 || self.fista_max_iters == 0 || self.power_iters == 0 {
            return Err(Error::InvalidConfig(
                "iteration budgets must be at least 1".into(),
            ));
        }
        Ok(k)
    }
}

/// Full objective `tr Φ − 2 tr(AᵀΦB) + tr(BᵀΦB) + λ‖B‖²_F + λ₁ Σ|B|`.
///
/// Equal to the reconstruction-plus-penalty objective whenever `AᵀA = I`.
pub fn regression_objective(
    phi: &SymMatrix,
    a: &Array2<f64>,
    b: &Array2<f64>,
    ridge: f64,
    lasso: f64,
) -> f64 {
    let phi_b = phi.view().dot(b);
    let cross: f64 = (a * &phi_b).sum();
    let smooth: f64 = (b * &phi_b).sum();
    phi.trace() - 2.0 * cross
        + smooth
        + ridge * b.iter().map(|x| x * x).sum::<f64>()
        + lasso * b.iter().map(|x| x.abs()).sum::<f64>()
}

/// Sparse (lasso-penalised) regression-based GFT.
///
/// `A` starts at the eigenvectors of the `k` largest eigenvalues of `Φ`. Each
/// outer iteration runs the B-step (columns in parallel, results independent
/// of scheduling) and then the A-step, until no column of `B` moves by more
/// than `outer_tol · max(1, ‖bₘ‖)`. Columns are then scaled to unit norm and
/// sorted by ascending quadratic form; all-zero columns are kept and flagged.
pub fn sparse_gft(phi: &SymMatrix, config: &SolverConfig) -> Result<GftBasis> {
    let p = phi.dim();
    let k = config.resolve_k(p)?;

    let lipschitz = estimate_lipschitz(phi, config.ridge, config.power_iters);
    if lipschitz.is_nan() || lipschitz <= 0.0 {
        return Err(Error::InvalidConfig(
            "Laplacian is zero and ridge is zero; the regression is unbounded".into(),
        ));
    }

    let eig = sym_eigendecomposition(phi, DEFAULT_EIGEN_TOL)?;
    let mut a = Array2::zeros((p, k));
    for j in 0..k {
        a.column_mut(j).assign(&eig.eigenvectors.column(p - 1 - j));
    }

    let mut b: Option<Array2<f64>> = None;
    let mut history = Vec::with_capacity(config.outer_max_iters + 1);
    let mut fista_iters = vec![0; k];
    let mut fista_ok = false;
    let mut outer_converged = false;
    let mut outer_iterations = 0;

    for _ in 0..config.outer_max_iters {
        outer_iterations += 1;
        let previous = b.as_ref();
        let columns: Vec<(ndarray::Array1<f64>, FistaOutcome)> = (0..k)
            .into_par_iter()
            .map(|m| {
                let target = a.column(m);
                let out = fista::fista_with_step(phi, target, config, lipschitz);
                // Keep the incumbent column if the warm-started run did not
                // reach it, so the B-step never increases the objective.
                let chosen = match previous {
                    Some(prev) => {
                        let old = prev.column(m);
                        let f_old =
                            elastic_net_objective(phi, target, old, config.ridge, config.lasso);
                        let f_new = elastic_net_objective(
                            phi,
                            target,
                            out.beta.view(),
                            config.ridge,
                            config.lasso,
                        );
                        if f_old < f_new {
                            old.to_owned()
                        } else {
                            out.beta.clone()
                        }
                    }
                    None => out.beta.clone(),
                };
                (chosen, out)
            })
            .collect();

        let mut next = Array2::zeros((p, k));
        for (m, (col, out)) in columns.iter().enumerate() {
            next.column_mut(m).assign(col);
            fista_iters[m] = out.iterations;
        }
        fista_ok = columns.iter().all(|(_, out)| out.converged);

        let moved = previous.is_some_and(|prev| {
            prev.axis_iter(Axis(1))
                .zip(next.axis_iter(Axis(1)))
                .all(|(old, new)| {
                    let d = &new - &old;
                    d.dot(&d).sqrt() <= config.outer_tol * old.dot(&old).sqrt().max(1.0)
                })
        });

        if history.is_empty() {
            history.push(regression_objective(
                phi,
                &a,
                &next,
                config.ridge,
                config.lasso,
            ));
        }
        a = procrustes_update(phi.view().dot(&next).view());
        history.push(regression_objective(
            phi,
            &a,
            &next,
            config.ridge,
            config.lasso,
        ));
        b = Some(next);
        if moved {
            outer_converged = true;
            break;
        }
    }

    let b = b.expect("at least one outer iteration runs");
    let objective = *history.last().expect("history is non-empty");

    let mut columns: Vec<(ndarray::Array1<f64>, f64, bool, usize)> = b
        .axis_iter(Axis(1))
        .zip(fista_iters.iter())
        .map(|(col, &iters)| {
            let norm = col.dot(&col).sqrt();
            if norm == 0.0 {
                (col.to_owned(), 0.0, true, iters)
            } else {
                let unit = &col / norm;
                let q = quadratic_form(unit.view(), phi);
                (unit, q, false, iters)
            }
        })
        .collect();
    columns.sort_by(|x, y| x.1.total_cmp(&y.1).then(y.2.cmp(&x.2)));

    let mut components = Array2::zeros((p, k));
    let mut forms = Vec::with_capacity(k);
    let mut degenerate = Vec::with_capacity(k);
    let mut per_column = Vec::with_capacity(k);
    for (m, (col, q, deg, iters)) in columns.into_iter().enumerate() {
        components.column_mut(m).assign(&col);
        forms.push(q);
        degenerate.push(deg);
        per_column.push(iters);
    }

    let converged = outer_converged && fista_ok;
    let diagnostics = SolverDiagnostics {
        outer_iterations,
        objective,
        objective_history: history,
        fista_iterations: per_column,
        converged,
    };
    Ok(GftBasis::new(
        components,
        forms,
        degenerate,
        config.lasso == 0.0 && converged,
        Some(diagnostics),
    ))
}

/// Indices whose magnitude exceeds `rel_eps` times the largest magnitude.
pub fn component_support(b: ArrayView1<f64>, rel_eps: f64) -> Vec<usize> {
    let peak = b.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if peak == 0.0 {
        return Vec::new();
    }
    b.iter()
        .enumerate()
        .filter(|(_, x)| x.abs() > rel_eps * peak)
        .map(|(i, _)| i)
        .collect()
}

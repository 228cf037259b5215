//! Elastic-net regression against the Laplacian, solved with FISTA.
//!
//! Each column update minimises
//!
//! ```text
//! f(β) = βᵀΦβ − 2aᵀΦβ + λ‖β‖² + λ₁‖β‖₁
//! ```
//!
//! which equals `‖Sa − Sβ‖² + λ‖β‖² + λ₁‖β‖₁` minus the constant `aᵀΦa` for any
//! factor `SᵀS = Φ`. Only `Φ` is touched, so `S` is never formed.

use ndarray::{Array1, ArrayView1};

use super::SolverConfig;
use crate::error::{Error, Result};
use crate::graph::SymMatrix;

/// Safety factor applied to the power-iteration estimate of `λ_max(Φ)`.
const LIPSCHITZ_INFLATION: f64 = 1.01;

/// Proximal operator of `t‖·‖₁`.
pub fn soft_threshold(v: ArrayView1<f64>, t: f64) -> Array1<f64> {
    v.mapv(|x| shrink(x, t))
}

#[inline]
pub(crate) fn shrink(x: f64, t: f64) -> f64 {
    if x > t {
        x - t
    } else if x < -t {
        x + t
    } else {
        0.0
    }
}

/// Power-iteration estimate of the largest eigenvalue of a PSD matrix.
pub fn power_iteration_max_eigenvalue(phi: &SymMatrix, iters: usize) -> f64 {
    let p = phi.dim();
    if p == 0 {
        return 0.0;
    }
    let m = phi.view();
    // Deterministic start that is not orthogonal to the constant vector or to
    // alternating-sign vectors.
    let mut x = Array1::from_shape_fn(p, |i| 1.0 + 0.1 * i as f64);
    x /= x.dot(&x).sqrt();
    for _ in 0..iters {
        let y = m.dot(&x);
        let norm = y.dot(&y).sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        x = y / norm;
    }
    x.dot(&m.dot(&x)).max(0.0)
}

/// Lipschitz constant of the gradient of the smooth part of `f`:
/// `2·(1.01·λ_max(Φ) + λ)`.
pub fn estimate_lipschitz(phi: &SymMatrix, ridge: f64, power_iters: usize) -> f64 {
    2.0 * (LIPSCHITZ_INFLATION * power_iteration_max_eigenvalue(phi, power_iters) + ridge)
}

/// `βᵀΦβ − 2aᵀΦβ + λ‖β‖² + λ₁‖β‖₁`.
pub fn elastic_net_objective(
    phi: &SymMatrix,
    a: ArrayView1<f64>,
    beta: ArrayView1<f64>,
    ridge: f64,
    lasso: f64,
) -> f64 {
    let phi_beta = phi.view().dot(&beta);
    beta.dot(&phi_beta) - 2.0 * a.dot(&phi_beta)
        + ridge * beta.dot(&beta)
        + lasso * beta.iter().map(|x| x.abs()).sum::<f64>()
}

/// Result of one FISTA run.
#[derive(Debug, Clone, PartialEq)]
pub struct FistaOutcome {
    pub beta: Array1<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Solves the elastic-net column problem starting from `β₀ = a`.
///
/// Fails only when the estimated Lipschitz constant is zero (`Φ = 0` and
/// `λ = 0`), where the problem has no step size.
pub fn fista_elastic_net(
    phi: &SymMatrix,
    a: ArrayView1<f64>,
    config: &SolverConfig,
) -> Result<FistaOutcome> {
    let lipschitz = estimate_lipschitz(phi, config.ridge, config.power_iters);
    if lipschitz.is_nan() || lipschitz <= 0.0 {
        return Err(Error::InvalidConfig(
            "Lipschitz constant is zero; use a nonzero Laplacian or a positive ridge".into(),
        ));
    }
    Ok(fista_with_step(phi, a, config, lipschitz))
}

pub(crate) fn fista_with_step(
    phi: &SymMatrix,
    a: ArrayView1<f64>,
    config: &SolverConfig,
    lipschitz: f64,
) -> FistaOutcome {
    let m = phi.view();
    let phi_a = m.dot(&a);
    let step = 1.0 / lipschitz;
    let threshold = config.lasso * step;

    let mut beta = a.to_owned();
    let mut y = a.to_owned();
    let mut t = 1.0_f64;
    for iter in 1..=config.fista_max_iters {
        // g(y) = 2(Φy − Φa + λy)
        let grad = (m.dot(&y) - &phi_a + config.ridge * &y) * 2.0;
        let next = (&y - &(grad * step)).mapv(|x| shrink(x, threshold));
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let delta = &next - &beta;
        let moved = delta.dot(&delta).sqrt();
        let scale = beta.dot(&beta).sqrt().max(1.0);
        y = &next + &(delta * ((t - 1.0) / t_next));
        beta = next;
        t = t_next;
        if moved <= config.fista_tol * scale {
            return FistaOutcome {
                beta,
                iterations: iter,
                converged: true,
            };
        }
    }
    FistaOutcome {
        beta,
        iterations: config.fista_max_iters,
        converged: false,
    }
}

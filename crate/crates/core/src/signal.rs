//! Graph signals, GFT analysis/synthesis and the three-factor synthetic source model.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::basis::GftBasis;
use crate::error::{Error, Result};
use crate::graph::SymMatrix;
use crate::spectral::{sym_eigendecomposition, DEFAULT_EIGEN_TOL};

/// `n × p` matrix of observations: one row per time step, one column per source.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalMatrix {
    values: Array2<f64>,
    names: Vec<String>,
}

impl SignalMatrix {
    /// Wraps `values`; `names` default to `X1 … Xp`.
    pub fn new(values: Array2<f64>, names: Option<Vec<String>>) -> Result<Self> {
        let (n, p) = values.dim();
        if n == 0 || p == 0 {
            return Err(Error::InvalidSignal(format!(
                "empty signal matrix ({n} × {p})"
            )));
        }
        if let Some(((i, j), x)) = values.indexed_iter().find(|(_, x)| !x.is_finite()) {
            return Err(Error::InvalidSignal(format!(
                "non-finite value {x} at ({i}, {j})"
            )));
        }
        let names = match names {
            Some(names) if names.len() != p => {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    found: names.len(),
                })
            }
            Some(names) => names,
            None => (1..=p).map(|i| format!("X{i}")).collect(),
        };
        Ok(Self { values, names })
    }

    pub fn values(&self) -> ArrayView2<'_, f64> {
        self.values.view()
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rows(&self) -> usize {
        self.values.nrows()
    }

    pub fn sources(&self) -> usize {
        self.values.ncols()
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.values.row(i)
    }

    /// Per-column mean.
    pub fn column_means(&self) -> Array1<f64> {
        self.values.sum_axis(ndarray::Axis(0)) / self.rows() as f64
    }

    /// Per-column sample standard deviation (`n − 1` denominator; 0 when `n = 1`).
    pub fn column_std(&self) -> Array1<f64> {
        let n = self.rows();
        let means = self.column_means();
        Array1::from_shape_fn(self.sources(), |j| {
            if n < 2 {
                return 0.0;
            }
            let ss: f64 = self
                .values
                .column(j)
                .iter()
                .map(|x| (x - means[j]).powi(2))
                .sum();
            (ss / (n - 1) as f64).sqrt()
        })
    }
}

/// GFT coefficients `x̃[m] = ⟨x, bₘ⟩` in basis order.
pub fn analyze(x: ArrayView1<f64>, basis: &GftBasis) -> Result<Array1<f64>> {
    if x.len() != basis.p() {
        return Err(Error::DimensionMismatch {
            expected: basis.p(),
            found: x.len(),
        });
    }
    Ok(basis.components().t().dot(&x))
}

/// Inverse transform.
///
/// Orthonormal bases sum `x̃[m]·bₘ`. Other bases return the minimum-norm
/// least-squares solution of `Bᵀx = x̃`, i.e. `x = (BBᵀ)⁺ B x̃`, treating
/// eigenvalues of `BBᵀ` below `1e−10 · λ_max(BBᵀ)` as zero.
pub fn synthesize(xt: ArrayView1<f64>, basis: &GftBasis) -> Result<Array1<f64>> {
    if xt.len() != basis.k() {
        return Err(Error::DimensionMismatch {
            expected: basis.k(),
            found: xt.len(),
        });
    }
    if !basis.has_nonzero_component() {
        return Err(Error::InvalidSignal(
            "cannot synthesize from a basis with no nonzero component".into(),
        ));
    }
    let b = basis.components();
    let bx = b.dot(&xt);
    if basis.orthonormal() {
        return Ok(bx);
    }
    let bbt = SymMatrix::gram(b.t());
    let eig = sym_eigendecomposition(&bbt, DEFAULT_EIGEN_TOL)?;
    let floor = 1e-10 * eig.largest();
    let mut x = Array1::zeros(basis.p());
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda > floor {
            let v = eig.eigenvectors.column(i);
            x.scaled_add(v.dot(&bx) / lambda, &v);
        }
    }
    Ok(x)
}

/// Standard normal sampler: Box–Muller over ChaCha20 seeded from a `u64`.
///
/// Normals are produced in pairs; the second of each pair is returned by the
/// next call, so the stream depends only on the seed and the number of draws.
#[derive(Debug, Clone)]
pub struct GaussianSampler {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl GaussianSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    pub fn standard(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 ∈ (0, 1] keeps the logarithm finite.
        let u1 = 1.0 - self.rng.random::<f64>();
        let u2: f64 = self.rng.random();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }

    /// Draw from `N(mean, variance)`.
    pub fn normal(&mut self, mean: f64, variance: f64) -> f64 {
        mean + variance.sqrt() * self.standard()
    }
}

/// Variance of the first hidden factor.
pub const FACTOR1_VARIANCE: f64 = 290.0;
/// Variance of the second hidden factor.
pub const FACTOR2_VARIANCE: f64 = 300.0;
/// Number of observable sources in the synthetic model.
pub const SYNTHETIC_SOURCES: usize = 10;

/// Ten sources driven by three hidden factors.
///
/// Per row: `V₁ ~ N(0, 290)`, `V₂ ~ N(0, 300)`, `ε ~ N(0, 1)`,
/// `V₃ = −0.01·V₁ + 0.01·V₂ + ε`; then `X₁..X₄ = V₁ + noise`,
/// `X₅..X₈ = V₂ + noise`, `X₉, X₁₀ = V₃ + noise` with independent unit-variance
/// noise drawn in source order.
pub fn generate_synthetic(seed: u64, n: usize) -> Result<SignalMatrix> {
    if n == 0 {
        return Err(Error::InvalidSignal(
            "observation count must be positive".into(),
        ));
    }
    let mut g = GaussianSampler::new(seed);
    let mut values = Array2::zeros((n, SYNTHETIC_SOURCES));
    for mut row in values.rows_mut() {
        let v1 = g.normal(0.0, FACTOR1_VARIANCE);
        let v2 = g.normal(0.0, FACTOR2_VARIANCE);
        let eps = g.standard();
        let v3 = -0.01 * v1 + 0.01 * v2 + eps;
        for (i, x) in row.iter_mut().enumerate() {
            let factor = match i {
                0..=3 => v1,
                4..=7 => v2,
                _ => v3,
            };
            *x = factor + g.standard();
        }
    }
    SignalMatrix::new(values, None)
}

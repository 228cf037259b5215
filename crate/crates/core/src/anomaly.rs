//! Spectral anomaly detection on multivariate signals.
//!
//! The sparse-GFT detector projects each observation onto the high-frequency
//! components of a sparse basis, standardises every projection against its
//! training distribution and sums the squares. Because sparse components
//! aggregate only a few correlated sources, a disturbance on one source shows
//! up as high-frequency energy within its sub-graph. The PCA baseline scores
//! the squared residual outside the leading principal subspace.

use ndarray::{Array1, Array2, ArrayView1};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::basis::GftBasis;
use crate::error::{Error, Result};
use crate::graph::{correlation_graph, laplacian, Graph, LaplacianKind, SymMatrix};
use crate::signal::{analyze, SignalMatrix};
use crate::solver::{sparse_gft, SolverConfig};
use crate::spectral::{sym_eigendecomposition, DEFAULT_EIGEN_TOL};

/// Floor applied to per-component training standard deviations.
pub const STD_FLOOR: f64 = 1e-12;

/// Signals with one anomaly label per row.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub signals: SignalMatrix,
    pub labels: Vec<bool>,
}

impl LabeledDataset {
    pub fn new(signals: SignalMatrix, labels: Vec<bool>) -> Result<Self> {
        if labels.len() != signals.rows() {
            return Err(Error::DimensionMismatch {
                expected: signals.rows(),
                found: labels.len(),
            });
        }
        Ok(Self { signals, labels })
    }
}

/// Where the detector's graph comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    Given(Graph),
    /// Build [`correlation_graph`] from the training data.
    Auto {
        epsilon: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectorConfig {
    pub graph: GraphSource,
    pub kind: LaplacianKind,
    pub solver: SolverConfig,
    /// Components whose quadratic form reaches this quantile count as high frequency.
    pub hf_quantile: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            graph: GraphSource::Auto { epsilon: 0.3 },
            kind: LaplacianKind::Normalized,
            solver: SolverConfig::default(),
            hf_quantile: 0.5,
        }
    }
}

/// Detector built on a sparse GFT basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDetector {
    pub basis: GftBasis,
    pub graph: Graph,
    pub config: DetectorConfig,
    pub high_freq: Vec<usize>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

/// Principal-subspace residual detector.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaDetector {
    pub mean: Array1<f64>,
    /// `p × r` orthonormal principal directions.
    pub components: Array2<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Detector {
    Spectral(SpectralDetector),
    Pca(PcaDetector),
}

impl Detector {
    pub fn sources(&self) -> usize {
        match self {
            Detector::Spectral(d) => d.basis.p(),
            Detector::Pca(d) => d.mean.len(),
        }
    }

    fn score_row(&self, x: ArrayView1<f64>) -> f64 {
        match self {
            Detector::Spectral(d) => {
                let xt = d.basis.components().t().dot(&x);
                d.high_freq
                    .iter()
                    .map(|&m| ((xt[m] - d.mean[m]) / d.std[m]).powi(2))
                    .sum()
            }
            Detector::Pca(d) => {
                let centered = &x - &d.mean;
                let coords = d.components.t().dot(&centered);
                let residual = centered - d.components.dot(&coords);
                residual.dot(&residual)
            }
        }
    }
}

/// Component indices whose quadratic form is at least the `q`-quantile.
///
/// With forms sorted ascending the cut sits at index `⌊q·k⌋`; every
/// component tying the boundary value is included.
pub fn high_frequency_set(forms: &[f64], q: f64) -> Vec<usize> {
    if forms.is_empty() {
        return Vec::new();
    }
    let mut sorted = forms.to_vec();
    sorted.sort_by(f64::total_cmp);
    let cut = ((q * forms.len() as f64).floor() as usize).min(forms.len() - 1);
    let threshold = sorted[cut];
    (0..forms.len())
        .filter(|&m| forms[m] >= threshold)
        .collect()
}

/// Fits the sparse-GFT detector on clean training data.
pub fn fit_detector(train: &SignalMatrix, config: &DetectorConfig) -> Result<Detector> {
    if !(config.hf_quantile > 0.0 && config.hf_quantile < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "hf_quantile must lie in (0, 1), got {}",
            config.hf_quantile
        )));
    }
    let graph = match &config.graph {
        GraphSource::Given(g) => {
            if g.vertex_count() != train.sources() {
                return Err(Error::DimensionMismatch {
                    expected: train.sources(),
                    found: g.vertex_count(),
                });
            }
            g.clone()
        }
        GraphSource::Auto { epsilon } => correlation_graph(train, *epsilon)?,
    };
    let phi = laplacian(&graph, config.kind);
    let basis = sparse_gft(&phi, &config.solver)?;
    let high_freq = high_frequency_set(basis.quadratic_forms(), config.hf_quantile);

    let k = basis.k();
    let n = train.rows();
    let mut sums = vec![0.0; k];
    let projections: Vec<Array1<f64>> = (0..n)
        .map(|i| analyze(train.row(i), &basis))
        .collect::<Result<_>>()?;
    for xt in &projections {
        for m in 0..k {
            sums[m] += xt[m];
        }
    }
    let mean: Vec<f64> = sums.iter().map(|s| s / n as f64).collect();
    let std: Vec<f64> = (0..k)
        .map(|m| {
            if n < 2 {
                return STD_FLOOR;
            }
            let ss: f64 = projections.iter().map(|xt| (xt[m] - mean[m]).powi(2)).sum();
            (ss / (n - 1) as f64).sqrt().max(STD_FLOOR)
        })
        .collect();

    Ok(Detector::Spectral(SpectralDetector {
        basis,
        graph,
        config: config.clone(),
        high_freq,
        mean,
        std,
    }))
}

/// PCA residual baseline keeping `n_components` leading directions.
pub fn pca_baseline_detector(train: &SignalMatrix, n_components: usize) -> Result<Detector> {
    let p = train.sources();
    if n_components >= p {
        return Err(Error::InvalidConfig(format!(
            "PCA baseline needs n_components < {p}, got {n_components}"
        )));
    }
    let n = train.rows();
    if n < 2 {
        return Err(Error::InvalidSignal(
            "PCA baseline needs at least 2 rows".into(),
        ));
    }
    let mean = train.column_means();
    let centered = &train.values() - &mean;
    let mut cov = SymMatrix::gram(centered.view()).into_array();
    cov /= (n - 1) as f64;
    let cov = SymMatrix::from_array(cov)?;
    let eig = sym_eigendecomposition(&cov, DEFAULT_EIGEN_TOL)?;
    let mut components = Array2::zeros((p, n_components));
    for j in 0..n_components {
        components
            .column_mut(j)
            .assign(&eig.eigenvectors.column(p - 1 - j));
    }
    Ok(Detector::Pca(PcaDetector { mean, components }))
}

/// Anomaly score of every row, in input order. Higher is more anomalous.
pub fn score(detector: &Detector, signals: &SignalMatrix) -> Result<Vec<f64>> {
    if signals.sources() != detector.sources() {
        return Err(Error::DimensionMismatch {
            expected: detector.sources(),
            found: signals.sources(),
        });
    }
    Ok((0..signals.rows())
        .into_par_iter()
        .map(|i| detector.score_row(signals.row(i)))
        .collect())
}

/// Area under the ROC curve via the Mann–Whitney statistic; ties count half.
///
/// Runs in `O(n log n)`. The pair count is accumulated in integer half-units
/// so the result is the exact ratio a pairwise count would produce.
pub fn auc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: scores.len(),
            found: labels.len(),
        });
    }
    let n_pos = labels.iter().filter(|&&l| l).count() as u64;
    let n_neg = labels.len() as u64 - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::DegenerateLabels);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&i, &j| scores[i].total_cmp(&scores[j]));

    let mut twice_wins: u64 = 0;
    let mut neg_below: u64 = 0;
    let mut start = 0;
    while start < order.len() {
        let value = scores[order[start]];
        let mut end = start;
        let (mut pos, mut neg) = (0u64, 0u64);
        while end < order.len() && scores[order[end]].total_cmp(&value).is_eq() {
            if labels[order[end]] {
                pos += 1;
            } else {
                neg += 1;
            }
            end += 1;
        }
        twice_wins += pos * (2 * neg_below + neg);
        neg_below += neg;
        start = end;
    }
    Ok(twice_wins as f64 / (2 * n_pos * n_neg) as f64)
}

/// Adds `magnitude_sigmas · source_std[j]` to one random source `j` on
/// `count` distinct random rows and labels those rows anomalous.
pub fn inject_anomalies(
    signals: &SignalMatrix,
    source_std: &[f64],
    seed: u64,
    count: usize,
    magnitude_sigmas: f64,
) -> Result<LabeledDataset> {
    let (n, p) = (signals.rows(), signals.sources());
    if count >= n {
        return Err(Error::InvalidCount { count, rows: n });
    }
    if !(magnitude_sigmas > 0.0 && magnitude_sigmas.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "magnitude must be positive, got {magnitude_sigmas}"
        )));
    }
    if source_std.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            found: source_std.len(),
        });
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut values = signals.values().to_owned();
    let mut labels = vec![false; n];
    for row in sample(&mut rng, n, count).into_iter() {
        let source = rng.random_range(0..p);
        values[[row, source]] += magnitude_sigmas * source_std[source];
        labels[row] = true;
    }
    LabeledDataset::new(
        SignalMatrix::new(values, Some(signals.names().to_vec()))?,
        labels,
    )
}

//! Graph Fourier transforms computed by regression.
//!
//! The classic GFT projects a graph signal onto the eigenvectors of the graph
//! Laplacian. This crate also computes the analysis components by alternating
//! regression against a factor of the Laplacian, which admits extra penalties:
//! with a lasso term the components become sparse, each selecting a sub-graph
//! of correlated sources and measuring frequency locally within it.
//!
//! Modules:
//!
//! * [`graph`]: graphs, adjacency/degree/Laplacian matrices, incidence factor,
//!   correlation graphs.
//! * [`spectral`]: Jacobi eigensolver and the classic GFT basis.
//! * [`solver`]: FISTA elastic net, Procrustes step and [`solver::sparse_gft`].
//! * [`signal`]: analysis/synthesis and the three-factor synthetic generator.
//! * [`anomaly`]: spectral and PCA detectors, anomaly injection, AUC.

pub mod anomaly;
pub mod basis;
pub mod error;
pub mod graph;
pub mod signal;
pub mod solver;
pub mod spectral;

pub use anomaly::{
    auc, fit_detector, inject_anomalies, pca_baseline_detector, score, Detector, DetectorConfig,
    GraphSource, LabeledDataset,
};
pub use basis::{GftBasis, SolverDiagnostics};
pub use error::{Error, Result};
pub use graph::{
    adjacency_matrix, correlation_graph, degree_matrix, incidence_factor, laplacian, Edge, Graph,
    LaplacianKind, SymMatrix,
};
pub use signal::{analyze, generate_synthetic, synthesize, SignalMatrix};
pub use solver::{component_support, sparse_gft, SolverConfig};
pub use spectral::{classic_gft_basis, quadratic_form, sym_eigendecomposition, EigenDecomposition};

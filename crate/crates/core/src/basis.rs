use ndarray::{Array2, ArrayView1};

/// Convergence record of a [`crate::solver::sparse_gft`] run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverDiagnostics {
    pub outer_iterations: usize,
    /// Objective value after the final outer iteration.
    pub objective: f64,
    /// Objective value at initialisation followed by one entry per outer iteration.
    pub objective_history: Vec<f64>,
    /// FISTA iterations used by each component in the last B-step, in output order.
    pub fista_iterations: Vec<usize>,
    /// Outer loop met its tolerance and every column's FISTA run met its own.
    pub converged: bool,
}

/// Ordered set of GFT analysis components.
///
/// Components are the columns of a `p × k` matrix, sorted by ascending
/// Laplacian quadratic form.
#[derive(Debug, Clone, PartialEq)]
pub struct GftBasis {
    components: Array2<f64>,
    quadratic_forms: Vec<f64>,
    degenerate: Vec<bool>,
    orthonormal: bool,
    diagnostics: Option<SolverDiagnostics>,
}

impl GftBasis {
    pub fn new(
        components: Array2<f64>,
        quadratic_forms: Vec<f64>,
        degenerate: Vec<bool>,
        orthonormal: bool,
        diagnostics: Option<SolverDiagnostics>,
    ) -> Self {
        assert_eq!(components.ncols(), quadratic_forms.len());
        assert_eq!(components.ncols(), degenerate.len());
        Self {
            components,
            quadratic_forms,
            degenerate,
            orthonormal,
            diagnostics,
        }
    }

    /// Vertex count.
    pub fn p(&self) -> usize {
        self.components.nrows()
    }

    /// Component count.
    pub fn k(&self) -> usize {
        self.components.ncols()
    }

    /// `p × k` matrix whose columns are the components.
    pub fn components(&self) -> &Array2<f64> {
        &self.components
    }

    pub fn component(&self, m: usize) -> ArrayView1<'_, f64> {
        self.components.column(m)
    }

    pub fn quadratic_forms(&self) -> &[f64] {
        &self.quadratic_forms
    }

    /// Per-component flag, true for an all-zero column.
    pub fn degenerate(&self) -> &[bool] {
        &self.degenerate
    }

    pub fn orthonormal(&self) -> bool {
        self.orthonormal
    }

    pub fn diagnostics(&self) -> Option<&SolverDiagnostics> {
        self.diagnostics.as_ref()
    }

    pub fn has_nonzero_component(&self) -> bool {
        self.degenerate.iter().any(|d| !d)
    }
}

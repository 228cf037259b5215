//! Undirected weighted graphs and the matrices derived from them.
//!
//! Everything is stored densely. The graphs this crate targets have at most a
//! few hundred vertices, where a dense `p × p` array is both the fastest and
//! the simplest representation.

use std::collections::BTreeMap;

use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};
use crate::signal::SignalMatrix;

/// One undirected edge, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Undirected weighted graph over `p` vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    p: usize,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph from `(u, v, w)` triples.
    ///
    /// Edges are canonicalised to `u < v` and sorted. Self-loops, duplicate
    /// pairs (in either orientation), out-of-range indices and non-positive or
    /// non-finite weights are rejected.
    pub fn new<I>(p: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if p == 0 {
            return Err(Error::InvalidGraph("vertex count must be positive".into()));
        }
        let mut seen = BTreeMap::new();
        for (a, b, w) in edges {
            if a >= p || b >= p {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a},{b}) out of range for {p} vertices"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a},{b}) has non-positive weight {w}"
                )));
            }
            let key = (a.min(b), a.max(b));
            if seen.insert(key, w).is_some() {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({},{})",
                    key.0, key.1
                )));
            }
        }
        let edges = seen
            .into_iter()
            .map(|((u, v), w)| Edge { u, v, w })
            .collect();
        Ok(Self { p, edges })
    }

    /// Graph with `p` vertices and no edges.
    pub fn empty(p: usize) -> Result<Self> {
        Self::new(p, std::iter::empty())
    }

    pub fn vertex_count(&self) -> usize {
        self.p
    }

    /// Edges in canonical order (`u < v`, lexicographic).
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.p];
        for e in &self.edges {
            d[e.u] += e.w;
            d[e.v] += e.w;
        }
        d
    }

    /// True when every vertex is reachable from vertex 0.
    pub fn is_connected(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.p).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = self.p;
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        components == 1
    }
}

/// Dense symmetric matrix.
///
/// Every constructor writes `(i, j)` and `(j, i)` from the same value, so the
/// stored array is exactly symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(Array2<f64>);

impl SymMatrix {
    pub fn zeros(p: usize) -> Self {
        Self(Array2::zeros((p, p)))
    }

    pub fn identity(p: usize) -> Self {
        Self(Array2::eye(p))
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        Self(Array2::from_diag(&ndarray::Array1::from(diag.to_vec())))
    }

    /// Builds the matrix from its upper triangle, `f(i, j)` with `i <= j`.
    pub fn from_upper_fn(p: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Array2::zeros((p, p));
        for i in 0..p {
            for j in i..p {
                let x = f(i, j);
                m[[i, j]] = x;
                m[[j, i]] = x;
            }
        }
        Self(m)
    }

    /// Wraps an array that must already be exactly symmetric.
    pub fn from_array(a: Array2<f64>) -> Result<Self> {
        let (r, c) = a.dim();
        if r != c {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: c,
            });
        }
        for i in 0..r {
            for j in (i + 1)..r {
                if a[[i, j]] != a[[j, i]] {
                    return Err(Error::InvalidConfig(format!(
                        "matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self(a))
    }

    /// `GᵀG` for an arbitrary `h × p` matrix `G`; the result is PSD.
    pub fn gram(g: ArrayView2<f64>) -> Self {
        let p = g.ncols();
        Self::from_upper_fn(p, |i, j| g.column(i).dot(&g.column(j)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.0.view()
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.0
    }

    pub fn into_array(self) -> Array2<f64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[[i, j]]
    }

    pub fn trace(&self) -> f64 {
        self.0.diag().sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Which graph Laplacian to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LaplacianKind {
    /// `I − D^{-1/2} W D^{-1/2}`.
    #[default]
    Normalized,
    /// `D − W`.
    Unnormalized,
}

impl LaplacianKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LaplacianKind::Normalized => "normalized",
            LaplacianKind::Unnormalized => "unnormalized",
        }
    }
}

impl std::str::FromStr for LaplacianKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "normalized" => Ok(Self::Normalized),
            "unnormalized" => Ok(Self::Unnormalized),
            other => Err(format!("unknown Laplacian kind `{other}`")),
        }
    }
}

pub fn adjacency_matrix(g: &Graph) -> SymMatrix {
    let mut w = Array2::zeros((g.p, g.p));
    for e in &g.edges {
        w[[e.u, e.v]] = e.w;
        w[[e.v, e.u]] = e.w;
    }
    SymMatrix(w)
}

pub fn degree_matrix(g: &Graph) -> SymMatrix {
    SymMatrix::from_diag(&g.degrees())
}

/// Graph Laplacian of the requested kind.
///
/// For the normalized Laplacian an isolated vertex gets a zero row and column,
/// including a zero diagonal entry.
pub fn laplacian(g: &Graph, kind: LaplacianKind) -> SymMatrix {
    let d = g.degrees();
    let mut l = Array2::zeros((g.p, g.p));
    match kind {
        LaplacianKind::Unnormalized => {
            for (i, &di) in d.iter().enumerate() {
                l[[i, i]] = di;
            }
            for e in &g.edges {
                l[[e.u, e.v]] = -e.w;
                l[[e.v, e.u]] = -e.w;
            }
        }
        LaplacianKind::Normalized => {
            for (i, &di) in d.iter().enumerate() {
                if di > 0.0 {
                    l[[i, i]] = 1.0;
                }
            }
            for e in &g.edges {
                let x = -e.w / (d[e.u] * d[e.v]).sqrt();
                l[[e.u, e.v]] = x;
                l[[e.v, e.u]] = x;
            }
        }
    }
    SymMatrix(l)
}

/// Factor `S` (one row per edge) with `SᵀS` equal to the Laplacian.
///
/// Row `e` for edge `(u, v, w)` carries `+√w` at `u` and `−√w` at `v`; for the
/// normalized kind the entries are further divided by `√d_u` and `√d_v`.
pub fn incidence_factor(g: &Graph, kind: LaplacianKind) -> Array2<f64> {
    let d = g.degrees();
    let mut s = Array2::zeros((g.edges.len(), g.p));
    for (row, e) in g.edges.iter().enumerate() {
        let r = e.w.sqrt();
        let (cu, cv) = match kind {
            LaplacianKind::Unnormalized => (r, r),
            LaplacianKind::Normalized => (r / d[e.u].sqrt(), r / d[e.v].sqrt()),
        };
        s[[row, e.u]] = cu;
        s[[row, e.v]] = -cv;
    }
    s
}

/// Sample Pearson correlation between every pair of columns.
///
/// Fails with [`Error::ZeroVarianceColumn`] on a constant column.
pub fn correlation_matrix(data: &SignalMatrix) -> Result<SymMatrix> {
    let x = data.values();
    let (n, p) = x.dim();
    let mut centered = Array2::zeros((n, p));
    let mut sumsq = vec![0.0; p];
    for j in 0..p {
        let col = x.column(j);
        let first = col[0];
        if col.iter().all(|&v| v == first) {
            return Err(Error::ZeroVarianceColumn(j));
        }
        let mean = col.sum() / n as f64;
        let mut ss = 0.0;
        for i in 0..n {
            let c = col[i] - mean;
            centered[[i, j]] = c;
            ss += c * c;
        }
        sumsq[j] = ss;
    }
    Ok(SymMatrix::from_upper_fn(p, |i, j| {
        if i == j {
            1.0
        } else {
            // sqrt of the product keeps ρ = 1 exact for identical columns.
            centered.column(i).dot(&centered.column(j)) / (sumsq[i] * sumsq[j]).sqrt()
        }
    }))
}

/// Graph whose edge weights are absolute column correlations above `epsilon`.
pub fn correlation_graph(data: &SignalMatrix, epsilon: f64) -> Result<Graph> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::InvalidConfig(format!(
            "epsilon must lie in [0, 1), got {epsilon}"
        )));
    }
    if data.rows() < 3 {
        return Err(Error::InvalidSignal(format!(
            "correlation graph needs at least 3 observations, got {}",
            data.rows()
        )));
    }
    let corr = correlation_matrix(data)?;
    let p = corr.dim();
    let mut edges = Vec::new();
    for i in 0..p {
        for j in (i + 1)..p {
            // Rounding can push |ρ| of identical columns a hair above 1.
            let w = corr.get(i, j).abs().min(1.0);
            if w > epsilon {
                edges.push((i, j, w));
            }
        }
    }
    Graph::new(p, edges)
}

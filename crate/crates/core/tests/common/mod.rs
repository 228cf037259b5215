//! Test-only oracles and generators, independent of the solver code paths.
#![allow(dead_code)]

use ndarray::{Array1, Array2, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparse_gft::{Graph, SymMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi graph with uniform(0.5, 2) weights, redrawn until connected.
pub fn random_connected_graph(seed: u64, p: usize, prob: f64) -> Graph {
    let mut r = rng(seed);
    loop {
        let mut edges = Vec::new();
        for u in 0..p {
            for v in (u + 1)..p {
                if r.random::<f64>() < prob {
                    edges.push((u, v, r.random_range(0.5..2.0)));
                }
            }
        }
        let g = Graph::new(p, edges).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

/// Random graph with exactly `m` distinct edges (not necessarily connected).
pub fn random_graph_with_edges(seed: u64, p: usize, m: usize) -> Graph {
    let mut r = rng(seed);
    let mut pairs: Vec<(usize, usize)> = (0..p)
        .flat_map(|u| ((u + 1)..p).map(move |v| (u, v)))
        .collect();
    for i in (1..pairs.len()).rev() {
        let j = r.random_range(0..=i);
        pairs.swap(i, j);
    }
    Graph::new(
        p,
        pairs
            .into_iter()
            .take(m)
            .map(|(u, v)| (u, v, r.random_range(0.1..3.0))),
    )
    .unwrap()
}

pub fn standard_normal_matrix(seed: u64, rows: usize, cols: usize) -> Array2<f64> {
    let mut r = rng(seed);
    Array2::from_shape_fn((rows, cols), |_| {
        // Box–Muller, local to the tests.
        let u1: f64 = 1.0 - r.random::<f64>();
        let u2: f64 = r.random();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    })
}

pub fn random_symmetric(seed: u64, p: usize) -> SymMatrix {
    let g = standard_normal_matrix(seed, p, p);
    SymMatrix::from_upper_fn(p, |i, j| g[[i, j]])
}

/// `GᵀG / h` with `G` of size `h × p`.
pub fn random_psd(seed: u64, h: usize, p: usize) -> SymMatrix {
    let g = standard_normal_matrix(seed, h, p) / (h as f64).sqrt();
    SymMatrix::gram(g.view())
}

pub fn max_abs(a: &Array2<f64>) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Orthogonal projector onto the column span of `b`, via modified Gram–Schmidt
/// that drops columns whose residual falls below `1e-8` of their norm.
pub fn span_projector(b: ArrayView2<f64>) -> Array2<f64> {
    let p = b.nrows();
    let mut q: Vec<Array1<f64>> = Vec::new();
    for col in b.columns() {
        let norm = col.dot(&col).sqrt();
        if norm == 0.0 {
            continue;
        }
        let mut x = col.to_owned();
        for _ in 0..2 {
            for v in &q {
                let c = v.dot(&x);
                x.scaled_add(-c, v);
            }
        }
        let r = x.dot(&x).sqrt();
        if r > 1e-8 * norm {
            q.push(x / r);
        }
    }
    let mut proj = Array2::zeros((p, p));
    for v in &q {
        for i in 0..p {
            for j in 0..p {
                proj[[i, j]] += v[i] * v[j];
            }
        }
    }
    proj
}

/// Cyclic coordinate descent for
/// `βᵀΦβ − 2aᵀΦβ + λ‖β‖² + λ₁‖β‖₁`, run until no coordinate moves more than `tol`.
pub fn coordinate_descent(
    phi: &SymMatrix,
    a: &Array1<f64>,
    ridge: f64,
    lasso: f64,
    tol: f64,
    max_sweeps: usize,
) -> Array1<f64> {
    let p = phi.dim();
    let q = |i: usize, j: usize| phi.get(i, j) + if i == j { ridge } else { 0.0 };
    let c: Vec<f64> = (0..p)
        .map(|i| (0..p).map(|j| phi.get(i, j) * a[j]).sum())
        .collect();
    let mut beta: Array1<f64> = Array1::zeros(p);
    for _ in 0..max_sweeps {
        let mut biggest = 0.0_f64;
        for j in 0..p {
            let qjj = q(j, j);
            let mut r = c[j];
            for i in 0..p {
                if i != j {
                    r -= q(j, i) * beta[i];
                }
            }
            // minimise qjj·x² − 2r·x + λ₁|x|
            let half = lasso / 2.0;
            let x = if r > half {
                (r - half) / qjj
            } else if r < -half {
                (r + half) / qjj
            } else {
                0.0
            };
            biggest = biggest.max((x - beta[j]).abs());
            beta[j] = x;
        }
        if biggest <= tol {
            break;
        }
    }
    beta
}

/// Objective evaluated directly from its definition.
pub fn objective(
    phi: &SymMatrix,
    a: &Array1<f64>,
    beta: &Array1<f64>,
    ridge: f64,
    lasso: f64,
) -> f64 {
    let p = phi.dim();
    let mut f = 0.0;
    for i in 0..p {
        for j in 0..p {
            f += phi.get(i, j) * (beta[i] * beta[j] - 2.0 * a[i] * beta[j]);
        }
    }
    f + ridge * beta.iter().map(|x| x * x).sum::<f64>()
        + lasso * beta.iter().map(|x| x.abs()).sum::<f64>()
}

/// Pairwise Mann–Whitney count, `O(n²)`.
pub fn brute_force_auc(scores: &[f64], labels: &[bool]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (i, &li) in labels.iter().enumerate() {
        if !li {
            continue;
        }
        for (j, &lj) in labels.iter().enumerate() {
            if lj {
                continue;
            }
            pairs += 1.0;
            if scores[i] > scores[j] {
                wins += 1.0;
            } else if scores[i] == scores[j] {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

/// Sample Pearson correlation, two-pass.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

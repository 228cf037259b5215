mod common;

use common::*;
use ndarray::{Array1, Array2};
use sparse_gft::*;

fn column(data: &SignalMatrix, j: usize) -> Vec<f64> {
    data.values().column(j).to_vec()
}

fn variance(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0)
}

#[test]
fn synthetic_moments_large_sample() {
    let data = generate_synthetic(7, 100_000).unwrap();
    assert_eq!(data.names()[0], "X1");
    assert_eq!(data.names()[9], "X10");
    let x1 = column(&data, 0);
    let x2 = column(&data, 1);
    // Var(V1) + 1
    assert!((variance(&x1) - 291.0).abs() < 4.0, "{}", variance(&x1));
    let rho = pearson(&x1, &x2);
    // 290 / 291
    assert!((rho - 0.9966).abs() < 0.002, "{rho}");
}

#[test]
fn synthetic_block_correlations() {
    let data = generate_synthetic(11, 10_000).unwrap();
    let cols: Vec<Vec<f64>> = (0..10).map(|j| column(&data, j)).collect();
    for i in 0..8 {
        for j in (i + 1)..8 {
            let rho = pearson(&cols[i], &cols[j]);
            if (i < 4) == (j < 4) {
                assert!(rho > 0.98, "({i},{j}) {rho}");
            } else {
                assert!(rho.abs() < 0.05, "({i},{j}) {rho}");
            }
        }
    }
    // Var(V3) = 1.059 and Var(X9) = 2.059.
    let rho = pearson(&cols[8], &cols[9]);
    assert!((rho - 1.059 / 2.059).abs() < 0.03, "{rho}");
}

#[test]
fn synthetic_is_seed_deterministic() {
    assert_eq!(
        generate_synthetic(42, 50).unwrap(),
        generate_synthetic(42, 50).unwrap()
    );
    assert_ne!(
        generate_synthetic(42, 50).unwrap(),
        generate_synthetic(43, 50).unwrap()
    );
    assert_eq!(generate_synthetic(1, 1).unwrap().rows(), 1);
}

#[test]
fn analyze_is_linear_and_preserves_energy() {
    for seed in 0..10 {
        let g = random_connected_graph(seed, 9, 0.4);
        let basis = classic_gft_basis(&laplacian(&g, LaplacianKind::Normalized)).unwrap();
        for s in 0..10 {
            let xs = standard_normal_matrix(seed * 100 + s, 9, 2);
            let (x, y) = (xs.column(0), xs.column(1));
            let combo = &x * 2.5 - &y * 0.75;
            let lhs = analyze(combo.view(), &basis).unwrap();
            let rhs = analyze(x, &basis).unwrap() * 2.5 - analyze(y, &basis).unwrap() * 0.75;
            assert!((&lhs - &rhs).iter().all(|d| d.abs() < 1e-12));
            let xt = analyze(x, &basis).unwrap();
            let energy = x.dot(&x);
            assert!((xt.dot(&xt) - energy).abs() < 1e-8 * energy);
            let back = synthesize(xt.view(), &basis).unwrap();
            assert!((&back - &x).iter().all(|d| d.abs() < 1e-8));
        }
    }
}

/// Gaussian elimination with partial pivoting on a square system.
fn solve(mut a: Array2<f64>, mut b: Array1<f64>) -> Array1<f64> {
    let n = b.len();
    for c in 0..n {
        let pivot = (c..n)
            .max_by(|&i, &j| a[[i, c]].abs().total_cmp(&a[[j, c]].abs()))
            .unwrap();
        for j in 0..n {
            a.swap([c, j], [pivot, j]);
        }
        b.swap(c, pivot);
        for r in (c + 1)..n {
            let f = a[[r, c]] / a[[c, c]];
            for j in c..n {
                a[[r, j]] -= f * a[[c, j]];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = Array1::zeros(n);
    for r in (0..n).rev() {
        let s: f64 = ((r + 1)..n).map(|j| a[[r, j]] * x[j]).sum();
        x[r] = (b[r] - s) / a[[r, r]];
    }
    x
}

#[test]
fn least_squares_synthesis_with_duplicate_component() {
    for seed in 0..5 {
        let square = standard_normal_matrix(seed, 4, 4);
        let mut b = Array2::zeros((4, 5));
        b.slice_mut(ndarray::s![.., ..4]).assign(&square);
        b.column_mut(4).assign(&square.column(3));
        let basis = GftBasis::new(b.clone(), vec![0.0; 5], vec![false; 5], false, None);
        let xt = standard_normal_matrix(seed + 50, 5, 1).column(0).to_owned();

        let x = synthesize(xt.view(), &basis).unwrap();

        // The two duplicate equations collapse to their average.
        let rhs = Array1::from(vec![xt[0], xt[1], xt[2], 0.5 * (xt[3] + xt[4])]);
        let expected = solve(square.t().to_owned(), rhs);
        assert!(
            (&x - &expected).iter().all(|d| d.abs() < 1e-8),
            "seed {seed}: {x} vs {expected}"
        );
        let residual = b.t().dot(&x) - &xt;
        let norm = residual.dot(&residual).sqrt();
        assert!((norm - (xt[3] - xt[4]).abs() / 2f64.sqrt()).abs() < 1e-8);
    }
}

#[test]
fn signal_matrix_rejects_bad_input() {
    assert!(SignalMatrix::new(Array2::from_elem((2, 2), f64::NAN), None).is_err());
    assert!(SignalMatrix::new(Array2::zeros((0, 3)), None).is_err());
    assert!(SignalMatrix::new(Array2::zeros((2, 3)), Some(vec!["a".into()])).is_err());
}

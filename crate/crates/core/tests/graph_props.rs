mod common;

use common::*;
use ndarray::Array2;
use proptest::prelude::*;
use sparse_gft::signal::GaussianSampler;
use sparse_gft::*;

fn arb_graph(max_p: usize) -> impl Strategy<Value = Graph> {
    (2..=max_p).prop_flat_map(|p| {
        let pairs: Vec<(usize, usize)> = (0..p)
            .flat_map(|u| ((u + 1)..p).map(move |v| (u, v)))
            .collect();
        let n = pairs.len();
        (
            Just(p),
            Just(pairs),
            proptest::collection::vec(proptest::option::weighted(0.4, 0.05f64..5.0), n),
        )
            .prop_map(|(p, pairs, weights)| {
                let edges = pairs
                    .into_iter()
                    .zip(weights)
                    .filter_map(|((u, v), w)| w.map(|w| (u, v, w)));
                Graph::new(p, edges).unwrap()
            })
    })
}

fn kinds() -> impl Strategy<Value = LaplacianKind> {
    prop_oneof![
        Just(LaplacianKind::Normalized),
        Just(LaplacianKind::Unnormalized)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laplacian_is_psd(g in arb_graph(16), kind in kinds()) {
        let l = laplacian(&g, kind);
        let eig = sym_eigendecomposition(&l, 1e-12).unwrap();
        prop_assert!(eig.eigenvalues[0] >= -1e-10, "{:?}", eig.eigenvalues);
        if kind == LaplacianKind::Normalized {
            prop_assert!(*eig.eigenvalues.last().unwrap() <= 2.0 + 1e-10);
        }
    }

    #[test]
    fn incidence_factor_reproduces_laplacian(g in arb_graph(32), kind in kinds()) {
        let s = incidence_factor(&g, kind);
        prop_assert_eq!(s.nrows(), g.edges().len());
        let sts = if s.nrows() == 0 {
            Array2::zeros((g.vertex_count(), g.vertex_count()))
        } else {
            s.t().dot(&s)
        };
        let diff = &sts - laplacian(&g, kind).as_array();
        prop_assert!(max_abs(&diff) < 1e-12);
    }

    #[test]
    fn null_vectors(g in arb_graph(16)) {
        let p = g.vertex_count();
        let ones = ndarray::Array1::<f64>::ones(p);
        let l = laplacian(&g, LaplacianKind::Unnormalized);
        let r = l.view().dot(&ones);
        prop_assert!(r.iter().all(|x| x.abs() < 1e-10));

        if g.is_connected() {
            let d = g.degrees();
            let v = ndarray::Array1::from_shape_fn(p, |i| d[i].sqrt());
            let r = laplacian(&g, LaplacianKind::Normalized).view().dot(&v);
            prop_assert!(r.iter().all(|x| x.abs() < 1e-10));
        }
    }

    #[test]
    fn correlation_graph_respects_column_permutation(seed in 0u64..1000, shift in 1usize..5) {
        let p = 5;
        let data = Array2::from_shape_fn((40, p), |(i, j)| {
            ((i * 7 + j * 13) as f64).sin() + ((seed as f64 + i as f64) * 0.37 * (j + 1) as f64).cos()
        });
        let perm: Vec<usize> = (0..p).map(|j| (j + shift) % p).collect();
        let permuted = Array2::from_shape_fn((40, p), |(i, j)| data[[i, perm[j]]]);
        let g = correlation_graph(&SignalMatrix::new(data, None).unwrap(), 0.1).unwrap();
        let gp = correlation_graph(&SignalMatrix::new(permuted, None).unwrap(), 0.1).unwrap();
        // Column j of the permuted data is column perm[j] of the original.
        let w = adjacency_matrix(&g);
        let wp = adjacency_matrix(&gp);
        for i in 0..p {
            for j in 0..p {
                prop_assert!((wp.get(i, j) - w.get(perm[i], perm[j])).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn path3_normalized_spectrum() {
    let g = Graph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
    let eig = sym_eigendecomposition(&laplacian(&g, LaplacianKind::Normalized), 1e-12).unwrap();
    for (got, want) in eig.eigenvalues.iter().zip([0.0, 1.0, 2.0]) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn incidence_factor_random_normalized() {
    let g = random_graph_with_edges(3, 8, 15);
    assert_eq!(g.edges().len(), 15);
    let s = incidence_factor(&g, LaplacianKind::Normalized);
    let diff = &s.t().dot(&s) - laplacian(&g, LaplacianKind::Normalized).as_array();
    assert!(max_abs(&diff) < 1e-12);
}

#[test]
fn independent_columns_have_no_edge() {
    let mut g = GaussianSampler::new(99);
    let data = Array2::from_shape_fn((10_000, 2), |_| g.standard());
    let graph = correlation_graph(&SignalMatrix::new(data, None).unwrap(), 0.2).unwrap();
    assert!(graph.edges().is_empty());
}

#[test]
fn synthetic_correlation_graph_blocks() {
    let data = generate_synthetic(5, 1000).unwrap();
    let graph = correlation_graph(&data, 0.3).unwrap();
    let w = adjacency_matrix(&graph);
    let cols: Vec<Vec<f64>> = (0..10).map(|j| data.values().column(j).to_vec()).collect();
    for i in 0..10 {
        for j in (i + 1)..10 {
            let rho = pearson(&cols[i], &cols[j]).abs();
            let expected = if rho > 0.3 { rho } else { 0.0 };
            assert!((w.get(i, j) - expected).abs() < 1e-12, "({i},{j})");
            let same_block = (i < 4 && j < 4) || ((4..8).contains(&i) && (4..8).contains(&j));
            let cross = i < 4 && (4..8).contains(&j);
            if same_block {
                assert!(w.get(i, j) > 0.0);
            }
            if cross {
                assert_eq!(w.get(i, j), 0.0);
            }
        }
    }
}

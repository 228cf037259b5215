mod common;

use common::*;
use ndarray::{Array1, Array2};
use proptest::prelude::*;
use sparse_gft::*;

fn check_decomposition(m: &SymMatrix) {
    let eig = sym_eigendecomposition(m, 1e-12).unwrap();
    let v = &eig.eigenvectors;
    let lambda = Array2::from_diag(&Array1::from(eig.eigenvalues.clone()));
    let residual = m.view().dot(v) - v.dot(&lambda);
    assert!(max_abs(&residual) < 1e-8 * m.max_abs().max(1.0));
    let ortho = v.t().dot(v) - Array2::<f64>::eye(m.dim());
    assert!(max_abs(&ortho) < 1e-8);
    assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    let sum: f64 = eig.eigenvalues.iter().sum();
    assert!((sum - m.trace()).abs() <= 1e-9 * m.trace().abs().max(1.0));
}

#[test]
fn random_symmetric_12() {
    check_decomposition(&random_symmetric(12, 12));
}

#[test]
fn deterministic_output() {
    let m = random_symmetric(4, 20);
    assert_eq!(
        sym_eigendecomposition(&m, 1e-12).unwrap(),
        sym_eigendecomposition(&m, 1e-12).unwrap()
    );
}

#[test]
fn repeated_eigenvalues_span_the_right_subspace() {
    // Complete graph K4, unnormalized: eigenvalues 0, 4, 4, 4.
    let g = Graph::new(
        4,
        (0..4).flat_map(|u| ((u + 1)..4).map(move |v| (u, v, 1.0))),
    )
    .unwrap();
    let eig = sym_eigendecomposition(&laplacian(&g, LaplacianKind::Unnormalized), 1e-12).unwrap();
    let top = eig.eigenvectors.slice(ndarray::s![.., 1..]).to_owned();
    let expected = Array2::<f64>::eye(4) - Array2::from_elem((4, 4), 0.25);
    assert!(max_abs(&(span_projector(top.view()) - expected)) < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decomposition_invariants(seed in 0u64..10_000, p in 1usize..40) {
        check_decomposition(&random_symmetric(seed, p));
    }

    #[test]
    fn parseval_and_round_trip(seed in 0u64..10_000, p in 2usize..16) {
        let g = random_connected_graph(seed, p, 0.4);
        let basis = classic_gft_basis(&laplacian(&g, LaplacianKind::Normalized)).unwrap();
        let x = standard_normal_matrix(seed + 1, p, 1).column(0).to_owned();
        let xt = analyze(x.view(), &basis).unwrap();
        let energy = x.dot(&x);
        prop_assert!((xt.dot(&xt) - energy).abs() < 1e-8 * energy);
        let back = synthesize(xt.view(), &basis).unwrap();
        prop_assert!((&back - &x).iter().all(|d| d.abs() < 1e-8));
    }

    #[test]
    fn classic_forms_equal_recomputed_quadratic_forms(seed in 0u64..10_000, p in 2usize..16) {
        let g = random_connected_graph(seed, p, 0.4);
        let phi = laplacian(&g, LaplacianKind::Unnormalized);
        let basis = classic_gft_basis(&phi).unwrap();
        for m in 0..basis.k() {
            let q = quadratic_form(basis.component(m), &phi);
            prop_assert!((q - basis.quadratic_forms()[m]).abs() < 1e-10 * phi.max_abs().max(1.0));
        }
    }
}

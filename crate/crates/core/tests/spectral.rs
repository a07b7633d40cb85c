mod common;

use common::*;
use graphsig::filters::{design, FilterDesign, FilterMethod, Kernel};
use graphsig::graph::{self, SbmParams};
use graphsig::spectral::{gft, igft, localize, SpectralError};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

#[test]
fn lmax_estimate_brackets_true_value() {
    for g in [graph::ring(64).unwrap(), graph::path(40).unwrap(), graph::sensor(120, 6, 3).unwrap()] {
        let exact = sorted_eigenvalues(&dense(g.l())).last().copied().unwrap();
        let est = g.estimate_lmax();
        assert!(est >= exact - 1e-8 && est <= 1.05 * exact, "{est} vs {exact}");
    }
    let ring = graph::ring(64).unwrap();
    assert!((3.9..=4.1).contains(&ring.estimate_lmax()));
}

#[test]
fn ring4_basis() {
    let g = graph::ring(4).unwrap();
    let s = g.compute_fourier_basis().unwrap();
    for (a, b) in s.e.iter().zip([0.0, 2.0, 2.0, 4.0]) {
        assert!((a - b).abs() <= 1e-12);
    }
    assert!(s.u.column(0).iter().all(|v| (v - 0.5).abs() <= 1e-12));
    assert!((s.u.tr_mul(&s.u) - DMatrix::identity(4, 4)).amax() <= 1e-12);
    assert_eq!(s.lmax, s.e[3]);
}

#[test]
fn constant_first_eigenvector() {
    let g = graph::sensor(50, 6, 1).unwrap();
    let s = g.compute_fourier_basis().unwrap();
    let c = 1.0 / 50f64.sqrt();
    assert!(s.e[0].abs() <= 1e-10);
    assert!(s.u.column(0).iter().all(|v| (v - c).abs() <= 1e-10));
}

#[test]
fn disconnected_cliques_double_zero() {
    let g = graph::sbm(&SbmParams { n: 10, block_sizes: vec![5, 5], p_in: 1.0, p_out: 0.0 }, 0).unwrap();
    let s = g.compute_fourier_basis().unwrap();
    assert!(s.e[0].abs() <= 1e-10 && s.e[1].abs() <= 1e-10 && s.e[2] > 1.0);
}

#[test]
fn gft_of_constant_and_eigenvector() {
    let g = graph::ring(8).unwrap();
    let s = g.compute_fourier_basis().unwrap().clone();
    let ones = DMatrix::from_element(8, 1, 1.0);
    let fhat = gft(&g, &ones).unwrap();
    assert!((fhat[(0, 0)] - 8f64.sqrt()).abs() <= 1e-12);
    assert!(fhat.rows(1, 7).amax() <= 1e-12);

    let u3 = DMatrix::from_column_slice(8, 1, s.u.column(3).as_slice());
    let hat = gft(&g, &u3).unwrap();
    for l in 0..8 {
        let expected = if l == 3 { 1.0 } else { 0.0 };
        assert!((hat[(l, 0)] - expected).abs() <= 1e-12);
    }
}

#[test]
fn missing_basis_and_shape_errors() {
    let g = graph::ring(5).unwrap();
    assert_eq!(gft(&g, &DMatrix::zeros(5, 1)).unwrap_err(), SpectralError::MissingFourierBasis);
    g.compute_fourier_basis().unwrap();
    assert_eq!(igft(&g, &DMatrix::zeros(4, 1)).unwrap_err(), SpectralError::ShapeMismatch { expected: 5, got: 4 });
    let big = graph::ring(20).unwrap();
    assert_eq!(big.compute_fourier_basis_capped(10).unwrap_err(), SpectralError::GraphTooLargeForDense { n: 20, cap: 10 });
}

#[test]
fn localize_identity_is_scaled_delta() {
    let g = graph::sensor(30, 5, 2).unwrap();
    g.compute_fourier_basis().unwrap();
    let id = Kernel::new("identity", |_| 1.0);
    let v = localize(&g, &id, 7, FilterMethod::Exact).unwrap();
    let mut expected = DVector::zeros(30);
    expected[7] = 30f64.sqrt();
    assert!((v - expected).amax() <= 1e-12);
    assert_eq!(localize(&g, &id, 30, FilterMethod::Exact).unwrap_err(), SpectralError::IndexOutOfRange { index: 30, n: 30 });
}

#[test]
fn localize_on_ring_is_shift_equivariant() {
    let g = graph::ring(16).unwrap();
    g.compute_fourier_basis().unwrap();
    let fb = design(&FilterDesign::Heat { tau: 3.0 }, g.lmax().unwrap()).unwrap();
    let k = &fb.kernels()[0];
    let a = localize(&g, k, 0, FilterMethod::Exact).unwrap();
    let b = localize(&g, k, 5, FilterMethod::Exact).unwrap();
    for i in 0..16 {
        assert!((a[i] - b[(i + 5) % 16]).abs() <= 1e-12);
    }
}

#[test]
fn ring_coherence() {
    for n in [8usize, 16, 32] {
        let g = graph::ring(n).unwrap();
        let mu = g.compute_fourier_basis().unwrap().mu;
        assert!((mu - (2.0 / n as f64).sqrt()).abs() <= 1e-10, "n={n}: {mu}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn parseval_and_roundtrip(n in 3usize..40, p in 0.05f64..0.5, seed in any::<u64>()) {
        let g = random_graph(n, p, false, seed);
        g.compute_fourier_basis().unwrap();
        let f = normal_mat(n, 2, seed ^ 1);
        let fhat = gft(&g, &f).unwrap();
        prop_assert!((fhat.norm() - f.norm()).abs() <= 1e-10 * f.norm().max(1.0));
        prop_assert!((igft(&g, &fhat).unwrap() - f).amax() <= 1e-10);
    }

    #[test]
    fn lmax_bounds(n in 3usize..60, p in 0.05f64..0.5, seed in any::<u64>()) {
        let g = random_graph(n, p, false, seed);
        let exact = *sorted_eigenvalues(&dense(g.l())).last().unwrap();
        let est = g.estimate_lmax();
        prop_assert!(est >= exact * (1.0 - 1e-8) && est <= 1.05 * exact, "{} {}", est, exact);
    }

    #[test]
    fn basis_is_bit_reproducible(n in 3usize..30, seed in any::<u64>()) {
        let a = random_graph(n, 0.3, false, seed);
        let b = random_graph(n, 0.3, false, seed);
        let ua = &a.compute_fourier_basis().unwrap().u;
        let ub = &b.compute_fourier_basis().unwrap().u;
        prop_assert!(ua.iter().zip(ub.iter()).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
}

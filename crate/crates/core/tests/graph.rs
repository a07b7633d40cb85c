mod common;

use std::f64::consts::E;

use common::*;
use graphsig::graph::{
    self, laplacian, nn_graph, patch_graph, stationary_distribution, Graph, GraphError, Image, LaplacianKind, NnStrategy,
    PatchGraphParams, SbmParams, SearchWindow, Sigma,
};
use graphsig::sparse;
use nalgebra::{DMatrix, Rotation2};
use proptest::prelude::*;

fn from_rows(rows: &[&[f64]]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j])
}

#[test]
fn single_edge_graph() {
    let g = Graph::from_dense(&from_rows(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
    assert_eq!((g.n(), g.ne()), (2, 1));
    assert_eq!(g.degrees().as_slice(), &[1.0, 1.0]);
    assert_eq!(dense(g.l()), from_rows(&[&[1.0, -1.0], &[-1.0, 1.0]]));
}

#[test]
fn directed_counts_stored_arcs() {
    let w = from_rows(&[&[0.0, 2.0, 0.0], &[0.0, 0.0, 3.0], &[0.0, 0.0, 0.0]]);
    let g = Graph::builder(sparse::from_dense(&w, 0.0)).directed(true).build().unwrap();
    assert_eq!(g.ne(), 2);
    assert_eq!(g.degrees().as_slice(), &[2.0, 3.0, 0.0]);
}

#[test]
fn self_loops_are_dropped() {
    let w = from_rows(&[&[0.0, 1.0], &[1.0, 5.0]]);
    let g = Graph::from_dense(&w).unwrap();
    assert!(g.self_loops_dropped());
    assert!(dense(g.w()).diagonal().iter().all(|&v| v == 0.0));
}

#[test]
fn asymmetric_undirected_input_is_averaged() {
    let w = from_rows(&[&[0.0, 1.0], &[3.0, 0.0]]);
    let g = Graph::builder(sparse::from_dense(&w, 0.0)).directed(false).build().unwrap();
    assert!(g.was_symmetrized());
    assert_eq!(dense(g.w()), from_rows(&[&[0.0, 2.0], &[2.0, 0.0]]));
}

#[test]
fn construction_errors() {
    assert!(matches!(Graph::from_dense(&DMatrix::zeros(2, 3)), Err(GraphError::NonSquare { .. })));
    assert!(matches!(Graph::from_dense(&from_rows(&[&[0.0, -1.0], &[-1.0, 0.0]])), Err(GraphError::NegativeWeight { .. })));
    assert!(matches!(Graph::from_dense(&from_rows(&[&[0.0, f64::NAN], &[1.0, 0.0]])), Err(GraphError::NonFinite { .. })));
    assert_eq!(Graph::from_dense(&DMatrix::zeros(0, 0)).unwrap_err(), GraphError::EmptyGraph);
}

#[test]
fn path3_combinatorial_matches_dense_formula() {
    let g = graph::path(3).unwrap();
    let expected = from_rows(&[&[1.0, -1.0, 0.0], &[-1.0, 2.0, -1.0], &[0.0, -1.0, 1.0]]);
    assert_eq!(dense(g.l()), expected);
    assert_eq!(expected, dense_laplacian(&dense(g.w()), LaplacianKind::Combinatorial));
}

#[test]
fn path3_normalized_spectrum() {
    let g = graph::path(3).unwrap().with_laplacian(LaplacianKind::Normalized).unwrap();
    let got = sorted_eigenvalues(&dense(g.l()));
    let oracle = sorted_eigenvalues(&dense_laplacian(&dense(g.w()), LaplacianKind::Normalized));
    for (a, b) in got.iter().zip(&oracle) {
        assert!((a - b).abs() <= 1e-12);
        assert!((-1e-12..=2.0 + 1e-12).contains(a));
    }
    // the normalized path Laplacian has spectrum {0, 1, 2}
    assert!((oracle[1] - 1.0).abs() < 1e-12 && (oracle[2] - 2.0).abs() < 1e-12);
}

#[test]
fn directed_two_cycle_distribution_normalized() {
    let w = from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let g = Graph::builder(sparse::from_dense(&w, 0.0)).directed(true).build().unwrap();
    let l = dense(&laplacian(&g, LaplacianKind::DistributionNormalized).unwrap());
    let oracle = dense_laplacian(&w, LaplacianKind::DistributionNormalized);
    assert!((&l - &oracle).amax() <= 1e-12);
    assert!((&l - from_rows(&[&[1.0, -1.0], &[-1.0, 1.0]])).amax() <= 1e-12);
    let data = stationary_distribution(&g).unwrap();
    assert!((data.pi[0] - 0.5).abs() <= 1e-12 && (data.pi[1] - 0.5).abs() <= 1e-12);
}

#[test]
fn kind_errors() {
    let directed = random_graph(8, 0.3, true, 1);
    assert_eq!(directed.with_laplacian(LaplacianKind::Combinatorial).unwrap_err(), GraphError::KindMismatch { kind: LaplacianKind::Combinatorial });
    let chain = Graph::builder(sparse::from_dense(&from_rows(&[&[0.0, 1.0], &[0.0, 0.0]]), 0.0)).directed(true).build().unwrap();
    assert_eq!(chain.with_laplacian(LaplacianKind::DistributionNormalized).unwrap_err(), GraphError::NotStronglyConnected);
    assert!(matches!(chain.with_laplacian(LaplacianKind::DegreeNormalized), Err(GraphError::ZeroDegreeVertex { .. })));
}

#[test]
fn stationary_distribution_cases() {
    let ring = DMatrix::from_fn(4, 4, |i, j| if j == (i + 1) % 4 { 1.0 } else { 0.0 });
    let g = Graph::builder(sparse::from_dense(&ring, 0.0)).directed(true).build().unwrap();
    let pi = stationary_distribution(&g).unwrap().pi;
    assert!(pi.iter().all(|p| (p - 0.25).abs() <= 1e-12));

    let chain = Graph::builder(sparse::from_dense(&from_rows(&[&[0.0, 1.0], &[0.0, 0.0]]), 0.0)).directed(true).build().unwrap();
    assert_eq!(stationary_distribution(&chain).unwrap_err(), GraphError::ZeroOutDegree { vertex: 1 });

    let w = random_weights(10, 0.3, true, 5);
    let g = Graph::builder(sparse::from_dense(&w, 0.0)).directed(true).build().unwrap();
    let data = stationary_distribution(&g).unwrap();
    assert!(data.residual() <= 1e-10);
    let p = DMatrix::from_fn(10, 10, |i, j| w[(i, j)] / w.row(i).sum());
    assert!((data.pi - dense_stationary(&p)).amax() <= 1e-10);
    assert!(data.p.triplet_iter().all(|(i, j, v)| (v - p[(i, j)]).abs() <= 1e-15));
}

#[test]
fn deterministic_generators() {
    let ring4 = sorted_eigenvalues(&dense(graph::ring(4).unwrap().l()));
    for (a, b) in ring4.iter().zip([0.0, 2.0, 2.0, 4.0]) {
        assert!((a - b).abs() <= 1e-12);
    }
    assert_eq!(dense(graph::path(2).unwrap().l()), from_rows(&[&[1.0, -1.0], &[-1.0, 1.0]]));
    let grid = graph::grid2d(3, 3).unwrap();
    assert_eq!((grid.n(), grid.ne()), (9, 12));
    let comet = graph::comet(3, 4).unwrap();
    assert_eq!((comet.n(), comet.ne()), (8, 7));
    assert_eq!(comet.degrees()[0], 5.0);
    assert!(matches!(graph::ring(2), Err(GraphError::SizeTooSmall(_))));
    assert!(matches!(graph::path(1), Err(GraphError::SizeTooSmall(_))));
}

#[test]
fn ring_coordinates_on_unit_circle() {
    let g = graph::ring(7).unwrap();
    let c = g.coords().unwrap();
    assert!(c.row_iter().all(|r| (r.norm() - 1.0).abs() <= 1e-12));
}

#[test]
fn random_generator_cases() {
    assert_eq!(graph::erdos_renyi(10, 0.0, 3).unwrap().ne(), 0);
    let two = graph::sbm(&SbmParams { n: 10, block_sizes: vec![5, 5], p_in: 1.0, p_out: 0.0 }, 1).unwrap();
    assert_eq!(two.ne(), 20);
    assert!(!two.is_connected());
    assert_eq!(graph::erdos_renyi(10, 1.5, 0).unwrap_err(), GraphError::BadProbability(1.5));
    assert_eq!(
        graph::sbm(&SbmParams { n: 10, block_sizes: vec![5, 4], p_in: 0.5, p_out: 0.1 }, 0).unwrap_err(),
        GraphError::BlockSizeMismatch { expected: 10, got: 9 }
    );
    for g in [graph::sensor(50, 6, 2).unwrap(), graph::two_moons(40, 1).unwrap(), graph::swiss_roll(40, 0.0, 1).unwrap()] {
        assert!(g.coords().is_some());
    }
    assert_eq!(graph::swiss_roll(40, 0.0, 1).unwrap().coords().unwrap().ncols(), 3);
}

#[test]
fn erdos_renyi_mean_edge_count() {
    let mean = (0..50u64).map(|s| graph::erdos_renyi(100, 0.1, s).unwrap().ne() as f64).sum::<f64>() / 50.0;
    assert!((mean - 495.0).abs() <= 0.05 * 495.0, "{mean}");
}

#[test]
fn nn_collinear_points() {
    let pts = DMatrix::from_row_slice(3, 1, &[0.0, 1.0, 2.0]);
    let g = nn_graph(&pts, NnStrategy::Knn(1), Sigma::Fixed(1.0)).unwrap();
    let w = dense(g.w());
    assert!((w[(0, 1)] - 1.0 / E).abs() <= 1e-15 && (w[(1, 2)] - 1.0 / E).abs() <= 1e-15);
    assert_eq!(w[(0, 2)], 0.0);
    assert_eq!(g.ne(), 2);

    let two = nn_graph(&DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 1.0]), NnStrategy::Knn(1), Sigma::Auto).unwrap();
    assert!(two.ne() == 1 && two.is_connected());
}

#[test]
fn nn_errors() {
    let pts = DMatrix::from_row_slice(3, 1, &[0.0, 1.0, 2.0]);
    assert_eq!(nn_graph(&pts, NnStrategy::Knn(3), Sigma::Auto).unwrap_err(), GraphError::KTooLarge { k: 3, points: 3 });
    assert_eq!(nn_graph(&DMatrix::zeros(4, 2), NnStrategy::Knn(1), Sigma::Auto).unwrap_err(), GraphError::DegenerateCloud);
}

/// Brute-force k nearest neighbours of every row.
fn brute_knn(pts: &DMatrix<f64>, k: usize) -> Vec<Vec<(f64, usize)>> {
    (0..pts.nrows())
        .map(|i| {
            let mut d: Vec<(f64, usize)> = (0..pts.nrows()).filter(|&j| j != i).map(|j| ((pts.row(i) - pts.row(j)).norm(), j)).collect();
            d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            d.truncate(k);
            d
        })
        .collect()
}

#[test]
fn knn_matches_brute_force() {
    let mut r = rng(11);
    let pts = DMatrix::from_fn(100, 2, |_, _| rand::RngExt::random::<f64>(&mut r));
    let g = nn_graph(&pts, NnStrategy::Knn(6), Sigma::Auto).unwrap();
    let nbrs = brute_knn(&pts, 6);
    let sigma = nbrs.iter().map(|n| n[5].0).sum::<f64>() / 100.0;
    let mut oracle = DMatrix::zeros(100, 100);
    for (i, n) in nbrs.iter().enumerate() {
        for &(d, j) in n {
            let w = (-(d * d) / (sigma * sigma)).exp();
            oracle[(i, j)] = w;
            oracle[(j, i)] = w;
        }
    }
    assert!((dense(g.w()) - oracle).amax() <= 1e-12);
    let nbr_counts = sparse::neighbours(g.w());
    assert!(nbr_counts.iter().all(|n| n.len() >= 6));
}

#[test]
fn radius_graph_matches_brute_force() {
    let mut r = rng(12);
    let pts = DMatrix::from_fn(60, 3, |_, _| rand::RngExt::random::<f64>(&mut r));
    let g = nn_graph(&pts, NnStrategy::Radius(0.3), Sigma::Fixed(0.2)).unwrap();
    let w = dense(g.w());
    for i in 0..60 {
        for j in 0..60 {
            let d = (pts.row(i) - pts.row(j)).norm();
            let expected = if i != j && d <= 0.3 { (-(d * d) / 0.04).exp() } else { 0.0 };
            assert!((w[(i, j)] - expected).abs() <= 1e-12, "({i}, {j})");
        }
    }
}

#[test]
fn patch_graph_constant_image() {
    let img = Image::from_fn(8, 8, |_, _| 0.5);
    let g = patch_graph(&img, &PatchGraphParams { k: 4, ..Default::default() }).unwrap();
    assert!(g.w().values().iter().all(|&v| v == 1.0));
    assert_eq!(g.coords().unwrap().nrows(), 64);
}

#[test]
fn patch_graph_half_image_separates_regions() {
    let img = Image::from_fn(8, 8, |_, c| if c < 4 { 0.0 } else { 1.0 });
    let params = PatchGraphParams { patch_size: 3, window: SearchWindow::Local(2), k: 4, sigma: Sigma::Auto, coord_scale: 0.0 };
    let g = patch_graph(&img, &params).unwrap();
    for (i, j, _) in g.edges() {
        let (ci, cj) = (i % 8, j % 8);
        let interior_black = |c: usize| c <= 2;
        let interior_white = |c: usize| c >= 5;
        assert!(!(interior_black(ci) && interior_white(cj) || interior_white(ci) && interior_black(cj)), "edge {i}-{j}");
    }
}

#[test]
fn single_pixel_patches_equal_intensity_nn() {
    let mut r = rng(13);
    let img = Image::from_fn(6, 5, |_, _| rand::RngExt::random::<f64>(&mut r));
    let params = PatchGraphParams { patch_size: 1, window: SearchWindow::Global, k: 3, sigma: Sigma::Fixed(0.3), coord_scale: 0.0 };
    let g = patch_graph(&img, &params).unwrap();
    let pts = DMatrix::from_fn(30, 1, |v, _| img.get(v / 5, v % 5, 0));
    let h = nn_graph(&pts, NnStrategy::Knn(3), Sigma::Fixed(0.3)).unwrap();
    assert!((dense(g.w()) - dense(h.w())).amax() <= 1e-12);
}

#[test]
fn patch_errors() {
    let img = Image::from_fn(3, 3, |_, _| 0.0);
    let params = PatchGraphParams { patch_size: 5, ..Default::default() };
    assert!(matches!(patch_graph(&img, &params), Err(GraphError::PatchLargerThanImage { .. })));
    let even = PatchGraphParams { patch_size: 2, ..Default::default() };
    assert!(matches!(patch_graph(&Image::from_fn(8, 8, |_, _| 0.0), &even), Err(GraphError::BadParameter(_))));
}

fn bits(g: &Graph) -> (Vec<usize>, Vec<usize>, Vec<u64>) {
    (g.w().row_offsets().to_vec(), g.w().col_indices().to_vec(), g.w().values().iter().map(|v| v.to_bits()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn undirected_invariants(n in 3usize..40, p in 0.05f64..0.6, seed in any::<u64>()) {
        let g = random_graph(n, p, false, seed);
        let w = dense(g.w());
        prop_assert_eq!(&w, &w.transpose());
        prop_assert!(g.degrees().iter().enumerate().all(|(i, d)| (d - w.row(i).sum()).abs() <= 1e-12 * d.max(1.0)));
        prop_assert_eq!(g.ne(), g.w().nnz() / 2);
        let l = dense(g.l());
        prop_assert!((&l - dense_laplacian(&w, LaplacianKind::Combinatorial)).amax() <= 1e-12);
        prop_assert!(l.row_iter().all(|r| r.sum().abs() <= 1e-12));
        prop_assert!(sorted_eigenvalues(&l)[0] >= -1e-10);
        let ln = dense(g.with_laplacian(LaplacianKind::Normalized).unwrap().l());
        let e = sorted_eigenvalues(&ln);
        prop_assert!(e[0] >= -1e-10 && e[n - 1] <= 2.0 + 1e-10);
    }

    #[test]
    fn directed_laplacians(n in 3usize..30, p in 0.05f64..0.5, seed in any::<u64>()) {
        let w = random_weights(n, p, true, seed);
        let g = Graph::builder(sparse::from_dense(&w, 0.0)).directed(true).build().unwrap();
        for kind in [LaplacianKind::DirectedCombinatorial, LaplacianKind::DegreeNormalized, LaplacianKind::DistributionNormalized] {
            let l = dense(&laplacian(&g, kind).unwrap());
            prop_assert!((&l - dense_laplacian(&w, kind)).amax() <= 1e-10, "{}", kind);
            if kind != LaplacianKind::DegreeNormalized {
                prop_assert!((&l - l.transpose()).amax() <= 1e-12);
                prop_assert!(sorted_eigenvalues(&l)[0] >= -1e-10);
            }
        }
    }

    #[test]
    fn generators_are_pure(seed in any::<u64>()) {
        prop_assert_eq!(bits(&graph::erdos_renyi(30, 0.2, seed).unwrap()), bits(&graph::erdos_renyi(30, 0.2, seed).unwrap()));
        prop_assert_eq!(bits(&graph::sensor(30, 5, seed).unwrap()), bits(&graph::sensor(30, 5, seed).unwrap()));
        prop_assert_eq!(bits(&graph::two_moons(30, seed).unwrap()), bits(&graph::two_moons(30, seed).unwrap()));
        let c = graph::CommunityParams::new(30);
        prop_assert_eq!(bits(&graph::community(&c, seed).unwrap()), bits(&graph::community(&c, seed).unwrap()));
    }

    #[test]
    fn knn_rotation_invariant(angle in 0.0f64..std::f64::consts::TAU, seed in any::<u64>()) {
        let mut r = rng(seed);
        let pts = DMatrix::from_fn(40, 2, |_, _| rand::RngExt::random::<f64>(&mut r));
        let rot = Rotation2::new(angle);
        let rotated = DMatrix::from_fn(40, 2, |i, c| (rot * nalgebra::Vector2::new(pts[(i, 0)], pts[(i, 1)]))[c]);
        let a = nn_graph(&pts, NnStrategy::Knn(5), Sigma::Auto).unwrap();
        let b = nn_graph(&rotated, NnStrategy::Knn(5), Sigma::Auto).unwrap();
        // near-ties between neighbour distances can swap under rounding; compare only when the sparsity patterns agree
        let (wa, wb) = (dense(a.w()), dense(b.w()));
        if a.w().col_indices() == b.w().col_indices() {
            prop_assert!((wa - wb).amax() <= 1e-12);
        }
    }
}

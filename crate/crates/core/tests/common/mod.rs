//! Dense reference implementations and random inputs shared by the integration tests.
#![allow(dead_code)]

use graphsig::graph::{Graph, LaplacianKind};
use graphsig::sparse;
use nalgebra::{DMatrix, DVector};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_vec(n: usize, seed: u64) -> DVector<f64> {
    let mut r = rng(seed);
    DVector::from_fn(n, |_, _| StandardNormal.sample(&mut r))
}

pub fn normal_mat(n: usize, k: usize, seed: u64) -> DMatrix<f64> {
    let mut r = rng(seed);
    DMatrix::from_fn(n, k, |_, _| StandardNormal.sample(&mut r))
}

/// Random weights in `[0.1, 2]` on a cycle plus extra pairs with probability `p`.
/// The cycle keeps the graph (strongly) connected.
pub fn random_weights(n: usize, p: f64, directed: bool, seed: u64) -> DMatrix<f64> {
    let mut r = rng(seed);
    let mut w = DMatrix::zeros(n, n);
    for i in 0..n {
        let j = (i + 1) % n;
        if i != j {
            w[(i, j)] = r.random_range(0.1..2.0);
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && w[(i, j)] == 0.0 && r.random_bool(p) {
                w[(i, j)] = r.random_range(0.1..2.0);
            }
        }
    }
    if !directed {
        w = (&w + w.transpose()) * 0.5;
    }
    w
}

pub fn random_graph(n: usize, p: f64, directed: bool, seed: u64) -> Graph {
    let w = random_weights(n, p, directed, seed);
    Graph::builder(sparse::from_dense(&w, 0.0)).directed(directed).build().unwrap()
}

/// Stationary distribution of `P` from the linear system `(P^T - I) pi = 0`, `sum pi = 1`.
pub fn dense_stationary(p: &DMatrix<f64>) -> DVector<f64> {
    let n = p.nrows();
    let mut a = p.transpose() - DMatrix::identity(n, n);
    let mut b = DVector::zeros(n);
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    b[n - 1] = 1.0;
    a.lu().solve(&b).unwrap()
}

/// Laplacian formulas evaluated with dense matrices.
pub fn dense_laplacian(w: &DMatrix<f64>, kind: LaplacianKind) -> DMatrix<f64> {
    let n = w.nrows();
    let eye = DMatrix::<f64>::identity(n, n);
    let d_out = DVector::from_fn(n, |i, _| w.row(i).sum());
    let d_in = DVector::from_fn(n, |j, _| w.column(j).sum());
    let inv_sqrt = |d: &DVector<f64>| DMatrix::from_diagonal(&d.map(|x| if x > 0.0 { 1.0 / x.sqrt() } else { 0.0 }));
    match kind {
        LaplacianKind::Combinatorial => DMatrix::from_diagonal(&d_out) - w,
        LaplacianKind::Normalized => {
            let s = inv_sqrt(&d_out);
            &s * (DMatrix::from_diagonal(&d_out) - w) * &s
        }
        LaplacianKind::DirectedCombinatorial => {
            (DMatrix::from_diagonal(&d_out) + DMatrix::from_diagonal(&d_in) - w - w.transpose()) * 0.5
        }
        LaplacianKind::DegreeNormalized => eye - inv_sqrt(&d_out) * (w + w.transpose()) * inv_sqrt(&d_in) * 0.5,
        LaplacianKind::DistributionNormalized => {
            let p = DMatrix::from_fn(n, n, |i, j| w[(i, j)] / d_out[i]);
            let pi = dense_stationary(&p);
            let half = DMatrix::from_diagonal(&pi.map(f64::sqrt));
            let mhalf = DMatrix::from_diagonal(&pi.map(|x| 1.0 / x.sqrt()));
            eye - (&half * &p * &mhalf + &mhalf * p.transpose() * &half) * 0.5
        }
    }
}

/// `L_KK - L_KC L_CC^{-1} L_CK` by dense LU.
pub fn dense_schur(l: &DMatrix<f64>, kept: &[usize]) -> DMatrix<f64> {
    let n = l.nrows();
    let comp: Vec<usize> = (0..n).filter(|i| !kept.contains(i)).collect();
    let sub = |r: &[usize], c: &[usize]| DMatrix::from_fn(r.len(), c.len(), |i, j| l[(r[i], c[j])]);
    let lkk = sub(kept, kept);
    if comp.is_empty() {
        return lkk;
    }
    let lkc = sub(kept, &comp);
    let lcc = sub(&comp, &comp);
    let lck = sub(&comp, kept);
    lkk - lkc * lcc.lu().solve(&lck).unwrap()
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut e: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

pub fn dense(m: &nalgebra_sparse::CsrMatrix<f64>) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(m.nrows(), m.ncols());
    for (i, j, v) in m.triplet_iter() {
        d[(i, j)] += *v;
    }
    d
}

pub fn snr_db(clean: &DVector<f64>, estimate: &DVector<f64>) -> f64 {
    20.0 * (clean.norm() / (clean - estimate).norm()).log10()
}

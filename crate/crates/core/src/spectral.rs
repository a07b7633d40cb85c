//! Graph Fourier analysis: eigendecomposition of the Laplacian, spectral
//! radius estimation, the forward/inverse transform and kernel localization.
//!
//! Heavy results are cached on the [`Graph`] in compute-once cells. Concurrent
//! callers may both compute; the first published value wins and every reader
//! afterwards sees that one.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::filters::{self, FilterMethod, Kernel};
use crate::graph::Graph;
use crate::linalg::lanczos;
use crate::sparse;

/// Default upper limit on `N` for dense eigendecomposition.
pub const DEFAULT_DENSE_CAP: usize = 3000;

/// Inflation applied to Lanczos estimates of the largest eigenvalue.
pub const LMAX_SAFETY: f64 = 1.01;

const LANCZOS_MAX_STEPS: usize = 300;
const LANCZOS_TOL: f64 = 1e-10;
const CLUSTER_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("graph has {n} vertices, dense eigendecomposition is capped at {cap}")]
    GraphTooLargeForDense { n: usize, cap: usize },
    #[error("Laplacian is not symmetric (max asymmetry {asymmetry:e})")]
    NonSymmetricLaplacian { asymmetry: f64 },
    #[error("Fourier basis has not been computed")]
    MissingFourierBasis,
    #[error("no spectral radius available; estimate lmax or compute the Fourier basis first")]
    MissingLmax,
    #[error("expected {expected} rows, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("vertex index {index} out of range for {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },
}

/// Eigenvectors `u`, ascending eigenvalues `e`, the largest eigenvalue and the
/// coherence `max |u[i, l]|`.
///
/// With repeated eigenvalues only the spectral projectors are unique; the
/// individual columns are fixed by a deterministic sign rule (the first entry
/// with magnitude above `1e-8` is positive).
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub u: DMatrix<f64>,
    pub e: DVector<f64>,
    pub lmax: f64,
    pub exact_lmax: bool,
    pub mu: f64,
}

impl SpectralData {
    pub fn n(&self) -> usize {
        self.e.len()
    }
}

fn check_rows(g: &Graph, rows: usize) -> Result<(), SpectralError> {
    if rows != g.n() {
        return Err(SpectralError::ShapeMismatch { expected: g.n(), got: rows });
    }
    Ok(())
}

/// Rotates the columns `start..end` (a repeated eigenvalue) into the unique
/// basis whose `j`-th vector vanishes on the first `j` vertices, so the result
/// depends only on the eigenspace and not on the solver's arbitrary choice.
fn canonicalize_cluster(u: &mut DMatrix<f64>, start: usize, end: usize) {
    let block = u.columns(start, end - start).into_owned();
    let q = block.transpose().qr().q();
    let rotated = block * q;
    u.columns_mut(start, end - start).copy_from(&rotated);
}

pub(crate) fn dense_eigen(l: &DMatrix<f64>) -> SpectralData {
    let n = l.nrows();
    let sym = (l + l.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let e = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut u = DMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        u.set_column(col, &eig.eigenvectors.column(k));
    }
    let scale = e.amax().max(1.0);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && e[end] - e[end - 1] <= CLUSTER_TOL * scale {
            end += 1;
        }
        if end - start > 1 {
            canonicalize_cluster(&mut u, start, end);
        }
        start = end;
    }
    for mut v in u.column_iter_mut() {
        if let Some(first) = v.iter().find(|x| x.abs() > 1e-8) {
            if *first < 0.0 {
                v.neg_mut();
            }
        }
    }
    let mu = u.amax();
    let lmax = if n > 0 { e[n - 1] } else { 0.0 };
    SpectralData { u, e, lmax, exact_lmax: true, mu }
}

impl Graph {
    /// Dense eigendecomposition of the Laplacian with the default size cap.
    pub fn compute_fourier_basis(&self) -> Result<&SpectralData, SpectralError> {
        self.compute_fourier_basis_capped(DEFAULT_DENSE_CAP)
    }

    /// Dense eigendecomposition of the Laplacian, refusing graphs with more than `cap` vertices.
    pub fn compute_fourier_basis_capped(&self, cap: usize) -> Result<&SpectralData, SpectralError> {
        if let Some(s) = self.fourier.get() {
            return Ok(s);
        }
        let n = self.n();
        if n > cap {
            return Err(SpectralError::GraphTooLargeForDense { n, cap });
        }
        let asymmetry = sparse::max_asymmetry(self.l());
        if asymmetry > 1e-12 * sparse::max_abs(self.l()).max(1.0) {
            return Err(SpectralError::NonSymmetricLaplacian { asymmetry });
        }
        let data = dense_eigen(&sparse::to_dense(self.l()));
        let _ = self.fourier.set(data);
        Ok(self.fourier.get().expect("just published"))
    }

    /// Lanczos estimate of the largest Laplacian eigenvalue, inflated by
    /// [`LMAX_SAFETY`] so it bounds the true spectrum. Cached; a single vertex
    /// gives 0.
    pub fn estimate_lmax(&self) -> f64 {
        if let Some(&v) = self.lmax_estimate.get() {
            return v;
        }
        let est = lmax_of(self.l());
        let _ = self.lmax_estimate.set(est);
        *self.lmax_estimate.get().expect("just published")
    }

    /// The spectral radius bound, or [`SpectralError::MissingLmax`].
    pub fn require_lmax(&self) -> Result<f64, SpectralError> {
        self.lmax().ok_or(SpectralError::MissingLmax)
    }

    pub fn require_fourier(&self) -> Result<&SpectralData, SpectralError> {
        self.fourier().ok_or(SpectralError::MissingFourierBasis)
    }
}

/// Inflated Lanczos estimate of the largest eigenvalue of a symmetric sparse matrix.
pub fn lmax_of(m: &nalgebra_sparse::CsrMatrix<f64>) -> f64 {
    let n = m.nrows();
    if n <= 1 {
        return if n == 1 { LMAX_SAFETY * m.get_entry(0, 0).map(|e| e.into_value()).unwrap_or(0.0).max(0.0) } else { 0.0 };
    }
    let est = lanczos::largest_eigenpair(|x| m * x, n, LANCZOS_MAX_STEPS, LANCZOS_TOL);
    LMAX_SAFETY * est.value.max(0.0)
}

pub fn estimate_lmax(g: &Graph) -> f64 {
    g.estimate_lmax()
}

pub fn compute_fourier_basis(g: &Graph) -> Result<&SpectralData, SpectralError> {
    g.compute_fourier_basis()
}

/// Graph Fourier transform `U^T f`, column by column.
pub fn gft(g: &Graph, f: &DMatrix<f64>) -> Result<DMatrix<f64>, SpectralError> {
    let s = g.require_fourier()?;
    check_rows(g, f.nrows())?;
    Ok(s.u.tr_mul(f))
}

/// Inverse transform `U fhat`.
pub fn igft(g: &Graph, fhat: &DMatrix<f64>) -> Result<DMatrix<f64>, SpectralError> {
    let s = g.require_fourier()?;
    check_rows(g, fhat.nrows())?;
    Ok(&s.u * fhat)
}

/// Kernel `kernel` centred at vertex `i`: `sqrt(N) g(L) delta_i`.
pub fn localize(g: &Graph, kernel: &Kernel, i: usize, method: FilterMethod) -> Result<DVector<f64>, SpectralError> {
    let n = g.n();
    if i >= n {
        return Err(SpectralError::IndexOutOfRange { index: i, n });
    }
    let mut delta = DMatrix::zeros(n, 1);
    delta[(i, 0)] = 1.0;
    let out = filters::apply_kernel(g, kernel, &delta, method)?;
    Ok(out.column(0).into_owned() * (n as f64).sqrt())
}

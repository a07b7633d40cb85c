//! Numerical kernels shared by the spectral, pyramid and solver modules.

pub mod cg;
pub mod lanczos;

use nalgebra::DMatrix;
use nalgebra_sparse::factorization::CscCholesky;
use nalgebra_sparse::CsrMatrix;

use crate::sparse;

/// Sparse Cholesky factorization of a symmetric positive definite matrix.
pub struct SparseCholesky {
    factor: CscCholesky<f64>,
    n: usize,
}

impl std::fmt::Debug for SparseCholesky {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SparseCholesky").field("n", &self.n).finish()
    }
}

impl SparseCholesky {
    /// `None` when the matrix is not numerically positive definite, i.e. the
    /// factorization breaks down or a squared pivot falls below `1e-13` times
    /// the largest diagonal entry.
    pub fn factor(m: &CsrMatrix<f64>) -> Option<Self> {
        let csc = sparse::to_csc(m);
        let factor = CscCholesky::factor(&csc).ok()?;
        let max_diag = (0..m.nrows())
            .filter_map(|i| m.get_entry(i, i).map(|e| e.into_value()))
            .fold(0.0_f64, f64::max);
        let l = factor.l();
        let min_pivot2 = (0..l.ncols())
            .map(|j| l.get_entry(j, j).map(|e| e.into_value()).unwrap_or(0.0).powi(2))
            .fold(f64::INFINITY, f64::min);
        if !(min_pivot2 > 1e-13 * max_diag) {
            return None;
        }
        Some(SparseCholesky { factor, n: m.nrows() })
    }

    pub fn solve(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        self.factor.solve(b)
    }

    pub fn dim(&self) -> usize {
        self.n
    }
}

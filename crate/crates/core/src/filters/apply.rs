use nalgebra::DMatrix;
use nalgebra_sparse::CsrMatrix;

use super::chebyshev::{apply_many, chebyshev_coeffs};
use super::{FilterBank, FilterError, FilterMethod, Kernel};
use crate::graph::Graph;
use crate::sparse;
use crate::spectral::SpectralError;

fn check_rows(g: &Graph, rows: usize) -> Result<(), SpectralError> {
    if rows != g.n() {
        return Err(SpectralError::ShapeMismatch { expected: g.n(), got: rows });
    }
    Ok(())
}

/// `g_k(L) f` for each kernel, or `g_k(L)^T f` when `adjoint` is set.
fn apply_kernels(
    g: &Graph,
    kernels: &[Kernel],
    f: &DMatrix<f64>,
    method: FilterMethod,
    adjoint: bool,
) -> Result<Vec<DMatrix<f64>>, SpectralError> {
    check_rows(g, f.nrows())?;
    match method {
        FilterMethod::Exact => {
            let s = g.require_fourier()?;
            let fhat = s.u.tr_mul(f);
            Ok(kernels
                .iter()
                .map(|k| {
                    let gains = k.eval_all(&s.e);
                    let mut scaled = fhat.clone();
                    for (mut row, gain) in scaled.row_iter_mut().zip(gains.iter()) {
                        row *= *gain;
                    }
                    &s.u * scaled
                })
                .collect())
        }
        FilterMethod::Chebyshev(order) => {
            let lmax = g.require_lmax()?;
            let coeffs: Vec<Vec<f64>> = kernels.iter().map(|k| chebyshev_coeffs(k, order, lmax).coeffs).collect();
            let refs: Vec<&[f64]> = coeffs.iter().map(|c| c.as_slice()).collect();
            let transposed: CsrMatrix<f64>;
            let op = if adjoint && sparse::max_asymmetry(g.l()) > 0.0 {
                transposed = g.l().transpose();
                &transposed
            } else {
                g.l()
            };
            Ok(apply_many(op, lmax, &refs, f))
        }
    }
}

/// `g(L) f`.
pub fn apply_kernel(g: &Graph, kernel: &Kernel, f: &DMatrix<f64>, method: FilterMethod) -> Result<DMatrix<f64>, SpectralError> {
    Ok(apply_kernels(g, std::slice::from_ref(kernel), f, method, false)?.remove(0))
}

/// Stacked kernel outputs `[g_0(L) f, g_1(L) f, ...]`, shape `N x (Nf k)`.
pub fn filter_analysis(g: &Graph, fb: &FilterBank, f: &DMatrix<f64>, method: FilterMethod) -> Result<DMatrix<f64>, FilterError> {
    let blocks = apply_kernels(g, fb.kernels(), f, method, false)?;
    let k = f.ncols();
    let mut out = DMatrix::zeros(g.n(), k * blocks.len());
    for (i, b) in blocks.iter().enumerate() {
        out.columns_mut(i * k, k).copy_from(b);
    }
    Ok(out)
}

/// Adjoint of [`filter_analysis`]: `sum_i g_i(L)^T c_i`.
pub fn filter_synthesis(g: &Graph, fb: &FilterBank, coeffs: &DMatrix<f64>, method: FilterMethod) -> Result<DMatrix<f64>, FilterError> {
    check_rows(g, coeffs.nrows())?;
    let nf = fb.len();
    if coeffs.ncols() % nf != 0 {
        return Err(FilterError::CoefficientShape { got: coeffs.ncols(), kernels: nf });
    }
    let k = coeffs.ncols() / nf;
    let mut out = DMatrix::zeros(g.n(), k);
    for (i, kernel) in fb.kernels().iter().enumerate() {
        let block = coeffs.columns(i * k, k).into_owned();
        out += apply_kernels(g, std::slice::from_ref(kernel), &block, method, true)?.remove(0);
    }
    Ok(out)
}

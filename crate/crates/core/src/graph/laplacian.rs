use nalgebra_sparse::CsrMatrix;

use super::directed::{stationary_from_weights, strongly_connected};
use super::{Graph, GraphError, LaplacianKind};
use crate::sparse;

/// Laplacian of `kind` for the graph's weight matrix.
///
/// The undirected kinds are only defined for undirected graphs; the directed
/// kinds accept any graph (on a symmetric `W` they reduce to their undirected
/// counterparts).
pub fn laplacian(g: &Graph, kind: LaplacianKind) -> Result<CsrMatrix<f64>, GraphError> {
    compute(g.w(), g.is_directed(), kind)
}

pub(crate) fn compute(
    w: &CsrMatrix<f64>,
    directed: bool,
    kind: LaplacianKind,
) -> Result<CsrMatrix<f64>, GraphError> {
    let n = w.nrows();
    match kind {
        LaplacianKind::Combinatorial | LaplacianKind::Normalized if directed => {
            Err(GraphError::KindMismatch { kind })
        }
        LaplacianKind::Combinatorial => {
            let d = sparse::row_sums(w);
            Ok(&sparse::diagonal(d.as_slice()) - w)
        }
        LaplacianKind::Normalized => {
            let d = sparse::row_sums(w);
            let inv_sqrt: Vec<f64> =
                d.iter().map(|&x| if x > 0.0 { 1.0 / x.sqrt() } else { 0.0 }).collect();
            // the product inv_sqrt[i] * inv_sqrt[j] is formed first so L stays exactly symmetric
            let scaled = sparse::map_values(w, |i, j, v| v * (inv_sqrt[i] * inv_sqrt[j]));
            let diag: Vec<f64> = d.iter().map(|&x| if x > 0.0 { 1.0 } else { 0.0 }).collect();
            Ok(&sparse::diagonal(&diag) - &scaled)
        }
        LaplacianKind::DirectedCombinatorial => {
            let d_out = sparse::row_sums(w);
            let d_in = sparse::col_sums(w);
            let diag: Vec<f64> = (0..n).map(|i| 0.5 * (d_out[i] + d_in[i])).collect();
            let wt = w.transpose();
            let sym = sparse::map_values(&(w + &wt), |_, _, v| 0.5 * v);
            Ok(&sparse::diagonal(&diag) - &sym)
        }
        LaplacianKind::DegreeNormalized => {
            let d_out = sparse::row_sums(w);
            let d_in = sparse::col_sums(w);
            if let Some(v) = (0..n).find(|&i| d_out[i] <= 0.0 || d_in[i] <= 0.0) {
                return Err(GraphError::ZeroDegreeVertex { vertex: v });
            }
            let left: Vec<f64> = d_out.iter().map(|x| 1.0 / x.sqrt()).collect();
            let right: Vec<f64> = d_in.iter().map(|x| 1.0 / x.sqrt()).collect();
            let wt = w.transpose();
            let sum = w + &wt;
            let scaled = sparse::map_values(&sum, |i, j, v| 0.5 * left[i] * v * right[j]);
            Ok(&sparse::identity(n) - &scaled)
        }
        LaplacianKind::DistributionNormalized => {
            if !strongly_connected(w) {
                return Err(GraphError::NotStronglyConnected);
            }
            let data = stationary_from_weights(w)?;
            let sqrt_pi: Vec<f64> = data.pi.iter().map(|p| p.sqrt()).collect();
            let inv_sqrt_pi: Vec<f64> = sqrt_pi.iter().map(|s| 1.0 / s).collect();
            // Pi^{1/2} P Pi^{-1/2}; the second term is its transpose.
            let a = sparse::scale(&data.p, &sqrt_pi, &inv_sqrt_pi);
            let at = a.transpose();
            let sym = sparse::map_values(&(&a + &at), |_, _, v| 0.5 * v);
            Ok(&sparse::identity(n) - &sym)
        }
    }
}

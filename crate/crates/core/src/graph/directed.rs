use nalgebra::DVector;
use nalgebra_sparse::CsrMatrix;

use super::{Graph, GraphError};
use crate::sparse;

const PI_TOL: f64 = 1e-12;
const PI_MAX_ITER: usize = 10_000;

/// Random-walk quantities of a directed graph.
#[derive(Debug, Clone)]
pub struct DirectedData {
    pub d_out: DVector<f64>,
    pub d_in: DVector<f64>,
    /// Row-stochastic transition matrix `P = D+^{-1} W`.
    pub p: CsrMatrix<f64>,
    /// Stationary distribution: `pi^T P = pi^T`, entries sum to one.
    pub pi: DVector<f64>,
    pub iterations: usize,
}

impl DirectedData {
    /// `max |pi^T P - pi^T|`.
    pub fn residual(&self) -> f64 {
        let pt = self.p.transpose();
        let next = &pt * &self.pi;
        (next - &self.pi).amax()
    }
}

/// Stationary distribution of the random walk on `g` by power iteration.
///
/// The iteration runs on the lazy walk `(I + P^T)/2`, which has the same fixed
/// point as `P^T` but does not oscillate on periodic chains.
pub fn stationary_distribution(g: &Graph) -> Result<DirectedData, GraphError> {
    stationary_from_weights(g.w())
}

pub(crate) fn stationary_from_weights(w: &CsrMatrix<f64>) -> Result<DirectedData, GraphError> {
    let n = w.nrows();
    let d_out = sparse::row_sums(w);
    let d_in = sparse::col_sums(w);
    if let Some(v) = (0..n).find(|&i| d_out[i] <= 0.0) {
        return Err(GraphError::ZeroOutDegree { vertex: v });
    }
    let p = sparse::map_values(w, |i, _, v| v / d_out[i]);
    let pt = p.transpose();

    let mut pi = DVector::from_element(n, 1.0 / n as f64);
    let mut delta = f64::INFINITY;
    for it in 1..=PI_MAX_ITER {
        let walked = &pt * &pi;
        let mut next = (&pi + walked) * 0.5;
        let total = next.sum();
        next /= total;
        delta = (&next - &pi).lp_norm(1);
        pi = next;
        if delta <= PI_TOL {
            return Ok(DirectedData { d_out, d_in, p, pi, iterations: it });
        }
    }
    Err(GraphError::NotConverged { iterations: PI_MAX_ITER, residual: delta })
}

pub(crate) fn strongly_connected(w: &CsrMatrix<f64>) -> bool {
    let n = w.nrows();
    if n == 0 {
        return true;
    }
    let fwd = sparse::neighbours(w);
    let bwd = sparse::neighbours(&w.transpose());
    sparse::reachable(&fwd, 0).into_iter().all(|r| r)
        && sparse::reachable(&bwd, 0).into_iter().all(|r| r)
}

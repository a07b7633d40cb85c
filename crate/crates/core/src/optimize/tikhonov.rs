use nalgebra::DVector;

use super::{check_len, finish, OptimizeError, SolverReport};
use crate::graph::Graph;
use crate::linalg::cg;
use crate::sparse;

const CG_TOL: f64 = 1e-10;

/// `argmin_x 1/2 |x - y|^2 + gamma x^T L x`, i.e. `(I + 2 gamma L) x = y`,
/// by Jacobi-preconditioned conjugate gradient to relative residual `1e-10`.
///
/// The objective is recorded at every CG iterate; CG minimizes it over
/// growing Krylov spaces, so the history is non-increasing.
pub fn tik_denoise(g: &Graph, y: &DVector<f64>, gamma: f64) -> Result<(DVector<f64>, SolverReport), OptimizeError> {
    check_len(g.n(), y.len())?;
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(OptimizeError::BadParameter(format!("gamma must be nonnegative, got {gamma}")));
    }
    let l = g.l();
    if sparse::max_asymmetry(l) > 1e-12 * sparse::max_abs(l).max(1.0) {
        return Err(OptimizeError::BadParameter("Tikhonov denoising needs a symmetric Laplacian".into()));
    }
    let objective = |x: &DVector<f64>| 0.5 * (x - y).norm_squared() + gamma * x.dot(&(l * x));
    let n = g.n();
    let mut diag = DVector::from_element(n, 1.0);
    for (i, j, v) in l.triplet_iter() {
        if i == j {
            diag[i] += 2.0 * gamma * v;
        }
    }
    let inv_diag = diag.map(|d| 1.0 / d);
    let mut history = Vec::new();
    let out = cg::solve(
        |x| x + (l * x) * (2.0 * gamma),
        y,
        Some(&inv_diag),
        CG_TOL,
        (10 * n).max(1000),
        |x| history.push(objective(x)),
    );
    if !out.x.iter().all(|v| v.is_finite()) {
        return Err(OptimizeError::SolverFailure("conjugate gradient produced non-finite values".into()));
    }
    let report = SolverReport {
        iterations: out.iterations,
        objective: objective(&out.x),
        residual: out.relative_residual,
        converged: out.converged,
        objective_history: history,
    };
    finish(out.x, report)
}

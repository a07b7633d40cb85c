use nalgebra::DVector;

use super::{check_len, finish, OptimizeError, SolveOptions, SolverReport};
use crate::graph::Graph;
use crate::operators::adj2vec;
use crate::spectral;

/// Primal solution `x = y - Dg^T p` with its dual variable `p`, `|p|_inf <= gamma`.
#[derive(Debug, Clone)]
pub struct TvSolution {
    pub x: DVector<f64>,
    pub p: DVector<f64>,
    pub report: SolverReport,
}

/// `argmin_x 1/2 |x - y|^2 + gamma |Dg x|_1`.
///
/// See [`prox_tv_dual`]; on failure the error carries the best iterate.
pub fn prox_tv(g: &Graph, y: &DVector<f64>, gamma: f64, opts: SolveOptions) -> Result<(DVector<f64>, SolverReport), OptimizeError> {
    let sol = prox_tv_dual(g, y, gamma, opts)?;
    finish(sol.x, sol.report)
}

/// Graph-TV proximal operator by accelerated projected gradient on the dual
/// `min_{|p|_inf <= gamma} 1/2 |y - Dg^T p|^2`, restarting momentum whenever
/// the dual objective would increase.
///
/// Stops once the duality gap is at most `tol (1 + |primal|)`. The returned
/// solution is the iterate with the smallest gap seen; `report.converged`
/// tells whether the tolerance was met.
pub fn prox_tv_dual(g: &Graph, y: &DVector<f64>, gamma: f64, opts: SolveOptions) -> Result<TvSolution, OptimizeError> {
    check_len(g.n(), y.len())?;
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(OptimizeError::BadParameter(format!("gamma must be nonnegative, got {gamma}")));
    }
    let inc = adj2vec(g);
    let dg = &inc.dg;
    let dgt = dg.transpose();
    let ne = inc.ne();
    let dual_obj = |x: &DVector<f64>| 0.5 * x.norm_squared();
    let primal = |x: &DVector<f64>| 0.5 * (x - y).norm_squared() + gamma * (dg * x).lp_norm(1);
    let gap_of = |x: &DVector<f64>| {
        let p = primal(x);
        let d = 0.5 * y.norm_squared() - 0.5 * x.norm_squared();
        (p, (p - d).max(0.0))
    };

    let mut p = DVector::zeros(ne);
    let mut x = y.clone();
    let (mut obj, mut gap) = gap_of(&x);
    let mut best = TvSolution {
        x: x.clone(),
        p: p.clone(),
        report: SolverReport { iterations: 0, objective: obj, residual: gap, converged: false, objective_history: vec![dual_obj(&x)] },
    };
    let mut history = vec![dual_obj(&x)];
    if ne == 0 || gap <= opts.tol * (1.0 + obj.abs()) {
        best.report.converged = true;
        return Ok(best);
    }
    let lip = spectral::lmax_of(&(&dgt * dg)).max(f64::MIN_POSITIVE);
    let step = 1.0 / lip;
    let project = |v: DVector<f64>| v.map(|t| t.clamp(-gamma, gamma));
    let step_from = |z: &DVector<f64>| {
        let xz = y - &dgt * z;
        project(z + (dg * &xz) * step)
    };

    let mut z = p.clone();
    let mut t = 1.0_f64;
    for it in 1..=opts.max_iter {
        let mut p_new = step_from(&z);
        let mut x_new = y - &dgt * &p_new;
        let mut restarted = false;
        if dual_obj(&x_new) > dual_obj(&x) {
            // plain projected gradient step from p is a descent step
            p_new = step_from(&p);
            x_new = y - &dgt * &p_new;
            restarted = true;
        }
        let t_new = if restarted { 1.0 } else { (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0 };
        z = if restarted { p_new.clone() } else { &p_new + (&p_new - &p) * ((t - 1.0) / t_new) };
        t = t_new;
        p = p_new;
        x = x_new;
        history.push(dual_obj(&x));
        (obj, gap) = gap_of(&x);
        if gap < best.report.residual {
            best.x = x.clone();
            best.p = p.clone();
            best.report.objective = obj;
            best.report.residual = gap;
        }
        best.report.iterations = it;
        if gap <= opts.tol * (1.0 + obj.abs()) {
            best.report.converged = true;
            break;
        }
    }
    best.report.objective_history = history;
    Ok(best)
}

use nalgebra::{DMatrix, DVector};

use super::{check_len, finish, OptimizeError, SolveOptions, SolverReport};
use crate::filters::{filter_analysis, filter_synthesis, FilterBank, FilterMethod};
use crate::graph::Graph;

const TIGHT_TOL: f64 = 1e-6;
const GRID: usize = 1000;

pub fn soft_threshold(c: &DVector<f64>, tau: f64) -> DVector<f64> {
    c.map(|v| v.signum() * (v.abs() - tau).max(0.0))
}

/// Frame bounds over the eigenvalues when the Fourier basis exists, else over a grid.
fn bounds(g: &Graph, fb: &FilterBank) -> Result<(f64, f64), OptimizeError> {
    match g.fourier() {
        Some(s) => Ok(fb.frame_bounds_on(&s.e)),
        None => Ok(fb.frame_bounds(g.require_lmax()?, GRID)?),
    }
}

fn col(v: &DVector<f64>) -> DMatrix<f64> {
    DMatrix::from_column_slice(v.len(), 1, v.as_slice())
}

/// Kernel-major coefficient vector as an `n x Nf` block matrix.
fn blocks(c: &DVector<f64>, n: usize) -> DMatrix<f64> {
    DMatrix::from_column_slice(n, c.len() / n, c.as_slice())
}

fn flat(m: DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

/// Soft thresholding of the tight-frame coefficients of `y` at level `tau`,
/// then synthesis divided by the frame bound.
///
/// Requires `|A - B| <= 1e-6`; other banks are rejected with
/// [`OptimizeError::NotTightFrame`].
pub fn wavelet_denoise(
    g: &Graph,
    fb: &FilterBank,
    y: &DVector<f64>,
    tau: f64,
    method: FilterMethod,
) -> Result<(DVector<f64>, SolverReport), OptimizeError> {
    check_len(g.n(), y.len())?;
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(OptimizeError::BadParameter(format!("threshold must be nonnegative, got {tau}")));
    }
    let (a, b) = bounds(g, fb)?;
    if (a - b).abs() > TIGHT_TOL || a <= 0.0 {
        return Err(OptimizeError::NotTightFrame { a, b });
    }
    let c = flat(filter_analysis(g, fb, &col(y), method)?);
    let shrunk = soft_threshold(&c, tau);
    let x = flat(filter_synthesis(g, fb, &blocks(&shrunk, g.n()), method)?) / a;
    let objective = 0.5 * (&x - y).norm_squared() + tau * shrunk.lp_norm(1);
    let report = SolverReport { iterations: 1, objective, residual: 0.0, converged: true, objective_history: vec![objective] };
    Ok((x, report))
}

/// Basis pursuit denoising over the dictionary spanned by a filter bank.
#[derive(Debug, Clone, PartialEq)]
pub struct BpdnProblem {
    pub lambda: f64,
    /// `true` marks observed vertices; `None` observes every vertex.
    pub mask: Option<Vec<bool>>,
    pub method: FilterMethod,
    pub opts: SolveOptions,
}

impl BpdnProblem {
    pub fn new(lambda: f64) -> Self {
        BpdnProblem { lambda, mask: None, method: FilterMethod::Exact, opts: SolveOptions::default() }
    }
}

/// `argmin_c lambda |c|_1 + 1/2 |M (S c - y)|^2` with `S` the bank's synthesis
/// operator and `M` the observation mask.
///
/// Accelerated proximal gradient with step `1 / B` (upper frame bound),
/// restarting momentum whenever the objective would increase. Stops when the
/// relative change of `c` falls below `tol`. Returns the coefficients, length
/// `N Nf`; the signal estimate is their synthesis.
pub fn solve_bpdn(g: &Graph, fb: &FilterBank, y: &DVector<f64>, problem: &BpdnProblem) -> Result<(DVector<f64>, SolverReport), OptimizeError> {
    let n = g.n();
    check_len(n, y.len())?;
    let lambda = problem.lambda;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(OptimizeError::BadParameter(format!("lambda must be positive, got {lambda}")));
    }
    let mask: DVector<f64> = match &problem.mask {
        Some(m) => {
            check_len(n, m.len())?;
            DVector::from_iterator(n, m.iter().map(|&b| if b { 1.0 } else { 0.0 }))
        }
        None => DVector::from_element(n, 1.0),
    };
    let method = problem.method;
    let (_, b) = bounds(g, fb)?;
    let lip = match method {
        FilterMethod::Exact => b,
        FilterMethod::Chebyshev(_) => 1.01 * b,
    };
    if lip <= 0.0 {
        return Err(OptimizeError::BadParameter("filter bank has a zero upper frame bound".into()));
    }
    let step = 1.0 / lip;
    let synth = |c: &DVector<f64>| -> Result<DVector<f64>, OptimizeError> { Ok(flat(filter_synthesis(g, fb, &blocks(c, n), method)?)) };
    let analysis = |v: &DVector<f64>| -> Result<DVector<f64>, OptimizeError> { Ok(flat(filter_analysis(g, fb, &col(v), method)?)) };
    let my = y.component_mul(&mask);
    let residual_of = |c: &DVector<f64>| -> Result<DVector<f64>, OptimizeError> { Ok(synth(c)?.component_mul(&mask) - &my) };
    let objective = |c: &DVector<f64>, r: &DVector<f64>| lambda * c.lp_norm(1) + 0.5 * r.norm_squared();
    let prox_step = |z: &DVector<f64>| -> Result<DVector<f64>, OptimizeError> {
        let grad = analysis(&residual_of(z)?)?;
        Ok(soft_threshold(&(z - grad * step), lambda * step))
    };

    let m = n * fb.len();
    let mut c = DVector::zeros(m);
    let mut obj = objective(&c, &residual_of(&c)?);
    let mut history = vec![obj];
    let mut z = c.clone();
    let mut t = 1.0_f64;
    let mut report = SolverReport { iterations: 0, objective: obj, residual: f64::INFINITY, converged: false, objective_history: Vec::new() };
    for it in 1..=problem.opts.max_iter {
        let mut c_new = prox_step(&z)?;
        let mut obj_new = objective(&c_new, &residual_of(&c_new)?);
        let mut restarted = false;
        if obj_new > obj {
            c_new = prox_step(&c)?;
            obj_new = objective(&c_new, &residual_of(&c_new)?);
            restarted = true;
        }
        let change = (&c_new - &c).norm() / c_new.norm().max(1.0);
        let t_new = if restarted { 1.0 } else { (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0 };
        z = if restarted { c_new.clone() } else { &c_new + (&c_new - &c) * ((t - 1.0) / t_new) };
        t = t_new;
        c = c_new;
        obj = obj_new;
        history.push(obj);
        report.iterations = it;
        report.residual = change;
        if change <= problem.opts.tol {
            report.converged = true;
            break;
        }
    }
    report.objective = obj;
    report.objective_history = history;
    finish(c, report)
}

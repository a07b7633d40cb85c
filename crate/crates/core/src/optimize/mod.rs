//! Convex problems with graph regularizers: the graph total-variation proximal
//! operator, Tikhonov denoising, tight-frame wavelet denoising and basis
//! pursuit denoising over a filter-bank dictionary.
//!
//! All solvers are deterministic. Each returns a [`SolverReport`] whose
//! `objective_history` tracks the function minimized by the iteration and is
//! non-increasing.

mod tikhonov;
mod tv;
mod wavelet;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::filters::FilterError;
use crate::spectral::SpectralError;

pub use tikhonov::tik_denoise;
pub use tv::{prox_tv, prox_tv_dual, TvSolution};
pub use wavelet::{soft_threshold, solve_bpdn, wavelet_denoise, BpdnProblem};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub iterations: usize,
    pub objective: f64,
    /// Solver-specific optimality measure (duality gap, relative residual or step size).
    pub residual: f64,
    pub converged: bool,
    pub objective_history: Vec<f64>,
}

impl SolverReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { max_iter: 1000, tol: 1e-6 }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizeError {
    #[error("bad solver parameter: {0}")]
    BadParameter(String),
    #[error("expected {expected} values, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("no convergence after {} iterations (residual {:e})", .0.1.iterations, .0.1.residual)]
    NotConverged(Box<(DVector<f64>, SolverReport)>),
    #[error("filter bank is not a tight frame (bounds {a} and {b}); use solve_bpdn instead")]
    NotTightFrame { a: f64, b: f64 },
    #[error("linear solver failed: {0}")]
    SolverFailure(String),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

impl OptimizeError {
    /// Best iterate and report carried by [`OptimizeError::NotConverged`].
    pub fn best(&self) -> Option<(&DVector<f64>, &SolverReport)> {
        match self {
            OptimizeError::NotConverged(b) => Some((&b.0, &b.1)),
            _ => None,
        }
    }
}

fn check_len(expected: usize, got: usize) -> Result<(), OptimizeError> {
    if expected != got {
        return Err(OptimizeError::ShapeMismatch { expected, got });
    }
    Ok(())
}

fn finish(x: DVector<f64>, report: SolverReport) -> Result<(DVector<f64>, SolverReport), OptimizeError> {
    if report.converged {
        Ok((x, report))
    } else {
        Err(OptimizeError::NotConverged(Box::new((x, report))))
    }
}

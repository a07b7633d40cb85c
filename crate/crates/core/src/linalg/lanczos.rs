//! Lanczos iteration for the largest eigenpair of a symmetric operator.

use nalgebra::{DMatrix, DVector};
use rand::RngExt;

use crate::rng::{self, streams};

#[derive(Debug, Clone)]
pub struct EigenEstimate {
    pub value: f64,
    pub vector: DVector<f64>,
    /// Ritz residual `||A v - value v||`.
    pub residual: f64,
    pub steps: usize,
}

const CHECK_EVERY: usize = 5;

/// Largest eigenpair of the symmetric `n x n` operator `apply`.
///
/// Runs with full reorthogonalization and stops once the Ritz residual of the
/// top Ritz pair drops below `tol * |value|`, the Krylov space becomes
/// invariant, or `max_steps` is reached. The start vector is drawn from a
/// fixed seed, so results are deterministic.
pub fn largest_eigenpair<F>(apply: F, n: usize, max_steps: usize, tol: f64) -> EigenEstimate
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
{
    if n == 0 {
        return EigenEstimate { value: 0.0, vector: DVector::zeros(0), residual: 0.0, steps: 0 };
    }
    let max_steps = max_steps.clamp(1, n);
    let mut rng = rng::stream(0x5eed, streams::LANCZOS);
    let mut q = DVector::from_fn(n, |_, _| rng.random::<f64>() - 0.5);
    q /= q.norm();

    let mut basis: Vec<DVector<f64>> = vec![q];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut best = (0.0, DVector::zeros(1), f64::INFINITY);

    for j in 0..max_steps {
        let qj = &basis[j];
        let mut w = apply(qj);
        let a = qj.dot(&w);
        alpha.push(a);
        // two passes of Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for qi in &basis {
                let c = qi.dot(&w);
                w.axpy(-c, qi, 1.0);
            }
        }
        let b = w.norm();
        beta.push(b);

        let m = j + 1;
        let scale = alpha.iter().fold(0.0_f64, |s, x| s.max(x.abs())).max(f64::MIN_POSITIVE);
        let invariant = b <= 1e-13 * scale;
        if invariant || m == max_steps || m % CHECK_EVERY == 0 {
            let t = DMatrix::from_fn(m, m, |r, c| {
                if r == c {
                    alpha[r]
                } else if r + 1 == c {
                    beta[r]
                } else if c + 1 == r {
                    beta[c]
                } else {
                    0.0
                }
            });
            let eig = t.symmetric_eigen();
            let (top, &theta) = eig
                .eigenvalues
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .expect("non-empty");
            let s = eig.eigenvectors.column(top).into_owned();
            let residual = b * s[m - 1].abs();
            best = (theta, s, residual);
            if invariant || residual <= tol * theta.abs().max(f64::MIN_POSITIVE) || m == max_steps {
                break;
            }
        }
        if invariant {
            break;
        }
        basis.push(w / b);
    }

    let (value, s, residual) = best;
    let mut vector = DVector::zeros(n);
    for (k, coeff) in s.iter().enumerate() {
        vector.axpy(*coeff, &basis[k], 1.0);
    }
    let norm = vector.norm();
    if norm > 0.0 {
        vector /= norm;
    }
    EigenEstimate { value, vector, residual, steps: alpha.len() }
}

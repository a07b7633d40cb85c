//! Jacobi-preconditioned conjugate gradient for symmetric positive definite systems.

use nalgebra::DVector;

#[derive(Debug, Clone)]
pub struct CgOutcome {
    pub x: DVector<f64>,
    pub iterations: usize,
    /// Final `||b - A x|| / ||b||`.
    pub relative_residual: f64,
    pub converged: bool,
}

/// Solve `A x = b` from `x = 0`.
///
/// `inv_diag` holds the reciprocal of `diag(A)` (Jacobi preconditioner);
/// `observe` sees every iterate, starting with the initial zero vector.
pub fn solve<F>(
    apply: F,
    b: &DVector<f64>,
    inv_diag: Option<&DVector<f64>>,
    tol: f64,
    max_iter: usize,
    mut observe: impl FnMut(&DVector<f64>),
) -> CgOutcome
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
{
    let n = b.len();
    let mut x = DVector::zeros(n);
    observe(&x);
    let b_norm = b.norm();
    if b_norm == 0.0 {
        return CgOutcome { x, iterations: 0, relative_residual: 0.0, converged: true };
    }
    let precondition = |r: &DVector<f64>| match inv_diag {
        Some(d) => r.component_mul(d),
        None => r.clone(),
    };
    let mut r = b.clone();
    let mut z = precondition(&r);
    let mut p = z.clone();
    let mut rz = r.dot(&z);
    let mut rel = 1.0;
    for it in 1..=max_iter {
        let ap = apply(&p);
        let pap = p.dot(&ap);
        if pap <= 0.0 || !pap.is_finite() {
            return CgOutcome { x, iterations: it - 1, relative_residual: rel, converged: false };
        }
        let step = rz / pap;
        x.axpy(step, &p, 1.0);
        r.axpy(-step, &ap, 1.0);
        observe(&x);
        rel = r.norm() / b_norm;
        if rel <= tol {
            return CgOutcome { x, iterations: it, relative_residual: rel, converged: true };
        }
        z = precondition(&r);
        let rz_next = r.dot(&z);
        p = &z + &p * (rz_next / rz);
        rz = rz_next;
    }
    CgOutcome { x, iterations: max_iter, relative_residual: rel, converged: false }
}

use std::f64::consts::PI;

use nalgebra::DMatrix;
use nalgebra_sparse::CsrMatrix;

use super::Kernel;
use crate::graph::Graph;
use crate::spectral::SpectralError;

/// Chebyshev expansion of a kernel on `[0, lmax]`.
///
/// `g(x) ~ c_0 / 2 + sum_{k >= 1} c_k T_k(2 x / lmax - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevCoeffs {
    pub coeffs: Vec<f64>,
    pub lmax: f64,
}

impl ChebyshevCoeffs {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Evaluates the expansion at `x` by Clenshaw's recurrence.
    pub fn eval(&self, x: f64) -> f64 {
        let y = if self.lmax > 0.0 { 2.0 * x / self.lmax - 1.0 } else { -1.0 };
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * y * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        y * b1 - b2 + self.coeffs[0] / 2.0
    }
}

/// Interpolation coefficients of `kernel` at the `order + 1` Chebyshev nodes of `[0, lmax]`.
pub fn chebyshev_coeffs(kernel: &Kernel, order: usize, lmax: f64) -> ChebyshevCoeffs {
    let order = order.max(1);
    let m = order + 1;
    let nodes: Vec<f64> = (0..m).map(|j| PI * (j as f64 + 0.5) / m as f64).collect();
    let samples: Vec<f64> = nodes.iter().map(|t| kernel.eval(lmax / 2.0 * (t.cos() + 1.0))).collect();
    let coeffs = (0..m)
        .map(|k| {
            2.0 / m as f64
                * nodes.iter().zip(&samples).map(|(t, s)| s * (k as f64 * t).cos()).sum::<f64>()
        })
        .collect();
    ChebyshevCoeffs { coeffs, lmax }
}

/// Applies several expansions sharing the domain `lmax` to `f` with one
/// three-term recurrence in `op`.
pub(crate) fn apply_many(op: &CsrMatrix<f64>, lmax: f64, coeffs: &[&[f64]], f: &DMatrix<f64>) -> Vec<DMatrix<f64>> {
    let order = coeffs.iter().map(|c| c.len()).max().unwrap_or(1) - 1;
    let mut out: Vec<DMatrix<f64>> = coeffs.iter().map(|c| f * (c[0] / 2.0)).collect();
    if lmax <= 0.0 {
        // every eigenvalue is 0, where T_k(-1) = (-1)^k
        for (o, c) in out.iter_mut().zip(coeffs) {
            let s: f64 = c.iter().enumerate().skip(1).map(|(k, v)| if k % 2 == 0 { *v } else { -v }).sum();
            *o += f * s;
        }
        return out;
    }
    if order == 0 {
        return out;
    }
    let a = 2.0 / lmax;
    let shifted = |x: &DMatrix<f64>| op * x * a - x;
    let mut prev = f.clone();
    let mut cur = shifted(f);
    for (o, c) in out.iter_mut().zip(coeffs) {
        if c.len() > 1 {
            *o += &cur * c[1];
        }
    }
    for k in 2..=order {
        let next = shifted(&cur) * 2.0 - &prev;
        for (o, c) in out.iter_mut().zip(coeffs) {
            if k < c.len() {
                *o += &next * c[k];
            }
        }
        prev = cur;
        cur = next;
    }
    out
}

/// `g(L) f` through the expansion; `coeffs.lmax` must bound the spectrum of `L`.
pub fn chebyshev_apply(g: &Graph, coeffs: &ChebyshevCoeffs, f: &DMatrix<f64>) -> Result<DMatrix<f64>, SpectralError> {
    if f.nrows() != g.n() {
        return Err(SpectralError::ShapeMismatch { expected: g.n(), got: f.nrows() });
    }
    Ok(apply_many(g.l(), coeffs.lmax, &[&coeffs.coeffs], f).remove(0))
}

//! Spectral kernels, filter-bank designs and their application to graph signals.
//!
//! A kernel `g` acts on a signal through the Laplacian spectrum,
//! `g(L) f = U diag(g(e)) U^T f`. Banks are applied either exactly (needs the
//! Fourier basis) or through a Chebyshev expansion (needs only `lmax`).
//! Analysis output is kernel-major: for `f` of shape `N x k` the result is
//! `N x (Nf k)` with kernel 0's block first.

mod apply;
mod chebyshev;
mod design;

use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectral::SpectralError;

pub use apply::{apply_kernel, filter_analysis, filter_synthesis};
pub use chebyshev::{chebyshev_apply, chebyshev_coeffs, ChebyshevCoeffs};
pub use design::{design, warped_translates, FilterDesign, Warp};

/// Default Chebyshev expansion order.
pub const DEFAULT_CHEBYSHEV_ORDER: usize = 30;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FilterError {
    #[error("bad filter parameter: {0}")]
    BadParameter(String),
    #[error("coefficients have {got} columns, expected a multiple of {kernels} kernels")]
    CoefficientShape { got: usize, kernels: usize },
    #[error("filter bank was built from custom kernels and has no descriptor")]
    NoDescriptor,
    #[error("invalid filter descriptor: {0}")]
    Descriptor(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// A labelled scalar function on `[0, lmax]`.
#[derive(Clone)]
pub struct Kernel {
    label: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl Kernel {
    pub fn new(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Kernel { label: label.into(), f: Arc::new(f) }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn eval_all(&self, xs: &DVector<f64>) -> DVector<f64> {
        xs.map(|x| self.eval(x))
    }
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel").field("label", &self.label).finish_non_exhaustive()
    }
}

/// How kernels are applied to signals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterMethod {
    /// Through the dense Fourier basis.
    Exact,
    /// Chebyshev expansion of the given order.
    Chebyshev(usize),
}

impl Default for FilterMethod {
    fn default() -> Self {
        FilterMethod::Chebyshev(DEFAULT_CHEBYSHEV_ORDER)
    }
}

/// Ordered kernels sharing the domain `[0, lmax]`.
#[derive(Debug, Clone)]
pub struct FilterBank {
    kernels: Vec<Kernel>,
    design: Option<FilterDesign>,
    lmax: f64,
}

#[derive(Serialize, Deserialize)]
struct Descriptor {
    design: FilterDesign,
    lmax: f64,
}

impl FilterBank {
    /// Bank from arbitrary kernels. It cannot be serialized.
    pub fn from_kernels(kernels: Vec<Kernel>, lmax: f64) -> Result<Self, FilterError> {
        if kernels.is_empty() {
            return Err(FilterError::BadParameter("a filter bank needs at least one kernel".into()));
        }
        Ok(FilterBank { kernels, design: None, lmax })
    }

    pub(crate) fn designed(kernels: Vec<Kernel>, design: FilterDesign, lmax: f64) -> Self {
        FilterBank { kernels, design: Some(design), lmax }
    }

    pub fn kernels(&self) -> &[Kernel] {
        &self.kernels
    }

    pub fn len(&self) -> usize {
        self.kernels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kernels.is_empty()
    }

    pub fn lmax(&self) -> f64 {
        self.lmax
    }

    pub fn design(&self) -> Option<&FilterDesign> {
        self.design.as_ref()
    }

    /// `[g_0(x), ..., g_{Nf-1}(x)]`.
    pub fn eval(&self, x: f64) -> Vec<f64> {
        self.kernels.iter().map(|k| k.eval(x)).collect()
    }

    /// `sum_k g_k(x)^2`.
    pub fn frame_sum(&self, x: f64) -> f64 {
        self.kernels.iter().map(|k| k.eval(x).powi(2)).sum()
    }

    /// Min and max of the frame sum over `grid_size` uniform points of `[0, lmax]`.
    pub fn frame_bounds(&self, lmax: f64, grid_size: usize) -> Result<(f64, f64), FilterError> {
        if grid_size < 2 {
            return Err(FilterError::BadParameter("frame bound grid needs at least 2 points".into()));
        }
        let step = lmax / (grid_size - 1) as f64;
        Ok(bounds((0..grid_size).map(|i| self.frame_sum(i as f64 * step))))
    }

    /// Min and max of the frame sum over the given eigenvalues.
    pub fn frame_bounds_on(&self, eigenvalues: &DVector<f64>) -> (f64, f64) {
        bounds(eigenvalues.iter().map(|&x| self.frame_sum(x)))
    }

    pub fn to_json(&self) -> Result<String, FilterError> {
        let design = self.design.clone().ok_or(FilterError::NoDescriptor)?;
        serde_json::to_string_pretty(&Descriptor { design, lmax: self.lmax })
            .map_err(|e| FilterError::Descriptor(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self, FilterError> {
        let d: Descriptor = serde_json::from_str(s).map_err(|e| FilterError::Descriptor(e.to_string()))?;
        design(&d.design, d.lmax)
    }

    /// Kernels and frame sum sampled on a uniform grid, as CSV with a header row.
    pub fn sampled_csv(&self, grid_size: usize) -> String {
        let mut out = String::from("x");
        for k in &self.kernels {
            out.push(',');
            out.push_str(k.label());
        }
        out.push_str(",frame\n");
        let step = self.lmax / (grid_size.max(2) - 1) as f64;
        for i in 0..grid_size.max(2) {
            let x = i as f64 * step;
            out.push_str(&format!("{x:e}"));
            for v in self.eval(x) {
                out.push_str(&format!(",{v:e}"));
            }
            out.push_str(&format!(",{:e}\n", self.frame_sum(x)));
        }
        out
    }
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), s| (a.min(s), b.max(s)))
}

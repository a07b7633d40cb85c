use std::f64::consts::{E, FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use super::{FilterBank, FilterError, Kernel};
use crate::graph::Graph;
use crate::spectral::SpectralError;

/// Parameterized filter-bank families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FilterDesign {
    /// Single low-pass kernel `exp(-tau x / lmax)`.
    Heat { tau: f64 },
    /// Low-pass Gaussian plus `scales` band-pass kernels `t x exp(-t x)`.
    MexicanHat { scales: usize },
    /// `m` overlapping sine-squared windows whose squares sum to one.
    Itersine { m: usize },
    /// Low-pass/high-pass pair with `lp^2 + hp^2 = 1`; `d` sharpens the transition.
    RegularHpLp { d: usize },
    /// `m` Gaussian windows of width `lmax / m` translated uniformly across the spectrum.
    Gabor { m: usize },
    /// Smooth compactly supported low-pass with cutoff `band * lmax`.
    Expwin { band: f64 },
    /// All-pass kernel.
    Identity,
    /// Itersine windows composed with a spectrum-adapted warp.
    WarpedTranslates { m: usize, warp: Warp },
}

impl FilterDesign {
    pub fn name(&self) -> &'static str {
        match self {
            FilterDesign::Heat { .. } => "heat",
            FilterDesign::MexicanHat { .. } => "mexican_hat",
            FilterDesign::Itersine { .. } => "itersine",
            FilterDesign::RegularHpLp { .. } => "regular_hp_lp",
            FilterDesign::Gabor { .. } => "gabor",
            FilterDesign::Expwin { .. } => "expwin",
            FilterDesign::Identity => "identity",
            FilterDesign::WarpedTranslates { .. } => "warped_translates",
        }
    }
}

/// Monotone piecewise-linear map from `[e_0, e_{N-1}]` onto `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Warp {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl Warp {
    /// Empirical spectral CDF: `e_l -> l / (N - 1)`, repeated eigenvalues averaged.
    pub fn from_eigenvalues(e: &[f64]) -> Warp {
        let n = e.len();
        if n < 2 {
            return Warp { x: vec![0.0, 1.0], y: vec![0.0, 1.0] };
        }
        let scale = e.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        let mut x: Vec<f64> = Vec::new();
        let mut y: Vec<f64> = Vec::new();
        let mut l = 0;
        while l < n {
            let mut r = l + 1;
            while r < n && e[r] - e[l] <= 1e-10 * scale {
                r += 1;
            }
            let count = (r - l) as f64;
            x.push(e[l..r].iter().sum::<f64>() / count);
            y.push((l..r).map(|i| i as f64).sum::<f64>() / count / (n - 1) as f64);
            l = r;
        }
        if x.len() == 1 {
            return Warp { x: vec![x[0], x[0] + 1.0], y: vec![0.0, 1.0] };
        }
        // pin the end points so the warped axis spans [0, 1]
        y[0] = 0.0;
        *y.last_mut().expect("non-empty") = 1.0;
        Warp { x, y }
    }

    pub fn eval(&self, v: f64) -> f64 {
        let (x, y) = (&self.x, &self.y);
        if v <= x[0] {
            return y[0];
        }
        let last = x.len() - 1;
        if v >= x[last] {
            return y[last];
        }
        let k = x.partition_point(|&xi| xi <= v);
        let (x0, x1, y0, y1) = (x[k - 1], x[k], y[k - 1], y[k]);
        y0 + (y1 - y0) * (v - x0) / (x1 - x0)
    }
}

fn bad(msg: impl Into<String>) -> FilterError {
    FilterError::BadParameter(msg.into())
}

/// `sin(pi/2 cos^2(pi u))` on `|u| <= 1/2`, zero elsewhere.
fn itersine_window(u: f64) -> f64 {
    if u.abs() > 0.5 {
        0.0
    } else {
        (FRAC_PI_2 * (PI * u).cos().powi(2)).sin()
    }
}

/// `m` translates on `[0, span]`, window `j` centred at `j span / (m - 1)`.
fn itersine_kernels(m: usize, span: f64) -> Vec<Box<dyn Fn(f64) -> f64 + Send + Sync>> {
    if m == 1 {
        return vec![Box::new(|_| 1.0)];
    }
    let h = span / (m - 1) as f64;
    (0..m)
        .map(|j| {
            let f: Box<dyn Fn(f64) -> f64 + Send + Sync> =
                Box::new(move |x: f64| itersine_window(x / (2.0 * h) - j as f64 / 2.0));
            f
        })
        .collect()
}

/// Filter bank for `design` on the spectral interval `[0, lmax]`.
pub fn design(design: &FilterDesign, lmax: f64) -> Result<FilterBank, FilterError> {
    if !(lmax > 0.0 && lmax.is_finite()) {
        return Err(bad(format!("lmax must be positive and finite, got {lmax}")));
    }
    let kernels = match *design {
        FilterDesign::Heat { tau } => {
            if !(tau >= 0.0 && tau.is_finite()) {
                return Err(bad(format!("heat tau must be nonnegative, got {tau}")));
            }
            vec![Kernel::new("heat", move |x| (-tau * x / lmax).exp())]
        }
        FilterDesign::MexicanHat { scales } => {
            if scales == 0 {
                return Err(bad("mexican hat needs at least one scale"));
            }
            let ts: Vec<f64> = if scales == 1 {
                vec![40f64.sqrt() / lmax]
            } else {
                (0..scales)
                    .map(|j| (20.0 / lmax) * 0.1f64.powf(j as f64 / (scales - 1) as f64))
                    .collect()
            };
            let mut ks = vec![Kernel::new("lowpass", move |x| (-(10.0 * x / lmax).powi(2)).exp() / E)];
            for (j, t) in ts.into_iter().enumerate() {
                ks.push(Kernel::new(format!("scale{j}"), move |x| t * x * (-t * x).exp()));
            }
            ks
        }
        FilterDesign::Itersine { m } => {
            if m == 0 {
                return Err(bad("itersine needs at least one window"));
            }
            itersine_kernels(m, lmax)
                .into_iter()
                .enumerate()
                .map(|(j, w)| Kernel::new(format!("window{j}"), w))
                .collect()
        }
        FilterDesign::RegularHpLp { d } => {
            let q = move |x: f64| {
                let mut q = (2.0 * x / lmax - 1.0).clamp(-1.0, 1.0);
                for _ in 0..d {
                    q = q * (3.0 - q * q) / 2.0;
                }
                q
            };
            vec![
                Kernel::new("lowpass", move |x| (FRAC_PI_4 * (1.0 + q(x))).cos()),
                Kernel::new("highpass", move |x| (FRAC_PI_4 * (1.0 + q(x))).sin()),
            ]
        }
        FilterDesign::Gabor { m } => {
            if m == 0 {
                return Err(bad("gabor needs at least one shift"));
            }
            let w = lmax / m as f64;
            (0..m)
                .map(|k| {
                    let shift = if m == 1 { 0.0 } else { k as f64 * lmax / (m - 1) as f64 };
                    Kernel::new(format!("shift{k}"), move |x| (-((x - shift) / w).powi(2)).exp())
                })
                .collect()
        }
        FilterDesign::Expwin { band } => {
            if !(band > 0.0 && band <= 1.0) {
                return Err(bad(format!("expwin band must lie in (0, 1], got {band}")));
            }
            let c = band * lmax;
            vec![Kernel::new("expwin", move |x| {
                let r = x / c;
                if r.abs() < 1.0 {
                    (1.0 - 1.0 / (1.0 - r * r)).exp()
                } else {
                    0.0
                }
            })]
        }
        FilterDesign::Identity => vec![Kernel::new("identity", |_| 1.0)],
        FilterDesign::WarpedTranslates { m, ref warp } => {
            if m == 0 {
                return Err(bad("warped translates need at least one window"));
            }
            check_warp(warp)?;
            itersine_kernels(m, 1.0)
                .into_iter()
                .enumerate()
                .map(|(j, w)| {
                    let warp = warp.clone();
                    Kernel::new(format!("window{j}"), move |x| w(warp.eval(x)))
                })
                .collect()
        }
    };
    Ok(FilterBank::designed(kernels, design.clone(), lmax))
}

fn check_warp(w: &Warp) -> Result<(), FilterError> {
    let ok = w.x.len() >= 2
        && w.x.len() == w.y.len()
        && w.x.windows(2).all(|p| p[1] > p[0])
        && w.y.windows(2).all(|p| p[1] >= p[0])
        && w.x.iter().chain(&w.y).all(|v| v.is_finite());
    if ok {
        Ok(())
    } else {
        Err(bad("warp nodes must be finite with increasing x and nondecreasing y"))
    }
}

/// `m` itersine windows composed with the empirical CDF of the graph spectrum,
/// so windows crowd where eigenvalues do. Requires the Fourier basis.
pub fn warped_translates(g: &Graph, m: usize) -> Result<FilterBank, FilterError> {
    let s = g.fourier().ok_or(SpectralError::MissingFourierBasis)?;
    let warp = Warp::from_eigenvalues(s.e.as_slice());
    let lmax = if s.lmax > 0.0 { s.lmax } else { 1.0 };
    design(&FilterDesign::WarpedTranslates { m, warp }, lmax)
}

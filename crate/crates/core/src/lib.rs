//! Signal processing on graphs.
//!
//! A [`Graph`](graph::Graph) is defined by a sparse nonnegative weight matrix.
//! On top of it the crate provides Laplacians (including three directed
//! variants), the graph Fourier transform, edge gradients, spectral filter
//! banks applied exactly or by Chebyshev polynomials, Kron-reduction
//! pyramids, and graph-regularized denoising solvers. Results can be written
//! as Matrix Market, CSV, SVG and DOT files.
//!
//! ```
//! use graphsig::filters::{design, filter_analysis, FilterDesign, FilterMethod};
//! use graphsig::graph::sensor;
//! use nalgebra::DMatrix;
//!
//! let g = sensor(64, 6, 1).unwrap();
//! let lmax = g.estimate_lmax();
//! let bank = design(&FilterDesign::Heat { tau: 5.0 }, lmax).unwrap();
//! let f = DMatrix::from_fn(64, 1, |i, _| (i as f64).sin());
//! let smooth = filter_analysis(&g, &bank, &f, FilterMethod::Chebyshev(30)).unwrap();
//! assert_eq!(smooth.shape(), (64, 1));
//! ```

pub mod cli;
pub mod filters;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod operators;
pub mod optimize;
pub mod plot;
pub mod pyramid;
pub mod rng;
pub mod sparse;
pub mod spectral;

use thiserror::Error;

/// Any error raised by this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] graph::GraphError),
    #[error(transparent)]
    Spectral(#[from] spectral::SpectralError),
    #[error(transparent)]
    Operator(#[from] operators::OperatorError),
    #[error(transparent)]
    Filter(#[from] filters::FilterError),
    #[error(transparent)]
    Pyramid(#[from] pyramid::PyramidError),
    #[error(transparent)]
    Optimize(#[from] optimize::OptimizeError),
    #[error(transparent)]
    Plot(#[from] plot::PlotError),
    #[error(transparent)]
    Io(#[from] io::IoError),
}

fn variant_name(debug: String) -> String {
    debug.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect()
}

impl Error {
    /// `Module::Variant` of the innermost error, e.g. `SpectralError::MissingLmax`.
    pub fn origin(&self) -> String {
        use filters::FilterError as F;
        use optimize::OptimizeError as O;
        let (module, debug) = match self {
            Error::Graph(e) | Error::Pyramid(pyramid::PyramidError::Graph(e)) | Error::Io(io::IoError::Graph(e)) => {
                ("GraphError", format!("{e:?}"))
            }
            Error::Spectral(e)
            | Error::Filter(F::Spectral(e))
            | Error::Optimize(O::Spectral(e))
            | Error::Optimize(O::Filter(F::Spectral(e))) => ("SpectralError", format!("{e:?}")),
            Error::Filter(e) | Error::Optimize(O::Filter(e)) => ("FilterError", format!("{e:?}")),
            Error::Operator(e) => ("OperatorError", format!("{e:?}")),
            Error::Pyramid(e) => ("PyramidError", format!("{e:?}")),
            Error::Optimize(e) => ("OptimizeError", format!("{e:?}")),
            Error::Plot(e) => ("PlotError", format!("{e:?}")),
            Error::Io(e) => ("IoError", format!("{e:?}")),
        };
        format!("{module}::{}", variant_name(debug))
    }
}

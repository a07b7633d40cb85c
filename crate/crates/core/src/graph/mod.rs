//! The graph record and everything that constructs one.
//!
//! A [`Graph`] is fully defined by its sparse, nonnegative weight matrix. The
//! Laplacian, degree vector and edge count are derived at construction time;
//! heavier derived data (Fourier basis, spectral-radius estimate, incidence
//! operator) is computed on demand and cached in compute-once cells.
//!
//! Ingestion is tolerant: explicit zeros are pruned, self-loops are dropped
//! (with [`Graph::self_loops_dropped`] set), and an asymmetric matrix declared
//! undirected is symmetrized by the arithmetic mean `(W + W^T) / 2`.

mod directed;
mod generators;
pub mod kdtree;
mod laplacian;
mod nn;
mod patch;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::CsrMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::operators::IncidenceOperator;
use crate::sparse;
use crate::spectral::SpectralData;

pub use directed::{stationary_distribution, DirectedData};
pub use generators::{
    comet, community, erdos_renyi, grid2d, path, ring, sbm, sensor, swiss_roll, two_moons,
    CommunityParams, SbmParams,
};
pub use laplacian::laplacian;
pub use nn::{nn_graph, NnStrategy, Sigma};
pub use patch::{patch_graph, Image, PatchGraphParams, SearchWindow};

/// Tolerance used to decide whether a weight matrix is symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("weight matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("negative weight {value} at ({row}, {col})")]
    NegativeWeight { row: usize, col: usize, value: f64 },
    #[error("non-finite weight at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("Laplacian kind {kind} cannot be used on a directed graph")]
    KindMismatch { kind: LaplacianKind },
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("vertex {vertex} has zero in- or out-degree")]
    ZeroDegreeVertex { vertex: usize },
    #[error("vertex {vertex} has zero out-degree")]
    ZeroOutDegree { vertex: usize },
    #[error("stationary distribution did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("size too small: {0}")]
    SizeTooSmall(String),
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("block sizes sum to {got}, expected {expected}")]
    BlockSizeMismatch { expected: usize, got: usize },
    #[error("k = {k} must be smaller than the number of points {points}")]
    KTooLarge { k: usize, points: usize },
    #[error("all points are identical")]
    DegenerateCloud,
    #[error("patch of size {patch} does not fit in a {height}x{width} image")]
    PatchLargerThanImage { patch: usize, height: usize, width: usize },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("could not generate a connected graph after {0} attempts")]
    GenerationFailed(usize),
}

/// Laplacian definitions: two for undirected graphs, three for directed ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LaplacianKind {
    /// `D - W`.
    Combinatorial,
    /// `D^{-1/2} (D - W) D^{-1/2}`, isolated vertices mapped to zero rows.
    Normalized,
    /// `(D+ + D- - W - W^T) / 2`.
    DirectedCombinatorial,
    /// `I - D+^{-1/2} (W + W^T) D-^{-1/2} / 2`.
    DegreeNormalized,
    /// `I - (Pi^{1/2} P Pi^{-1/2} + Pi^{-1/2} P^T Pi^{1/2}) / 2`.
    DistributionNormalized,
}

impl LaplacianKind {
    pub const ALL: [LaplacianKind; 5] = [
        LaplacianKind::Combinatorial,
        LaplacianKind::Normalized,
        LaplacianKind::DirectedCombinatorial,
        LaplacianKind::DegreeNormalized,
        LaplacianKind::DistributionNormalized,
    ];

    pub fn for_directed(self) -> bool {
        matches!(
            self,
            LaplacianKind::DirectedCombinatorial
                | LaplacianKind::DegreeNormalized
                | LaplacianKind::DistributionNormalized
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            LaplacianKind::Combinatorial => "combinatorial",
            LaplacianKind::Normalized => "normalized",
            LaplacianKind::DirectedCombinatorial => "directed-combinatorial",
            LaplacianKind::DegreeNormalized => "degree-normalized",
            LaplacianKind::DistributionNormalized => "distribution-normalized",
        }
    }

    /// The kind a freshly constructed graph gets.
    pub fn default_for(directed: bool) -> Self {
        if directed {
            LaplacianKind::DirectedCombinatorial
        } else {
            LaplacianKind::Combinatorial
        }
    }
}

impl fmt::Display for LaplacianKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LaplacianKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LaplacianKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown Laplacian kind '{s}'"))
    }
}

/// Plotting parameters carried by the graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotParams {
    pub vertex_size: f64,
    pub edge_width: f64,
    pub colormap: String,
}

impl Default for PlotParams {
    fn default() -> Self {
        PlotParams { vertex_size: 5.0, edge_width: 1.0, colormap: "viridis".into() }
    }
}

/// Whether to treat the input matrix as directed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Directedness {
    Undirected,
    Directed,
    /// Directed iff the matrix is asymmetric beyond [`SYMMETRY_TOL`].
    #[default]
    Auto,
}

#[derive(Debug, Clone)]
pub struct Graph {
    weights: CsrMatrix<f64>,
    laplacian: CsrMatrix<f64>,
    lap_kind: LaplacianKind,
    degrees: DVector<f64>,
    n_edges: usize,
    directed: bool,
    name: String,
    coords: Option<DMatrix<f64>>,
    pub plotting: PlotParams,
    self_loops_dropped: bool,
    symmetrized: bool,
    pub(crate) fourier: OnceLock<SpectralData>,
    pub(crate) lmax_estimate: OnceLock<f64>,
    pub(crate) incidence: OnceLock<IncidenceOperator>,
}

/// Builder for [`Graph`]; the weight matrix is the only required input.
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    weights: CsrMatrix<f64>,
    directed: Directedness,
    kind: Option<LaplacianKind>,
    coords: Option<DMatrix<f64>>,
    name: String,
}

impl GraphBuilder {
    pub fn directed(mut self, directed: bool) -> Self {
        self.directed = if directed { Directedness::Directed } else { Directedness::Undirected };
        self
    }

    pub fn directedness(mut self, d: Directedness) -> Self {
        self.directed = d;
        self
    }

    pub fn laplacian(mut self, kind: LaplacianKind) -> Self {
        self.kind = Some(kind);
        self
    }

    pub fn coords(mut self, coords: DMatrix<f64>) -> Self {
        self.coords = Some(coords);
        self
    }

    pub fn maybe_coords(mut self, coords: Option<DMatrix<f64>>) -> Self {
        self.coords = coords;
        self
    }

    pub fn name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn build(self) -> Result<Graph, GraphError> {
        let w = &self.weights;
        let n = w.nrows();
        if w.ncols() != n {
            return Err(GraphError::NonSquare { rows: n, cols: w.ncols() });
        }
        if n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let mut self_loops_dropped = false;
        for (i, j, &v) in w.triplet_iter() {
            if !v.is_finite() {
                return Err(GraphError::NonFinite { row: i, col: j });
            }
            if v < 0.0 {
                return Err(GraphError::NegativeWeight { row: i, col: j, value: v });
            }
            if i == j && v != 0.0 {
                self_loops_dropped = true;
            }
        }
        let mut weights = sparse::filter(w, |i, j, v| i != j && v != 0.0);

        let asymmetry = sparse::max_asymmetry(&weights);
        let directed = match self.directed {
            Directedness::Directed => true,
            Directedness::Undirected => false,
            Directedness::Auto => asymmetry > SYMMETRY_TOL,
        };
        let symmetrized = !directed && asymmetry > SYMMETRY_TOL;
        if !directed {
            let t = weights.transpose();
            let sum = &weights + &t;
            weights = sparse::map_values(&sum, |_, _, v| 0.5 * v);
        }

        if let Some(c) = &self.coords {
            if c.nrows() != n || !(c.ncols() == 2 || c.ncols() == 3) {
                return Err(GraphError::ShapeMismatch(format!(
                    "coordinates must be {n}x2 or {n}x3, got {}x{}",
                    c.nrows(),
                    c.ncols()
                )));
            }
        }

        let kind = self.kind.unwrap_or(LaplacianKind::default_for(directed));
        let lap = laplacian::compute(&weights, directed, kind)?;
        let degrees = sparse::row_sums(&weights);
        let nnz = weights.nnz();
        Ok(Graph {
            laplacian: lap,
            lap_kind: kind,
            degrees,
            n_edges: if directed { nnz } else { nnz / 2 },
            directed,
            name: self.name,
            coords: self.coords,
            plotting: PlotParams::default(),
            self_loops_dropped,
            symmetrized,
            weights,
            fourier: OnceLock::new(),
            lmax_estimate: OnceLock::new(),
            incidence: OnceLock::new(),
        })
    }
}

impl Graph {
    pub fn builder(weights: CsrMatrix<f64>) -> GraphBuilder {
        GraphBuilder {
            weights,
            directed: Directedness::Auto,
            kind: None,
            coords: None,
            name: String::new(),
        }
    }

    /// Undirected/directed detection is automatic; default Laplacian.
    pub fn from_weights(weights: CsrMatrix<f64>) -> Result<Graph, GraphError> {
        Graph::builder(weights).build()
    }

    /// Graph from a dense weight matrix (convenience for small examples).
    pub fn from_dense(weights: &DMatrix<f64>) -> Result<Graph, GraphError> {
        Graph::from_weights(sparse::from_dense(weights, 0.0))
    }

    /// A copy of this graph whose stored Laplacian is of `kind`.
    ///
    /// Cached spectral data is discarded since it depends on the Laplacian.
    pub fn with_laplacian(&self, kind: LaplacianKind) -> Result<Graph, GraphError> {
        let lap = laplacian::compute(&self.weights, self.directed, kind)?;
        Ok(Graph {
            laplacian: lap,
            lap_kind: kind,
            fourier: OnceLock::new(),
            lmax_estimate: OnceLock::new(),
            incidence: self.incidence.clone(),
            ..self.clone()
        })
    }

    pub fn with_coords(mut self, coords: DMatrix<f64>) -> Result<Graph, GraphError> {
        let n = self.n();
        if coords.nrows() != n || !(coords.ncols() == 2 || coords.ncols() == 3) {
            return Err(GraphError::ShapeMismatch(format!(
                "coordinates must be {n}x2 or {n}x3, got {}x{}",
                coords.nrows(),
                coords.ncols()
            )));
        }
        self.coords = Some(coords);
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Graph {
        self.name = name.into();
        self
    }

    pub fn w(&self) -> &CsrMatrix<f64> {
        &self.weights
    }

    pub fn l(&self) -> &CsrMatrix<f64> {
        &self.laplacian
    }

    pub fn lap_kind(&self) -> LaplacianKind {
        self.lap_kind
    }

    /// Degrees (out-degrees for directed graphs).
    pub fn degrees(&self) -> &DVector<f64> {
        &self.degrees
    }

    pub fn in_degrees(&self) -> DVector<f64> {
        sparse::col_sums(&self.weights)
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    pub fn ne(&self) -> usize {
        self.n_edges
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coords(&self) -> Option<&DMatrix<f64>> {
        self.coords.as_ref()
    }

    pub fn self_loops_dropped(&self) -> bool {
        self.self_loops_dropped
    }

    pub fn was_symmetrized(&self) -> bool {
        self.symmetrized
    }

    /// True when the undirected pattern of `W` has a single component.
    pub fn is_connected(&self) -> bool {
        let labels = sparse::components(&self.weights);
        labels.iter().all(|&l| l == 0)
    }

    /// Spectral radius bound used by polynomial filtering: the exact largest
    /// eigenvalue when the Fourier basis has been computed, otherwise the
    /// Lanczos estimate if one was made.
    pub fn lmax(&self) -> Option<f64> {
        self.fourier
            .get()
            .map(|s| s.lmax)
            .or_else(|| self.lmax_estimate.get().copied())
    }

    /// The cached Fourier basis, if computed.
    pub fn fourier(&self) -> Option<&SpectralData> {
        self.fourier.get()
    }

    /// Undirected edge list `(i, j, w)` with `i < j`, or every arc for directed graphs.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.weights
            .triplet_iter()
            .filter(|&(i, j, _)| self.directed || i < j)
            .map(|(i, j, &w)| (i, j, w))
            .collect()
    }
}

//! Multiresolution graphs by vertex selection and Kron reduction, and the
//! Laplacian pyramid transform of graph signals.
//!
//! Each level keeps the vertices on which the largest Laplacian eigenvector is
//! nonnegative (or nonpositive, whichever set holds at least half of them) and
//! replaces the graph by the Schur complement of its Laplacian. Reduced graphs
//! are not sparsified and densify as levels are added.
//!
//! Prediction errors are stored at the full size of each level, which makes
//! synthesis an exact inverse of analysis.

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::CsrMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, LaplacianKind};
use crate::linalg::{lanczos, SparseCholesky};
use crate::sparse;
use crate::spectral;

/// Dense eigensolver below this size, Lanczos above.
const DENSE_SELECTION_LIMIT: usize = 500;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PyramidError {
    #[error("the kept vertex set is empty")]
    EmptyKeptSet,
    #[error("every vertex is kept; the eliminated set must be non-empty")]
    EmptyComplement,
    #[error("vertex index {index} out of range for {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("vertex index {0} listed twice")]
    DuplicateIndex(usize),
    #[error("the Laplacian block on the eliminated vertices is singular")]
    SingularInteriorBlock,
    #[error("multiresolution needs a connected graph")]
    NotConnected,
    #[error("multiresolution needs an undirected graph with the combinatorial Laplacian")]
    UnsupportedLaplacian,
    #[error("level {level} has {n} vertex and cannot be reduced further")]
    LevelTooSmall { level: usize, n: usize },
    #[error("bad pyramid parameter: {0}")]
    BadParameter(String),
    #[error("expected {expected} values, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("pyramid does not match the multiresolution: {0}")]
    LevelMismatch(String),
    #[error("linear solve failed: {0}")]
    SolverFailure(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Low-pass constant `alpha` (level filter `1 / (1 + alpha x)`) and interpolation regularizer `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PyramidParams {
    pub alpha: f64,
    pub epsilon: f64,
}

impl Default for PyramidParams {
    fn default() -> Self {
        PyramidParams { alpha: 1.0, epsilon: 0.005 }
    }
}

fn checked_sorted(kept: &[usize], n: usize) -> Result<Vec<usize>, PyramidError> {
    let mut k = kept.to_vec();
    k.sort_unstable();
    for w in k.windows(2) {
        if w[0] == w[1] {
            return Err(PyramidError::DuplicateIndex(w[0]));
        }
    }
    if let Some(&last) = k.last() {
        if last >= n {
            return Err(PyramidError::IndexOutOfRange { index: last, n });
        }
    }
    Ok(k)
}

fn complement(kept: &[usize], n: usize) -> Vec<usize> {
    let mut mark = vec![false; n];
    for &i in kept {
        mark[i] = true;
    }
    (0..n).filter(|&i| !mark[i]).collect()
}

/// Schur complement `L_kk - L_kc L_cc^{-1} L_ck` onto the sorted set `kept`.
///
/// The result is symmetrized; positive off-diagonal entries below `1e-10`
/// (round-off on what should be nonpositive) are set to zero and entries
/// below `1e-12` in magnitude are dropped.
pub fn kron_reduce(l: &CsrMatrix<f64>, kept: &[usize]) -> Result<CsrMatrix<f64>, PyramidError> {
    let n = l.nrows();
    let kept = checked_sorted(kept, n)?;
    if kept.is_empty() {
        return Err(PyramidError::EmptyKeptSet);
    }
    let comp = complement(&kept, n);
    if comp.is_empty() {
        return Err(PyramidError::EmptyComplement);
    }
    let l_cc = sparse::submatrix(l, &comp, &comp);
    let l_ck = sparse::to_dense(&sparse::submatrix(l, &comp, &kept));
    let l_kc = sparse::submatrix(l, &kept, &comp);
    let chol = SparseCholesky::factor(&l_cc).ok_or(PyramidError::SingularInteriorBlock)?;
    let x = chol.solve(&l_ck);
    let mut red = sparse::to_dense(&sparse::submatrix(l, &kept, &kept)) - sparse::spmm(&l_kc, &x);
    red = (&red + red.transpose()) * 0.5;
    let m = kept.len();
    let mut trip = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let v = red[(i, j)];
            let clamped = if i != j && v > 0.0 && v < 1e-10 { 0.0 } else { v };
            if clamped.abs() >= 1e-12 {
                trip.push((i, j, clamped));
            }
        }
    }
    Ok(sparse::from_triplets(m, m, trip))
}

/// One level of a [`Multiresolution`].
#[derive(Debug, Clone)]
pub struct Level {
    pub graph: Graph,
    /// Indices into the previous level's vertices (empty for level 0).
    pub kept: Vec<usize>,
    /// True when polarity selection was degenerate and every other vertex was kept instead.
    pub fallback: bool,
}

#[derive(Debug, Clone)]
pub struct Multiresolution {
    pub levels: Vec<Level>,
    pub params: PyramidParams,
}

impl Multiresolution {
    pub fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.graph.n()).collect()
    }

    pub fn n_levels(&self) -> usize {
        self.levels.len() - 1
    }
}

fn largest_eigenvector(g: &Graph) -> DVector<f64> {
    let n = g.n();
    if n <= DENSE_SELECTION_LIMIT {
        let s = spectral::dense_eigen(&sparse::to_dense(g.l()));
        return s.u.column(n - 1).into_owned();
    }
    let l = g.l();
    let mut v = lanczos::largest_eigenpair(|x| l * x, n, 300, 1e-10).vector;
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-8) {
        if *first < 0.0 {
            v.neg_mut();
        }
    }
    v
}

/// Kept set by polarity of the largest eigenvector, and whether the fallback was used.
fn select(g: &Graph) -> (Vec<usize>, bool) {
    let n = g.n();
    let u = largest_eigenvector(g);
    let zero = 1e-12;
    let mut kept: Vec<usize> = (0..n).filter(|&i| u[i] >= -zero).collect();
    if 2 * kept.len() < n {
        kept = (0..n).filter(|&i| u[i] <= zero).collect();
    }
    if kept.is_empty() || kept.len() == n {
        return ((0..n).step_by(2).collect(), true);
    }
    (kept, false)
}

fn reduced_graph(parent: &Graph, kept: &[usize], level: usize) -> Result<Graph, PyramidError> {
    let red = kron_reduce(parent.l(), kept)?;
    let w = sparse::filter(&sparse::map_values(&red, |_, _, v| -v), |i, j, v| i != j && v > 0.0);
    let coords = parent.coords().map(|c| DMatrix::from_fn(kept.len(), c.ncols(), |r, k| c[(kept[r], k)]));
    let name = if parent.name().is_empty() { format!("level{level}") } else { format!("{}-level{level}", parent.name()) };
    Ok(Graph::builder(w)
        .directed(false)
        .laplacian(LaplacianKind::Combinatorial)
        .maybe_coords(coords)
        .name(name)
        .build()?)
}

/// Graph pyramid with `n_levels` reductions below `g`.
pub fn graph_multiresolution(g: &Graph, n_levels: usize, params: PyramidParams) -> Result<Multiresolution, PyramidError> {
    check_params(&params)?;
    if g.is_directed() || g.lap_kind() != LaplacianKind::Combinatorial {
        return Err(PyramidError::UnsupportedLaplacian);
    }
    if !g.is_connected() {
        return Err(PyramidError::NotConnected);
    }
    let mut levels = vec![Level { graph: g.clone(), kept: Vec::new(), fallback: false }];
    for level in 1..=n_levels {
        let parent = &levels[level - 1].graph;
        if parent.n() < 2 {
            return Err(PyramidError::LevelTooSmall { level: level - 1, n: parent.n() });
        }
        let (kept, fallback) = select(parent);
        let graph = reduced_graph(parent, &kept, level)?;
        levels.push(Level { graph, kept, fallback });
    }
    Ok(Multiresolution { levels, params })
}

fn check_params(p: &PyramidParams) -> Result<(), PyramidError> {
    if !(p.alpha >= 0.0 && p.alpha.is_finite()) {
        return Err(PyramidError::BadParameter(format!("alpha must be nonnegative, got {}", p.alpha)));
    }
    if !(p.epsilon > 0.0 && p.epsilon.is_finite()) {
        return Err(PyramidError::BadParameter(format!("epsilon must be positive, got {}", p.epsilon)));
    }
    Ok(())
}

/// Regularized Green's-function interpolation of `values` given on `kept`.
///
/// Equals `Phi[:, kept] a` with `Phi = (L + eps I)^{-1}` and `Phi[kept, kept] a = values`,
/// computed as `x_kept = values`, `x_c = -(L_cc + eps I)^{-1} L_ck values`.
pub fn interpolate(g: &Graph, kept: &[usize], values: &DVector<f64>, epsilon: f64) -> Result<DVector<f64>, PyramidError> {
    if !(epsilon > 0.0) {
        return Err(PyramidError::BadParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    let n = g.n();
    let kept = checked_sorted(kept, n)?;
    if kept.is_empty() {
        return Err(PyramidError::EmptyKeptSet);
    }
    if values.len() != kept.len() {
        return Err(PyramidError::ShapeMismatch { expected: kept.len(), got: values.len() });
    }
    let mut x = DVector::zeros(n);
    for (v, &i) in values.iter().zip(&kept) {
        x[i] = *v;
    }
    let comp = complement(&kept, n);
    if comp.is_empty() {
        return Ok(x);
    }
    let shift = sparse::identity(comp.len()) * epsilon;
    let a_cc = sparse::submatrix(g.l(), &comp, &comp) + shift;
    let chol = SparseCholesky::factor(&a_cc).ok_or_else(|| PyramidError::SolverFailure("L_cc + eps I is not positive definite".into()))?;
    let rhs = -(sparse::submatrix(g.l(), &comp, &kept) * values);
    let xc = chol.solve(&DMatrix::from_column_slice(comp.len(), 1, rhs.as_slice()));
    for (r, &i) in comp.iter().enumerate() {
        x[i] = xc[(r, 0)];
    }
    Ok(x)
}

/// `(I + alpha L)^{-1} f`.
fn smooth(g: &Graph, alpha: f64, f: &DVector<f64>) -> Result<DVector<f64>, PyramidError> {
    if alpha == 0.0 {
        return Ok(f.clone());
    }
    let a = sparse::identity(g.n()) + g.l() * alpha;
    let chol = SparseCholesky::factor(&a).ok_or_else(|| PyramidError::SolverFailure("I + alpha L is not positive definite".into()))?;
    Ok(chol.solve(&DMatrix::from_column_slice(f.len(), 1, f.as_slice())).column(0).into_owned())
}

/// Coarse signals and prediction errors of a pyramid decomposition.
///
/// `errors[l]` lives on level `l` and `coarse[l]` on level `l + 1`; the last
/// entry of `coarse` is the coarsest approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct Pyramid {
    pub coarse: Vec<DVector<f64>>,
    pub errors: Vec<DVector<f64>>,
}

impl Pyramid {
    pub fn coarsest(&self) -> Option<&DVector<f64>> {
        self.coarse.last()
    }
}

pub fn pyramid_analysis(mr: &Multiresolution, f: &DVector<f64>) -> Result<Pyramid, PyramidError> {
    let n0 = mr.levels[0].graph.n();
    if f.len() != n0 {
        return Err(PyramidError::ShapeMismatch { expected: n0, got: f.len() });
    }
    let mut cur = f.clone();
    let mut coarse = Vec::new();
    let mut errors = Vec::new();
    for pair in mr.levels.windows(2) {
        let (parent, child) = (&pair[0].graph, &pair[1]);
        let low = smooth(parent, mr.params.alpha, &cur)?;
        let c = DVector::from_iterator(child.kept.len(), child.kept.iter().map(|&i| low[i]));
        let pred = interpolate(parent, &child.kept, &c, mr.params.epsilon)?;
        errors.push(&cur - pred);
        coarse.push(c.clone());
        cur = c;
    }
    Ok(Pyramid { coarse, errors })
}

pub fn pyramid_synthesis(mr: &Multiresolution, pyr: &Pyramid) -> Result<DVector<f64>, PyramidError> {
    let levels = mr.n_levels();
    if pyr.coarse.len() != levels || pyr.errors.len() != levels {
        return Err(PyramidError::LevelMismatch(format!(
            "{} levels in the multiresolution, {} coarse signals and {} error signals in the pyramid",
            levels,
            pyr.coarse.len(),
            pyr.errors.len()
        )));
    }
    for (l, (c, e)) in pyr.coarse.iter().zip(&pyr.errors).enumerate() {
        let (np, nc) = (mr.levels[l].graph.n(), mr.levels[l + 1].graph.n());
        if e.len() != np || c.len() != nc {
            return Err(PyramidError::LevelMismatch(format!("level {l} sizes do not match")));
        }
    }
    let Some(mut cur) = pyr.coarse.last().cloned() else {
        return Ok(DVector::zeros(0));
    };
    for l in (0..levels).rev() {
        let parent = &mr.levels[l].graph;
        cur = interpolate(parent, &mr.levels[l + 1].kept, &cur, mr.params.epsilon)? + &pyr.errors[l];
    }
    Ok(cur)
}

//! Edge-domain calculus: incidence matrix, gradient and divergence.
//!
//! Undirected edges are oriented from the smaller to the larger vertex index;
//! directed graphs keep the stored arc direction. `div` is the transpose of
//! `grad`, so `div(grad f) = L f` holds for the combinatorial Laplacian of an
//! undirected graph. The directed Laplacians are not of that form.

use nalgebra::DMatrix;
use nalgebra_sparse::CsrMatrix;
use thiserror::Error;

use crate::graph::Graph;
use crate::sparse;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("expected {expected} rows, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
}

/// Edge list plus the `Ne x N` gradient matrix, row `e = sqrt(w_e) (delta_j - delta_i)`.
#[derive(Debug, Clone)]
pub struct IncidenceOperator {
    pub edges: Vec<(usize, usize, f64)>,
    pub dg: CsrMatrix<f64>,
    dgt: CsrMatrix<f64>,
}

impl IncidenceOperator {
    pub fn from_edges(n: usize, edges: Vec<(usize, usize, f64)>) -> Self {
        let mut trip = Vec::with_capacity(2 * edges.len());
        for (e, &(i, j, w)) in edges.iter().enumerate() {
            let s = w.sqrt();
            trip.push((e, i, -s));
            trip.push((e, j, s));
        }
        let dg = sparse::from_triplets(edges.len(), n, trip);
        let dgt = dg.transpose();
        IncidenceOperator { edges, dg, dgt }
    }

    pub fn ne(&self) -> usize {
        self.dg.nrows()
    }

    pub fn n(&self) -> usize {
        self.dg.ncols()
    }

    /// `Dg f`.
    pub fn grad(&self, f: &DMatrix<f64>) -> Result<DMatrix<f64>, OperatorError> {
        if f.nrows() != self.n() {
            return Err(OperatorError::ShapeMismatch { expected: self.n(), got: f.nrows() });
        }
        Ok(sparse::spmm(&self.dg, f))
    }

    /// `Dg^T s`.
    pub fn div(&self, s: &DMatrix<f64>) -> Result<DMatrix<f64>, OperatorError> {
        if s.nrows() != self.ne() {
            return Err(OperatorError::ShapeMismatch { expected: self.ne(), got: s.nrows() });
        }
        Ok(sparse::spmm(&self.dgt, s))
    }

    /// Weighted total variation `||Dg f||_1` of a single signal.
    pub fn tv_norm(&self, f: &nalgebra::DVector<f64>) -> f64 {
        sparse::spmv(&self.dg, f).lp_norm(1)
    }
}

/// Incidence operator of `g`, built once and cached on the graph.
pub fn adj2vec(g: &Graph) -> &IncidenceOperator {
    if let Some(inc) = g.incidence.get() {
        return inc;
    }
    let _ = g.incidence.set(IncidenceOperator::from_edges(g.n(), g.edges()));
    g.incidence.get().expect("just published")
}

pub fn grad(g: &Graph, f: &DMatrix<f64>) -> Result<DMatrix<f64>, OperatorError> {
    adj2vec(g).grad(f)
}

pub fn div(g: &Graph, s: &DMatrix<f64>) -> Result<DMatrix<f64>, OperatorError> {
    adj2vec(g).div(s)
}

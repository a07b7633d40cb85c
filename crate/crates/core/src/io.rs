//! File formats: Matrix Market weights, headerless numeric CSV, spectra, edge
//! lists and pyramid directories.
//!
//! A graph file `name.mtx` may have a sibling `name.coords.csv` with one row of
//! coordinates per vertex. Numbers are written in Rust's shortest round-trip
//! form, so reading a file back reproduces the values bit for bit.

use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::io::load_coo_from_matrix_market_str;
use nalgebra_sparse::CsrMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::pyramid::{Multiresolution, Pyramid, PyramidParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IoError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: invalid Matrix Market data: {message}")]
    MatrixMarket { path: String, message: String },
    #[error("{path}: invalid CSV: {message}")]
    Csv { path: String, message: String },
    #[error("{path}: invalid JSON: {message}")]
    Json { path: String, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> IoError {
    IoError::Io { path: path.display().to_string(), message: e.to_string() }
}

pub fn read_to_string(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

pub fn write_string(path: &Path, contents: &str) -> Result<(), IoError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| io_err(path, e))
}

pub fn read_matrix_market(path: &Path) -> Result<CsrMatrix<f64>, IoError> {
    let text = read_to_string(path)?;
    let coo = load_coo_from_matrix_market_str::<f64>(&text).map_err(|e| IoError::MatrixMarket {
        path: path.display().to_string(),
        message: e.message().to_string(),
    })?;
    Ok(CsrMatrix::from(&coo))
}

/// Matrix Market coordinate text; with `symmetric` only the lower triangle is stored.
pub fn matrix_market_string(m: &CsrMatrix<f64>, symmetric: bool) -> String {
    let entries: Vec<(usize, usize, f64)> = m
        .triplet_iter()
        .filter(|&(i, j, _)| !symmetric || i >= j)
        .map(|(i, j, &v)| (i, j, v))
        .collect();
    let mut out = format!(
        "%%MatrixMarket matrix coordinate real {}\n{} {} {}\n",
        if symmetric { "symmetric" } else { "general" },
        m.nrows(),
        m.ncols(),
        entries.len()
    );
    for (i, j, v) in entries {
        out.push_str(&format!("{} {} {}\n", i + 1, j + 1, v));
    }
    out
}

pub fn write_matrix_market(path: &Path, m: &CsrMatrix<f64>, symmetric: bool) -> Result<(), IoError> {
    write_string(path, &matrix_market_string(m, symmetric))
}

/// Headerless numeric CSV, one matrix row per line.
pub fn parse_csv_matrix(text: &str, origin: &str) -> Result<DMatrix<f64>, IoError> {
    let bad = |message: String| IoError::Csv { path: origin.to_string(), message };
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (r, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let row = rec
            .iter()
            .enumerate()
            .map(|(c, s)| s.parse::<f64>().map_err(|_| bad(format!("row {}, column {}: not a number: {s:?}", r + 1, c + 1))))
            .collect::<Result<Vec<f64>, _>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(bad(format!("row {} has {} fields, expected {}", r + 1, row.len(), first.len())));
            }
        }
        rows.push(row);
    }
    let ncols = rows.first().map_or(0, |r| r.len());
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

pub fn read_csv_matrix(path: &Path) -> Result<DMatrix<f64>, IoError> {
    parse_csv_matrix(&read_to_string(path)?, &path.display().to_string())
}

pub fn csv_string(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for row in m.row_iter() {
        let fields: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn write_csv_matrix(path: &Path, m: &DMatrix<f64>) -> Result<(), IoError> {
    write_string(path, &csv_string(m))
}

pub fn write_csv_vector(path: &Path, v: &DVector<f64>) -> Result<(), IoError> {
    write_csv_matrix(path, &DMatrix::from_column_slice(v.len(), 1, v.as_slice()))
}

/// A single-column CSV (or a single row) as a vector.
pub fn read_csv_vector(path: &Path) -> Result<DVector<f64>, IoError> {
    let m = read_csv_matrix(path)?;
    if m.ncols() == 1 || m.nrows() == 1 {
        Ok(DVector::from_column_slice(m.as_slice()))
    } else {
        Err(IoError::Csv {
            path: path.display().to_string(),
            message: format!("expected a single column, got {}x{}", m.nrows(), m.ncols()),
        })
    }
}

/// `name.mtx` -> `name.coords.csv`.
pub fn coords_path(graph_path: &Path) -> PathBuf {
    graph_path.with_extension("coords.csv")
}

/// Weights from Matrix Market plus optional sibling coordinates.
pub fn read_graph(path: &Path) -> Result<Graph, IoError> {
    let w = read_matrix_market(path)?;
    let cpath = coords_path(path);
    let coords = if cpath.exists() { Some(read_csv_matrix(&cpath)?) } else { None };
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(Graph::builder(w).maybe_coords(coords).name(name).build()?)
}

/// Writes the weights (symmetric storage for undirected graphs) and coordinates if present.
pub fn write_graph(path: &Path, g: &Graph) -> Result<Vec<PathBuf>, IoError> {
    write_matrix_market(path, g.w(), !g.is_directed())?;
    let mut written = vec![path.to_path_buf()];
    if let Some(c) = g.coords() {
        let cpath = coords_path(path);
        write_csv_matrix(&cpath, c)?;
        written.push(cpath);
    }
    Ok(written)
}

/// Edge list CSV `i,j,w`.
pub fn edge_list_string(g: &Graph) -> String {
    g.edges().iter().map(|(i, j, w)| format!("{i},{j},{w}\n")).collect()
}

pub fn write_edge_list(path: &Path, g: &Graph) -> Result<(), IoError> {
    write_string(path, &edge_list_string(g))
}

/// Description of a stored pyramid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PyramidManifest {
    pub params: PyramidParams,
    /// Vertex count per level, finest first.
    pub sizes: Vec<usize>,
    /// Kept indices of level `l + 1` within level `l`.
    pub kept: Vec<Vec<usize>>,
    pub fallback: Vec<bool>,
}

impl PyramidManifest {
    pub fn of(mr: &Multiresolution) -> Self {
        PyramidManifest {
            params: mr.params,
            sizes: mr.sizes(),
            kept: mr.levels[1..].iter().map(|l| l.kept.clone()).collect(),
            fallback: mr.levels[1..].iter().map(|l| l.fallback).collect(),
        }
    }
}

fn error_file(l: usize) -> String {
    format!("level{l}_error.csv")
}

fn coarse_file(l: usize) -> String {
    format!("level{l}_coarse.csv")
}

/// `manifest.json` plus `level{l}_error.csv` (on level `l`) and `level{l}_coarse.csv`
/// (on level `l`, for `l >= 1`).
pub fn write_pyramid(dir: &Path, mr: &Multiresolution, pyr: &Pyramid) -> Result<Vec<PathBuf>, IoError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let manifest = PyramidManifest::of(mr);
    let mpath = dir.join("manifest.json");
    write_string(&mpath, &serde_json::to_string_pretty(&manifest).expect("manifest serializes"))?;
    let mut written = vec![mpath];
    for (l, (e, c)) in pyr.errors.iter().zip(&pyr.coarse).enumerate() {
        let (ep, cp) = (dir.join(error_file(l)), dir.join(coarse_file(l + 1)));
        write_csv_vector(&ep, e)?;
        write_csv_vector(&cp, c)?;
        written.push(ep);
        written.push(cp);
    }
    Ok(written)
}

pub fn read_pyramid(dir: &Path) -> Result<(PyramidManifest, Pyramid), IoError> {
    let mpath = dir.join("manifest.json");
    let manifest: PyramidManifest = serde_json::from_str(&read_to_string(&mpath)?)
        .map_err(|e| IoError::Json { path: mpath.display().to_string(), message: e.to_string() })?;
    let levels = manifest.kept.len();
    let mut errors = Vec::with_capacity(levels);
    let mut coarse = Vec::with_capacity(levels);
    for l in 0..levels {
        errors.push(read_csv_vector(&dir.join(error_file(l)))?);
        coarse.push(read_csv_vector(&dir.join(coarse_file(l + 1)))?);
    }
    Ok((manifest, Pyramid { coarse, errors }))
}

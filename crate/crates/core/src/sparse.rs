//! Small helpers over `nalgebra_sparse::CsrMatrix<f64>`.

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::{CooMatrix, CscMatrix, CsrMatrix};

/// Build a CSR matrix from triplets. Duplicate entries are summed.
pub fn from_triplets(
    nrows: usize,
    ncols: usize,
    triplets: impl IntoIterator<Item = (usize, usize, f64)>,
) -> CsrMatrix<f64> {
    let mut coo = CooMatrix::new(nrows, ncols);
    for (i, j, v) in triplets {
        coo.push(i, j, v);
    }
    CsrMatrix::from(&coo)
}

/// Rebuild a CSR matrix keeping only the entries for which `keep` returns true.
pub fn filter(m: &CsrMatrix<f64>, mut keep: impl FnMut(usize, usize, f64) -> bool) -> CsrMatrix<f64> {
    let triplets: Vec<_> = m
        .triplet_iter()
        .filter(|&(i, j, &v)| keep(i, j, v))
        .map(|(i, j, &v)| (i, j, v))
        .collect();
    from_triplets(m.nrows(), m.ncols(), triplets)
}

/// Entrywise map over the stored entries.
pub fn map_values(m: &CsrMatrix<f64>, mut f: impl FnMut(usize, usize, f64) -> f64) -> CsrMatrix<f64> {
    let triplets: Vec<_> = m.triplet_iter().map(|(i, j, &v)| (i, j, f(i, j, v))).collect();
    from_triplets(m.nrows(), m.ncols(), triplets)
}

pub fn identity(n: usize) -> CsrMatrix<f64> {
    CsrMatrix::identity(n)
}

pub fn diagonal(values: &[f64]) -> CsrMatrix<f64> {
    from_triplets(
        values.len(),
        values.len(),
        values.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, &v)| (i, i, v)),
    )
}

pub fn to_dense(m: &CsrMatrix<f64>) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(m.nrows(), m.ncols());
    for (i, j, &v) in m.triplet_iter() {
        d[(i, j)] += v;
    }
    d
}

/// Convert a dense matrix, dropping entries with `|v| <= drop_tol`. NaN is kept
/// so that weight validation can reject it.
pub fn from_dense(d: &DMatrix<f64>, drop_tol: f64) -> CsrMatrix<f64> {
    let mut triplets = Vec::new();
    for i in 0..d.nrows() {
        for j in 0..d.ncols() {
            let v = d[(i, j)];
            if !(v.abs() <= drop_tol) {
                triplets.push((i, j, v));
            }
        }
    }
    from_triplets(d.nrows(), d.ncols(), triplets)
}

pub fn row_sums(m: &CsrMatrix<f64>) -> DVector<f64> {
    DVector::from_iterator(m.nrows(), m.row_iter().map(|r| r.values().iter().sum()))
}

pub fn col_sums(m: &CsrMatrix<f64>) -> DVector<f64> {
    let mut s = DVector::zeros(m.ncols());
    for (_, j, &v) in m.triplet_iter() {
        s[j] += v;
    }
    s
}

/// `max |A - A^T|` over all entries.
pub fn max_asymmetry(m: &CsrMatrix<f64>) -> f64 {
    let t = m.transpose();
    let diff = m - &t;
    diff.values().iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// `diag(left) * M * diag(right)`.
pub fn scale(m: &CsrMatrix<f64>, left: &[f64], right: &[f64]) -> CsrMatrix<f64> {
    map_values(m, |i, j, v| left[i] * v * right[j])
}

/// Extract the submatrix `M[rows, cols]`. Index lists must be free of duplicates.
pub fn submatrix(m: &CsrMatrix<f64>, rows: &[usize], cols: &[usize]) -> CsrMatrix<f64> {
    let mut col_pos = vec![usize::MAX; m.ncols()];
    for (k, &c) in cols.iter().enumerate() {
        col_pos[c] = k;
    }
    let mut triplets = Vec::new();
    for (ri, &r) in rows.iter().enumerate() {
        let row = m.row(r);
        for (&c, &v) in row.col_indices().iter().zip(row.values()) {
            let k = col_pos[c];
            if k != usize::MAX {
                triplets.push((ri, k, v));
            }
        }
    }
    from_triplets(rows.len(), cols.len(), triplets)
}

pub fn to_csc(m: &CsrMatrix<f64>) -> CscMatrix<f64> {
    CscMatrix::from(m)
}

pub fn spmv(m: &CsrMatrix<f64>, x: &DVector<f64>) -> DVector<f64> {
    m * x
}

pub fn spmm(m: &CsrMatrix<f64>, x: &DMatrix<f64>) -> DMatrix<f64> {
    m * x
}

pub fn max_abs(m: &CsrMatrix<f64>) -> f64 {
    m.values().iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Vertex adjacency lists (out-neighbours) from the stored pattern.
pub fn neighbours(m: &CsrMatrix<f64>) -> Vec<Vec<usize>> {
    m.row_iter().map(|r| r.col_indices().to_vec()).collect()
}

/// Breadth-first reachability from `start` following stored entries.
pub fn reachable(adj: &[Vec<usize>], start: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    if adj.is_empty() {
        return seen;
    }
    let mut queue = std::collections::VecDeque::from([start]);
    seen[start] = true;
    while let Some(v) = queue.pop_front() {
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    seen
}

/// Connected-component labels of the undirected pattern `A + A^T`.
pub fn components(m: &CsrMatrix<f64>) -> Vec<usize> {
    let n = m.nrows();
    let mut adj = vec![Vec::new(); n];
    for (i, j, _) in m.triplet_iter() {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        label[s] = next;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if label[u] == usize::MAX {
                    label[u] = next;
                    stack.push(u);
                }
            }
        }
        next += 1;
    }
    label
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn submatrix_picks_entries() {
        let m = from_triplets(3, 3, [(0, 0, 1.0), (0, 2, 2.0), (2, 1, 3.0), (2, 2, 4.0)]);
        let s = submatrix(&m, &[0, 2], &[2, 1]);
        let d = to_dense(&s);
        assert_eq!(d, DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 4.0, 3.0]));
    }

    #[test]
    fn asymmetry_of_directed_arc() {
        let m = from_triplets(2, 2, [(0, 1, 2.5)]);
        assert_eq!(max_asymmetry(&m), 2.5);
    }

    #[test]
    fn components_counts_islands() {
        let m = from_triplets(4, 4, [(0, 1, 1.0), (2, 3, 1.0)]);
        let c = components(&m);
        assert_eq!(c, vec![0, 0, 1, 1]);
    }
}

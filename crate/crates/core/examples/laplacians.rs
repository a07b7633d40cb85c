//! The five Laplacians on an undirected and a directed graph.

use graphsig::graph::{self, laplacian, stationary_distribution, Graph, LaplacianKind};
use graphsig::sparse;
use nalgebra::DMatrix;

fn main() -> Result<(), graphsig::Error> {
    let g = graph::path(4)?;
    for kind in [LaplacianKind::Combinatorial, LaplacianKind::Normalized] {
        let l = sparse::to_dense(&laplacian(&g, kind)?);
        println!("{kind} Laplacian of path(4):{l:.3}");
    }

    // a directed cycle with one chord
    let mut w = DMatrix::zeros(4, 4);
    for i in 0..4 {
        w[(i, (i + 1) % 4)] = 1.0;
    }
    w[(0, 2)] = 0.5;
    let dg = Graph::builder(sparse::from_dense(&w, 0.0)).directed(true).build()?;
    let pi = stationary_distribution(&dg)?;
    println!("stationary distribution {:.4} (residual {:.1e})", pi.pi.transpose(), pi.residual());
    for kind in [LaplacianKind::DirectedCombinatorial, LaplacianKind::DegreeNormalized, LaplacianKind::DistributionNormalized] {
        let l = sparse::to_dense(&laplacian(&dg, kind)?);
        println!("{kind}: max asymmetry {:.2e}{l:.3}", (&l - l.transpose()).amax());
    }
    Ok(())
}

//! Nearest-neighbour graphs from a point cloud and a patch graph from a small image.

use graphsig::graph::{nn_graph, patch_graph, Image, NnStrategy, PatchGraphParams, SearchWindow, Sigma};
use nalgebra::DMatrix;

fn main() -> Result<(), graphsig::Error> {
    let pts = DMatrix::from_fn(200, 2, |i, c| {
        let t = i as f64 * 0.1;
        if c == 0 { t.cos() * (1.0 + 0.01 * i as f64) } else { t.sin() * (1.0 + 0.01 * i as f64) }
    });
    let knn = nn_graph(&pts, NnStrategy::Knn(8), Sigma::Auto)?;
    let radius = nn_graph(&pts, NnStrategy::Radius(0.15), Sigma::Fixed(0.1))?;
    println!("knn:    {} edges, connected {}", knn.ne(), knn.is_connected());
    println!("radius: {} edges, connected {}", radius.ne(), radius.is_connected());

    // two flat regions separated by a vertical edge
    let img = Image::from_fn(16, 16, |_, c| if c < 8 { 0.1 } else { 0.9 });
    let params = PatchGraphParams { patch_size: 3, window: SearchWindow::Local(3), k: 6, sigma: Sigma::Auto, coord_scale: 0.0 };
    let g = patch_graph(&img, &params)?;
    let crossing = g.edges().iter().filter(|&&(i, j, _)| (i % 16 < 7) != (j % 16 < 7) && i % 16 != 7 && j % 16 != 7).count();
    println!("patch graph: {} vertices, {} edges, {} edges across the boundary", g.n(), g.ne(), crossing);
    Ok(())
}

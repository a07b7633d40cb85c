//! Kron-reduction pyramid: level sizes, coarse approximation and exact reconstruction.

use graphsig::graph;
use graphsig::pyramid::{graph_multiresolution, pyramid_analysis, pyramid_synthesis, PyramidParams};
use nalgebra::DVector;

fn main() -> Result<(), graphsig::Error> {
    let g = graph::sensor(256, 6, 2)?;
    let mr = graph_multiresolution(&g, 4, PyramidParams::default())?;
    println!("level sizes {:?}", mr.sizes());

    let coords = g.coords().expect("coordinates");
    let f = DVector::from_fn(256, |i, _| (3.0 * coords[(i, 0)]).sin() * coords[(i, 1)]);
    let pyr = pyramid_analysis(&mr, &f)?;
    for (l, e) in pyr.errors.iter().enumerate() {
        println!("level {l}: prediction error norm {:.4}", e.norm());
    }

    let back = pyramid_synthesis(&mr, &pyr)?;
    println!("reconstruction error {:.1e}", (&back - &f).amax());

    let mut coarse_only = pyr.clone();
    coarse_only.errors.iter_mut().for_each(|e| e.fill(0.0));
    let approx = pyramid_synthesis(&mr, &coarse_only)?;
    println!("coarse-only approximation: relative error {:.3}", (&approx - &f).norm() / f.norm());
    Ok(())
}

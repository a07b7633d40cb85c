//! Graph Fourier transform of a smooth and a rough signal.

use graphsig::graph;
use graphsig::spectral::{gft, igft};
use nalgebra::DMatrix;

fn main() -> Result<(), graphsig::Error> {
    let g = graph::sensor(100, 6, 7)?;
    let s = g.compute_fourier_basis()?;
    println!("lmax {:.4} (Lanczos estimate {:.4}), coherence {:.4}", s.lmax, g.estimate_lmax(), s.mu);

    let coords = g.coords().expect("sensor graphs have coordinates");
    let smooth = DMatrix::from_fn(100, 1, |i, _| coords[(i, 0)] + coords[(i, 1)]);
    let rough = DMatrix::from_fn(100, 1, |i, _| if i % 2 == 0 { 1.0 } else { -1.0 });
    for (name, f) in [("smooth", smooth), ("rough", rough)] {
        let fhat = gft(&g, &f)?;
        let low: f64 = fhat.rows(0, 20).norm_squared();
        println!("{name:>6}: {:.1}% of the energy in the 20 lowest frequencies", 100.0 * low / fhat.norm_squared());
        let back = igft(&g, &fhat)?;
        println!("        round-trip error {:.1e}", (back - f).amax());
    }
    Ok(())
}

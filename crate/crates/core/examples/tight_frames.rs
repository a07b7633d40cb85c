//! Frame bounds of several filter banks and perfect reconstruction with a tight frame.

use graphsig::filters::{design, filter_analysis, filter_synthesis, warped_translates, FilterDesign, FilterMethod};
use graphsig::graph::{self, SbmParams};
use nalgebra::DMatrix;

fn main() -> Result<(), graphsig::Error> {
    let g = graph::sbm(&SbmParams { n: 80, block_sizes: vec![40, 40], p_in: 0.3, p_out: 0.02 }, 3)?;
    let s = g.compute_fourier_basis()?;
    let lmax = s.lmax;
    let banks = [
        ("itersine", design(&FilterDesign::Itersine { m: 6 }, lmax)?),
        ("regular hp/lp", design(&FilterDesign::RegularHpLp { d: 3 }, lmax)?),
        ("mexican hat", design(&FilterDesign::MexicanHat { scales: 4 }, lmax)?),
        ("gabor", design(&FilterDesign::Gabor { m: 6 }, lmax)?),
        ("warped", warped_translates(&g, 6)?),
    ];
    for (name, fb) in &banks {
        let (a, b) = fb.frame_bounds_on(&s.e);
        println!("{name:<14} {} kernels, A = {a:.4}, B = {b:.4}", fb.len());
    }

    let fb = &banks[0].1;
    let f = DMatrix::from_fn(80, 1, |i, _| (i as f64 / 7.0).sin());
    let c = filter_analysis(&g, fb, &f, FilterMethod::Exact)?;
    let back = filter_synthesis(&g, fb, &c, FilterMethod::Exact)?;
    println!("itersine: |c| / |f| = {:.12}, reconstruction error {:.1e}", c.norm() / f.norm(), (back - f).amax());
    Ok(())
}

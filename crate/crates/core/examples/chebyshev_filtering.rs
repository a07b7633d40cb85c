//! Heat filtering through the exact Fourier path and Chebyshev expansions of growing order.

use graphsig::filters::{design, filter_analysis, FilterDesign, FilterMethod};
use graphsig::graph;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

fn main() -> Result<(), graphsig::Error> {
    let g = graph::sensor(300, 6, 1)?;
    g.compute_fourier_basis()?;
    let fb = design(&FilterDesign::Heat { tau: 5.0 }, g.require_lmax()?)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    let f = DMatrix::from_fn(300, 1, |_, _| StandardNormal.sample(&mut rng));

    let exact = filter_analysis(&g, &fb, &f, FilterMethod::Exact)?;
    for order in [5, 10, 20, 40] {
        let approx = filter_analysis(&g, &fb, &f, FilterMethod::Chebyshev(order))?;
        println!("K = {order:>2}: relative error {:.2e}", (&approx - &exact).norm() / exact.norm());
    }
    Ok(())
}

//! Denoises a piecewise-smooth signal with each graph regularizer.

use graphsig::filters::{design, FilterDesign, FilterMethod};
use graphsig::graph;
use graphsig::optimize::{prox_tv, solve_bpdn, tik_denoise, wavelet_denoise, BpdnProblem, SolveOptions};
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};

fn snr(clean: &DVector<f64>, x: &DVector<f64>) -> f64 {
    10.0 * (clean.norm_squared() / (x - clean).norm_squared()).log10()
}

fn main() -> Result<(), graphsig::Error> {
    let g = graph::sensor(200, 6, 11)?;
    g.compute_fourier_basis()?;
    let coords = g.coords().expect("coordinates").clone();
    let clean = DVector::from_fn(200, |i, _| if coords[(i, 0)] < 0.5 { 1.0 } else { -0.5 } + 0.5 * coords[(i, 1)]);
    let noise = Normal::new(0.0, 0.3).expect("valid sigma");
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let y = clean.map(|v| v + noise.sample(&mut rng));
    println!("noisy input      {:6.2} dB", snr(&clean, &y));

    let (x, r) = prox_tv(&g, &y, 0.3, SolveOptions::default())?;
    println!("total variation  {:6.2} dB ({} iterations)", snr(&clean, &x), r.iterations);
    let (x, _) = tik_denoise(&g, &y, 1.0)?;
    println!("tikhonov         {:6.2} dB", snr(&clean, &x));

    let fb = design(&FilterDesign::Itersine { m: 6 }, g.require_lmax()?)?;
    let (x, _) = wavelet_denoise(&g, &fb, &y, 0.15, FilterMethod::Exact)?;
    println!("wavelet          {:6.2} dB", snr(&clean, &x));

    let mut problem = BpdnProblem::new(0.2);
    problem.opts = SolveOptions { max_iter: 3000, tol: 1e-5 };
    // an unconverged run still carries its best iterate
    let (c, r) = match solve_bpdn(&g, &fb, &y, &problem) {
        Ok(out) => out,
        Err(e) => e.best().map(|(c, r)| (c.clone(), r.clone())).ok_or(e)?,
    };
    let x = graphsig::filters::filter_synthesis(&g, &fb, &DMatrix::from_column_slice(200, fb.len(), c.as_slice()), FilterMethod::Exact)?;
    let nnz = c.iter().filter(|v| **v != 0.0).count();
    println!("bpdn             {:6.2} dB ({nnz} of {} coefficients, {} iterations)", snr(&clean, &x.column(0).into_owned()), c.len(), r.iterations);
    Ok(())
}

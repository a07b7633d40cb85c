//! Builds a few graphs and prints their basic statistics.

use graphsig::graph::{self, CommunityParams, Graph, SbmParams};
use nalgebra::DMatrix;

fn describe(label: &str, g: &Graph) {
    let d = g.degrees();
    println!(
        "{label:<14} n={:<4} edges={:<5} connected={:<5} degree [{:.2}, {:.2}]",
        g.n(),
        g.ne(),
        g.is_connected(),
        d.min(),
        d.max()
    );
}

fn main() -> Result<(), graphsig::Error> {
    describe("ring", &graph::ring(32)?);
    describe("path", &graph::path(32)?);
    describe("comet", &graph::comet(32, 8)?);
    describe("grid 6x8", &graph::grid2d(6, 8)?);
    describe("erdos-renyi", &graph::erdos_renyi(100, 0.05, 1)?);
    describe("sbm", &graph::sbm(&SbmParams { n: 60, block_sizes: vec![20, 20, 20], p_in: 0.5, p_out: 0.02 }, 2)?);
    describe("community", &graph::community(&CommunityParams::new(120), 3)?);
    describe("sensor", &graph::sensor(100, 6, 4)?);
    describe("swiss roll", &graph::swiss_roll(200, 0.0, 5)?);
    describe("two moons", &graph::two_moons(150, 6)?);

    // any nonnegative weight matrix works; an asymmetric one gives a directed graph
    let w = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 3.0, 0.0, 2.0, 0.0, 2.0, 0.0]);
    let g = Graph::from_dense(&w)?;
    println!("from dense: directed={} edges={:?}", g.is_directed(), g.edges());
    Ok(())
}

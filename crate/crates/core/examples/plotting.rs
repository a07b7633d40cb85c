//! Writes an SVG of a graph signal, an SVG of a filter bank and a DOT file into a directory.

use std::path::PathBuf;

use graphsig::filters::{design, FilterDesign};
use graphsig::graph;
use graphsig::io;
use graphsig::plot::{export_filter_svg, export_graph_dot, export_graph_svg, PlotStyle};

fn main() -> Result<(), graphsig::Error> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "plots".into()));
    let g = graph::sensor(120, 6, 4)?;
    let s = g.compute_fourier_basis()?;
    let u = s.u.column(3).into_owned();
    let style = PlotStyle::for_graph(&g);

    let outputs = [
        ("sensor_u3.svg", export_graph_svg(&g, Some(&u), &style)?),
        ("mexican_hat.svg", export_filter_svg(&design(&FilterDesign::MexicanHat { scales: 4 }, s.lmax)?, s.lmax, 400, &style)?),
        ("sensor.dot", export_graph_dot(&g)),
    ];
    for (name, text) in outputs {
        let path = dir.join(name);
        io::write_string(&path, &text)?;
        println!("wrote {} ({} bytes)", path.display(), text.len());
    }
    Ok(())
}

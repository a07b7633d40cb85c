//! Static SVG and Graphviz DOT output for graphs, vertex signals and filter banks.
//!
//! Output is deterministic: identical inputs produce byte-identical documents.
//! Three-dimensional coordinates are projected onto their first two axes.

mod colormap;
mod dot;
mod svg;

use thiserror::Error;

pub use colormap::Colormap;
pub use dot::export_graph_dot;
pub use svg::{export_filter_svg, export_graph_svg};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlotError {
    #[error("graph has no vertex coordinates")]
    MissingCoordinates,
    #[error("signal has {got} values for {expected} vertices")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("bad plot style: {0}")]
    BadStyle(String),
    #[error("non-finite value in plotted data")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotStyle {
    pub width: f64,
    pub height: f64,
    pub vertex_radius: f64,
    pub edge_width: f64,
    pub colormap: Colormap,
    /// Fixed `(min, max)` for the color scale; `None` uses the signal range.
    pub signal_range: Option<(f64, f64)>,
    pub show_edges: bool,
}

impl Default for PlotStyle {
    fn default() -> Self {
        PlotStyle {
            width: 640.0,
            height: 480.0,
            vertex_radius: 5.0,
            edge_width: 1.0,
            colormap: Colormap::viridis(),
            signal_range: None,
            show_edges: true,
        }
    }
}

impl PlotStyle {
    /// Style taking vertex size and edge width from the graph's plotting parameters.
    pub fn for_graph(g: &crate::graph::Graph) -> Self {
        PlotStyle { vertex_radius: g.plotting.vertex_size, edge_width: g.plotting.edge_width, ..Default::default() }
    }

    fn check(&self) -> Result<(), PlotError> {
        let ok = [self.width, self.height, self.vertex_radius, self.edge_width].iter().all(|v| *v > 0.0 && v.is_finite());
        if !ok {
            return Err(PlotError::BadStyle("dimensions must be positive and finite".into()));
        }
        if let Some((lo, hi)) = self.signal_range {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(PlotError::BadStyle(format!("invalid signal range ({lo}, {hi})")));
            }
        }
        self.colormap.check()
    }
}

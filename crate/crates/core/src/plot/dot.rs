use std::fmt::Write;

use crate::graph::Graph;

/// Graphviz DOT text: `graph` with `--` edges for undirected graphs, `digraph`
/// with `->` arcs otherwise. Vertices without edges are declared explicitly.
pub fn export_graph_dot(g: &Graph) -> String {
    let (kind, arrow) = if g.is_directed() { ("digraph", "->") } else { ("graph", "--") };
    let edges = g.edges();
    let mut touched = vec![false; g.n()];
    for &(i, j, _) in &edges {
        touched[i] = true;
        touched[j] = true;
    }
    let mut out = format!("{kind} {{\n");
    for (v, _) in touched.iter().enumerate().filter(|(_, t)| !**t) {
        let _ = writeln!(out, "  {v};");
    }
    for (i, j, w) in edges {
        let _ = writeln!(out, "  {i} {arrow} {j} [weight={w}];");
    }
    out.push_str("}\n");
    out
}

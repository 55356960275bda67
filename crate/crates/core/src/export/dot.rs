use std::fmt::Write as _;

use super::{AnnotatedGraph, COMMUNITY_PALETTE};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Graphviz source. Node width is `0.3 * sqrt(frequency)` inches, edge pen
/// width `sqrt(weight)`, both to two decimals; nodes are filled by
/// community when communities are present.
pub fn export_dot(g: &AnnotatedGraph) -> Vec<u8> {
    let mut out = String::from("graph storychart {\n");
    out.push_str("  graph [overlap=false, splines=true];\n");
    out.push_str("  node [shape=circle, style=filled, fixedsize=shape, fillcolor=\"#d9d9d9\", fontname=\"Helvetica\"];\n");
    for node in g.graph.nodes() {
        let width = 0.3 * (node.weight as f64).sqrt();
        let _ = write!(out, "  n{} [label={}, width=\"{width:.2}\"", node.id, quote(&node.label));
        if let Some(c) = &g.communities {
            let community = c.membership[node.id];
            let _ = write!(
                out,
                ", fillcolor=\"{}\", community={community}",
                COMMUNITY_PALETTE[community % COMMUNITY_PALETTE.len()]
            );
        }
        if let Some(c) = &g.centrality {
            let _ = write!(out, ", betweenness=\"{}\"", c.scores[node.id]);
        }
        out.push_str("];\n");
    }
    for (u, v, w) in g.graph.edges() {
        let pen = (w as f64).sqrt();
        let _ = writeln!(out, "  n{u} -- n{v} [weight={w}, penwidth=\"{pen:.2}\"];");
    }
    out.push_str("}\n");
    out.into_bytes()
}

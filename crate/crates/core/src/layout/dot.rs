use std::fmt::Write as _;

use crate::layout::LayoutGraph;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' | '\r' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Undirected DOT document. Positions, when set, are pinned (`pos="x,y!"`)
/// so `neato -n` reproduces the computed layout.
pub fn export_dot(graph: &LayoutGraph) -> String {
    let mut out = String::from("graph relations {\n");
    if !graph.nodes.is_empty() {
        out.push_str("  node [shape=ellipse];\n");
    }
    for n in &graph.nodes {
        write!(out, "  {} [label={}", quote(&n.id.to_string()), quote(&n.label)).unwrap();
        if let Some([x, y]) = n.position {
            write!(out, ", pos=\"{x:.6},{y:.6}!\"").unwrap();
        }
        out.push_str("];\n");
    }
    for e in &graph.edges {
        writeln!(
            out,
            "  {} -- {} [weight={:.6}, co_count={}];",
            quote(&e.a.to_string()),
            quote(&e.b.to_string()),
            e.weight,
            e.co_count
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// `entity_id<TAB>x<TAB>y` per positioned node.
pub fn export_coords(graph: &LayoutGraph) -> String {
    let mut out = String::new();
    for n in &graph.nodes {
        if let Some([x, y]) = n.position {
            writeln!(out, "{}\t{x:.9}\t{y:.9}", n.id).unwrap();
        }
    }
    out
}

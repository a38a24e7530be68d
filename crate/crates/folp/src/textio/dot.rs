//! Graphviz export of tableau states and dependency graphs.

use std::fmt::Write;

use crate::depgraph::DepGraph;
use crate::engine::CompletionStructure;

fn esc(s: &str) -> String {
    s.replace('"', "\\\"")
}

/// Renders the structure: node labels carry the signed contents, tree
/// arcs are solid with the arc content, extra arcs dashed, and blocking
/// pairs appear as dotted annotated edges.
pub fn to_dot(cs: &CompletionStructure) -> String {
    let mut out = String::from("digraph completion {\n  rankdir=TB;\n");
    for n in cs.ef.nodes() {
        let content = cs.node_content(n);
        let label: Vec<String> = content.members().iter().map(|s| s.to_string()).collect();
        writeln!(
            out,
            "  \"{}\" [label=\"{}\\n{{{}}}\"];",
            esc(&n.to_string()),
            esc(&n.to_string()),
            esc(&label.join(", "))
        )
        .unwrap();
    }
    for (x, y) in cs.ef.arcs() {
        let content = cs.arc_content(&x, &y);
        let label: Vec<String> = content.members().iter().map(|s| s.to_string()).collect();
        let style = if cs.ef.is_tree_arc(&x, &y) { "solid" } else { "dashed" };
        writeln!(
            out,
            "  \"{}\" -> \"{}\" [style={style}, label=\"{{{}}}\"];",
            esc(&x.to_string()),
            esc(&y.to_string()),
            esc(&label.join(", "))
        )
        .unwrap();
    }
    for (blocking, blocked) in &cs.bl {
        writeln!(
            out,
            "  \"{}\" -> \"{}\" [style=dotted, color=blue, label=\"blocks\"];",
            esc(&blocking.to_string()),
            esc(&blocked.to_string())
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn depgraph_to_dot(g: &DepGraph) -> String {
    let mut out = String::from("digraph dependencies {\n");
    for v in g.vertices() {
        writeln!(out, "  \"{}\";", esc(&format!("{v:?}"))).unwrap();
    }
    for (a, b) in g.arcs() {
        writeln!(
            out,
            "  \"{}\" -> \"{}\";",
            esc(&format!("{a:?}")),
            esc(&format!("{b:?}"))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

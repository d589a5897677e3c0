//! Graphviz renderings of derivation DAGs, sections and chapters.

use std::fmt::Write as _;

use super::{ChapterDecomposition, CrossEdges, DerivationDag, KnowledgeSection};
use crate::information::escape;

const PALETTE: [&str; 8] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"];

fn write_nodes(out: &mut String, prefix: &str, dag: &DerivationDag, sections: &[KnowledgeSection], indent: &str) {
    let mut placed = vec![false; dag.len()];
    for (k, s) in sections.iter().enumerate() {
        let _ = writeln!(out, "{indent}subgraph cluster_{prefix}{k} {{");
        let _ = writeln!(out, "{indent}  color=\"{}\"; label=\"section {}\";", PALETTE[k % PALETTE.len()], k + 1);
        for id in &s.members {
            if let Some(i) = dag.index_of(id) {
                placed[i] = true;
                let _ = writeln!(out, "{indent}  {prefix}{i} [label=\"{}\"];", escape(id));
            }
        }
        let _ = writeln!(out, "{indent}}}");
    }
    for (i, id) in dag.ids().iter().enumerate() {
        if !placed[i] {
            let _ = writeln!(out, "{indent}{prefix}{i} [label=\"{}\"];", escape(id));
        }
    }
    for (i, j) in dag.reduction_edges() {
        let _ = writeln!(out, "{indent}{prefix}{i} -> {prefix}{j};");
    }
}

/// The transitive reduction of `dag`, with each section drawn as a cluster.
pub fn dag_dot(name: &str, dag: &DerivationDag, sections: &[KnowledgeSection]) -> String {
    let mut out = format!("digraph \"{}\" {{\n  rankdir=LR;\n  node [shape=box];\n", escape(name));
    write_nodes(&mut out, "n", dag, sections, "  ");
    out.push_str("}\n");
    out
}

/// Both spaces side by side with their sections, cross edges dashed, and
/// chapters listed in the graph label.
pub fn chapters_dot(k_t: &DerivationDag, k_p: &DerivationDag, cross: &CrossEdges, d: &ChapterDecomposition) -> String {
    let mut out = String::from("digraph knowledge {\n  rankdir=LR;\n  compound=true;\n  node [shape=box];\n");
    let _ = writeln!(out, "  subgraph cluster_T {{\n    label=\"K_T\";");
    write_nodes(&mut out, "t", k_t, &d.sections_t, "    ");
    out.push_str("  }\n");
    let _ = writeln!(out, "  subgraph cluster_P {{\n    label=\"K_P\";\n    node [shape=ellipse];");
    write_nodes(&mut out, "p", k_p, &d.sections_p, "    ");
    out.push_str("  }\n");
    let node = |id: &str| match (k_t.index_of(id), k_p.index_of(id)) {
        (Some(i), _) => format!("t{i}"),
        (_, Some(i)) => format!("p{i}"),
        _ => unreachable!("cross edges join the two spaces"),
    };
    for (a, b) in cross {
        let _ = writeln!(out, "  {} -> {} [style=dashed, color=gray];", node(a), node(b));
    }
    let lines: Vec<String> = d
        .chapters
        .iter()
        .enumerate()
        .map(|(k, c)| escape(&format!("chapter {}: [{}] x [{}]", k + 1, c.k_t.members.join(", "), c.k_p.members.join(", "))))
        .collect();
    let _ = writeln!(out, "  label=\"{}\";", lines.join("\\l"));
    out.push_str("}\n");
    out
}

//! Graphviz DOT emission for the upper accessibility graph. Output is
//! deterministic: states in declaration order, edges sorted by endpoint
//! indices, maximal classes rendered as clusters with the top class flagged.

use imc_core::{AccessibilityGraph, ClassDecomposition};

use crate::report::fmt_state_set;

pub fn render_dot(graph: &AccessibilityGraph, decomposition: &ClassDecomposition) -> String {
    let space = graph.space();
    let n = graph.len();
    let mut out = String::from("digraph model {\n  rankdir=LR;\n");

    let mut clustered = vec![false; n];
    for (cluster_id, &class_id) in decomposition.maximal().iter().enumerate() {
        let class = &decomposition.classes()[class_id];
        let labels: Vec<String> = class.iter().map(|&x| space.label(x).to_string()).collect();
        let is_top = decomposition.top_class() == Some(class.as_slice());
        let kind = if is_top { "top class" } else { "maximal class" };
        out.push_str(&format!("  subgraph cluster_{cluster_id} {{\n"));
        out.push_str(&format!("    label=\"{} {}\";\n", kind, fmt_state_set(&labels)));
        for &x in class {
            clustered[x] = true;
            out.push_str(&format!("    \"{}\";\n", space.label(x)));
        }
        out.push_str("  }\n");
    }
    for (x, in_cluster) in clustered.iter().enumerate() {
        if !in_cluster {
            out.push_str(&format!("  \"{}\";\n", space.label(x)));
        }
    }
    for from in 0..n {
        for to in 0..n {
            if graph.edge(from, to) {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\";\n",
                    space.label(from),
                    space.label(to)
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Plain-text adjacency summary used when DOT output is not requested.
pub fn render_summary(graph: &AccessibilityGraph, decomposition: &ClassDecomposition) -> String {
    let space = graph.space();
    let mut out = String::new();
    out.push_str("edges:\n");
    for from in 0..graph.len() {
        let targets: Vec<&str> = (0..graph.len())
            .filter(|&to| graph.edge(from, to))
            .map(|to| space.label(to))
            .collect();
        out.push_str(&format!("  {} -> {}\n", space.label(from), targets.join(", ")));
    }
    out.push_str("maximal classes:");
    for class in decomposition.maximal_classes() {
        let labels: Vec<String> = class.iter().map(|&x| space.label(x).to_string()).collect();
        out.push_str(&format!(" {}", fmt_state_set(&labels)));
    }
    out.push('\n');
    out
}

use std::fmt::{Debug, Write};

use super::DecisionDiagram;
use crate::value::{Value, INFINITY, NEG_INFINITY};

fn fmt_value(v: Value) -> String {
    match v {
        INFINITY => "+inf".to_string(),
        NEG_INFINITY => "-inf".to_string(),
        v => v.to_string(),
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders the diagram in Graphviz DOT. Relaxed nodes are dashed, cutset nodes
/// are bold and pruned nodes are grey.
pub fn to_dot<S: Clone + Eq + std::hash::Hash + Ord + Debug>(dd: &DecisionDiagram<S>) -> String {
    let mut out = String::from("digraph dd {\n  rankdir=TB;\n  node [shape=box];\n");
    for (id, node) in dd.nodes() {
        let mut style = Vec::new();
        if node.is_relaxed {
            style.push("dashed");
        }
        if node.flags.cutset {
            style.push("bold");
        }
        if node.is_pruned() {
            style.push("filled");
        }
        let label = format!(
            "{:?}\\nd={} v={} θ={}",
            node.state,
            node.depth,
            fmt_value(node.value_top),
            fmt_value(node.theta)
        );
        let _ = write!(out, "  n{id} [label=\"{}\"", escape(&label).replace("\\\\n", "\\n"));
        if !style.is_empty() {
            let _ = write!(out, ", style=\"{}\"", style.join(","));
        }
        if node.is_pruned() {
            out.push_str(", fillcolor=lightgrey");
        }
        out.push_str("];\n");
        for arc in &node.inbound {
            let _ = writeln!(
                out,
                "  n{} -> n{id} [label=\"x{}={} ({})\"{}];",
                arc.parent,
                arc.decision.variable,
                arc.decision.value,
                fmt_value(arc.value),
                if node.is_relaxed { ", style=dashed" } else { "" }
            );
        }
    }
    out.push_str("}\n");
    out
}

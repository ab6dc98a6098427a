//! Graphviz DOT export for graphs and scenarios.

use std::fmt::Write;

use crate::graphs::Graph;
use crate::scenario::Scenario;

/// Undirected graph with edge labels equal to edge indices.
pub fn graph_to_dot(g: &Graph) -> String {
    let mut out = String::from("graph {\n");
    for v in 0..g.num_vertices {
        writeln!(out, "  v{v};").unwrap();
    }
    for (idx, &(u, v)) in g.edges.iter().enumerate() {
        writeln!(out, "  v{u} -- v{v} [label=\"{idx}\"];").unwrap();
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HyperedgeStyle {
    /// Each hyperedge drawn as a clique over its nodes, edges labelled by
    /// the context index.
    Clique,
    /// Each hyperedge drawn as an extra box vertex connected to its nodes.
    Star,
}

/// Scenario export; neither rendering is canonical, pick per taste.
pub fn scenario_to_dot(h: &Scenario, style: HyperedgeStyle) -> String {
    let mut out = String::from("graph {\n");
    for (w, label) in h.node_labels.iter().enumerate() {
        writeln!(out, "  n{w} [label=\"{label}\"];").unwrap();
    }
    match style {
        HyperedgeStyle::Clique => {
            for (e, f) in h.hyperedges.iter().enumerate() {
                for (i, &u) in f.iter().enumerate() {
                    for &v in &f[i + 1..] {
                        writeln!(out, "  n{u} -- n{v} [label=\"{e}\"];").unwrap();
                    }
                }
            }
        }
        HyperedgeStyle::Star => {
            for (e, f) in h.hyperedges.iter().enumerate() {
                writeln!(out, "  c{e} [shape=box, label=\"f{e}\"];").unwrap();
                for &w in f {
                    writeln!(out, "  c{e} -- n{w};").unwrap();
                }
            }
        }
    }
    out.push_str("}\n");
    out
}

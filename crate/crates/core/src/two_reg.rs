//! The 2Reg mapping from graphs to contextuality scenarios: nodes are
//! intersecting edge pairs, hyperedge `f_i` collects the pairs containing
//! edge `e_i`, and every node lands in exactly two contexts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{edges_intersect, Graph};
use crate::scenario::Scenario;

/// A scenario produced by the 2Reg mapping, carrying its provenance:
/// which pair of source edges each node came from, and which source edge
/// each hyperedge corresponds to.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwoRegScenario {
    pub scenario: Scenario,
    pub source_graph: Graph,
    /// Node index -> unordered pair of source edge indices (i < j).
    pub node_origin: Vec<(usize, usize)>,
    /// Hyperedge index -> source edge index (the identity by construction,
    /// kept for traceability in emitted files).
    pub edge_origin: Vec<usize>,
}

/// Applies 2Reg. Fails when the graph has no edge, or when some edge
/// intersects no other edge (its hyperedge would be empty, so the result
/// would not be a contextuality scenario). Degree-0 vertices are ignored.
pub fn two_reg(g: &Graph) -> Result<TwoRegScenario> {
    if g.edges.is_empty() {
        return Err(Error::invalid("2Reg needs a graph with at least one edge"));
    }
    let m = g.edges.len();
    let mut node_origin = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            if edges_intersect(g.edges[i], g.edges[j]) {
                node_origin.push((i, j));
            }
        }
    }
    let mut hyperedges = vec![Vec::new(); m];
    for (w, &(i, j)) in node_origin.iter().enumerate() {
        hyperedges[i].push(w);
        hyperedges[j].push(w);
    }
    if let Some(i) = hyperedges.iter().position(|f| f.is_empty()) {
        return Err(Error::EmptyHyperedge(format!(
            "edge {i} is disjoint from every other edge"
        )));
    }
    let labels = node_origin.iter().map(|&(i, j)| format!("({i},{j})")).collect();
    let scenario = Scenario::new(node_origin.len(), Some(labels), hyperedges)?;
    debug_assert!(scenario.is_regular(2));
    Ok(TwoRegScenario {
        scenario,
        source_graph: g.clone(),
        node_origin,
        edge_origin: (0..m).collect(),
    })
}

impl TwoRegScenario {
    /// The node corresponding to the intersecting pair of source edges
    /// `(i, j)`, if present.
    pub fn node_of_pair(&self, i: usize, j: usize) -> Option<usize> {
        let key = (i.min(j), i.max(j));
        self.node_origin.iter().position(|&p| p == key)
    }
}

/// Recognizes n-hypercycle scenarios up to isomorphism: n nodes and n
/// hyperedges of size 2 forming one cycle, n >= 3.
pub fn is_hypercycle_scenario(h: &Scenario) -> Option<usize> {
    let n = h.num_nodes;
    if n < 3 || h.num_contexts() != n {
        return None;
    }
    if !h.hyperedges.iter().all(|f| f.len() == 2) {
        return None;
    }
    if !h.is_regular(2) {
        return None;
    }
    // Duplicate hyperedges would form a 2-cycle; a single n-cycle visits
    // every node once.
    let mut visited = vec![false; n];
    let mut edge_used = vec![false; n];
    let mut current = 0usize;
    let mut steps = 0usize;
    loop {
        visited[current] = true;
        steps += 1;
        let next = h.hyperedges.iter().enumerate().find(|(e, f)| {
            !edge_used[*e] && f.contains(&current)
        });
        let Some((e, f)) = next else {
            break;
        };
        edge_used[e] = true;
        current = if f[0] == current { f[1] } else { f[0] };
        if f[0] == f[1] {
            return None;
        }
        if visited[current] && current != 0 {
            return None;
        }
        if current == 0 {
            break;
        }
    }
    if steps == n && visited.iter().all(|&v| v) && edge_used.iter().filter(|&&u| u).count() == n {
        Some(n)
    } else {
        None
    }
}

/// The matching scenario of the line graph of `g`: nodes are the edges of
/// `L(g)` and each hyperedge collects the `L(g)`-edges incident to one
/// `L(g)`-vertex. Structurally identical to 2Reg applied to `g`.
pub fn matching_scenario(g: &Graph) -> Result<Scenario> {
    if g.edges.is_empty() {
        return Err(Error::invalid(
            "matching scenario needs a graph with at least one edge",
        ));
    }
    let lg = g.line_graph();
    let mut hyperedges = vec![Vec::new(); lg.num_vertices];
    for (w, &(u, v)) in lg.edges.iter().enumerate() {
        hyperedges[u].push(w);
        hyperedges[v].push(w);
    }
    if let Some(i) = hyperedges.iter().position(|f| f.is_empty()) {
        return Err(Error::EmptyHyperedge(format!(
            "edge {i} is disjoint from every other edge"
        )));
    }
    let labels = lg.edges.iter().map(|&(u, v)| format!("({u},{v})")).collect();
    Scenario::new(lg.edges.len(), Some(labels), hyperedges)
}

/// Searches for a hypergraph isomorphism from `a` to `b`: a node bijection
/// under which the hyperedge multisets coincide. Backtracking over nodes
/// ordered by signature, with degree/edge-size pre-filters; returns the
/// mapping `a -> b` or None.
pub fn scenarios_isomorphic(a: &Scenario, b: &Scenario) -> Option<Vec<usize>> {
    if a.num_nodes != b.num_nodes || a.num_contexts() != b.num_contexts() {
        return None;
    }
    let mut sizes_a: Vec<usize> = a.hyperedges.iter().map(|f| f.len()).collect();
    let mut sizes_b: Vec<usize> = b.hyperedges.iter().map(|f| f.len()).collect();
    sizes_a.sort_unstable();
    sizes_b.sort_unstable();
    if sizes_a != sizes_b {
        return None;
    }
    let sig_a = signatures(a);
    let sig_b = signatures(b);
    {
        let mut sa = sig_a.clone();
        let mut sb = sig_b.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return None;
        }
    }
    let mut mapping = vec![usize::MAX; a.num_nodes];
    let mut used = vec![false; b.num_nodes];
    // Most-constrained first: rarest signatures early.
    let mut order: Vec<usize> = (0..a.num_nodes).collect();
    let mut counts: BTreeMap<&Vec<usize>, usize> = BTreeMap::new();
    for s in &sig_a {
        *counts.entry(s).or_insert(0) += 1;
    }
    order.sort_by_key(|&w| (counts[&sig_a[w]], w));
    if extend_iso(a, b, &sig_a, &sig_b, &order, 0, &mut mapping, &mut used) {
        Some(mapping)
    } else {
        None
    }
}

/// Sorted multiset of containing-hyperedge sizes per node.
fn signatures(h: &Scenario) -> Vec<Vec<usize>> {
    let mut sig = vec![Vec::new(); h.num_nodes];
    for f in &h.hyperedges {
        for &w in f {
            sig[w].push(f.len());
        }
    }
    for s in &mut sig {
        s.sort_unstable();
    }
    sig
}

#[allow(clippy::too_many_arguments)]
fn extend_iso(
    a: &Scenario,
    b: &Scenario,
    sig_a: &[Vec<usize>],
    sig_b: &[Vec<usize>],
    order: &[usize],
    depth: usize,
    mapping: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if depth == order.len() {
        return hyperedge_multisets_match(a, b, mapping);
    }
    let w = order[depth];
    for cand in 0..b.num_nodes {
        if used[cand] || sig_a[w] != sig_b[cand] {
            continue;
        }
        mapping[w] = cand;
        used[cand] = true;
        if partial_consistent(a, b, mapping) && extend_iso(a, b, sig_a, sig_b, order, depth + 1, mapping, used)
        {
            return true;
        }
        mapping[w] = usize::MAX;
        used[cand] = false;
    }
    false
}

/// Every fully-mapped hyperedge of `a` must have a matching hyperedge in
/// `b`; partially mapped ones must fit inside some hyperedge of `b`.
fn partial_consistent(a: &Scenario, b: &Scenario, mapping: &[usize]) -> bool {
    for f in &a.hyperedges {
        let mapped: Vec<usize> = f
            .iter()
            .filter(|&&w| mapping[w] != usize::MAX)
            .map(|&w| mapping[w])
            .collect();
        if mapped.is_empty() {
            continue;
        }
        let fits = b
            .hyperedges
            .iter()
            .any(|g| g.len() == f.len() && mapped.iter().all(|w| g.contains(w)));
        if !fits {
            return false;
        }
    }
    true
}

fn hyperedge_multisets_match(a: &Scenario, b: &Scenario, mapping: &[usize]) -> bool {
    let mut image: Vec<Vec<usize>> = a
        .hyperedges
        .iter()
        .map(|f| {
            let mut g: Vec<usize> = f.iter().map(|&w| mapping[w]).collect();
            g.sort_unstable();
            g
        })
        .collect();
    let mut target = b.hyperedges.clone();
    image.sort();
    target.sort();
    image == target
}

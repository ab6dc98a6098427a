//! Undirected simple graphs, the standard generators feeding the 2Reg
//! mapping, and the edge-cover/matching combinatorics behind the
//! irreducible-MISC characterization for complete bipartite graphs.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected simple graph. Edges are stored as `(u, v)` with `u < v`,
/// without duplicates; the edge *index* (position in `edges`) is the
/// canonical name used everywhere else in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph after normalizing and validating the edge list.
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(edges.len());
        let mut seen = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) outside vertex range 0..{num_vertices}"
                )));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::invalid(format!("duplicate edge ({}, {})", e.0, e.1)));
            }
            normalized.push(e);
        }
        Ok(Graph {
            num_vertices,
            edges: normalized,
        })
    }

    /// Complete bipartite graph `K_{m,n}`; the m-part occupies vertices
    /// `0..m` and the n-part `m..m+n`. Edge order is m-part major, so edge
    /// `n*i + j` joins vertex `i` to vertex `m + j`.
    pub fn complete_bipartite(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::invalid("both parts of K_{m,n} must be nonempty"));
        }
        let edges = (0..m)
            .flat_map(|i| (0..n).map(move |j| (i, m + j)))
            .collect();
        Graph::new(m + n, edges)
    }

    /// Cycle graph on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid("a cycle needs at least 3 vertices"));
        }
        let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, edges)
    }

    /// Complete graph on `n >= 2` vertices.
    pub fn complete(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("a complete graph needs at least 2 vertices"));
        }
        let edges = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .collect();
        Graph::new(n, edges)
    }

    /// The claw graph `K_{1,3}`.
    pub fn claw() -> Self {
        Graph::complete_bipartite(1, 3).expect("K_{1,3} is valid")
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.num_vertices];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Line graph: one vertex per edge of `self`, adjacent exactly when the
    /// underlying edges share an endpoint.
    pub fn line_graph(&self) -> Graph {
        let mut edges = Vec::new();
        for i in 0..self.edges.len() {
            for j in (i + 1)..self.edges.len() {
                if edges_intersect(self.edges[i], self.edges[j]) {
                    edges.push((i, j));
                }
            }
        }
        Graph {
            num_vertices: self.edges.len(),
            edges,
        }
    }

    /// True when every vertex is an endpoint of some edge in `cover`.
    pub fn is_edge_cover(&self, cover: &EdgeSet) -> bool {
        let mut hit = vec![false; self.num_vertices];
        for &idx in &cover.indices {
            let (u, v) = self.edges[idx];
            hit[u] = true;
            hit[v] = true;
        }
        hit.iter().all(|&h| h)
    }

    /// All minimal edge covers, in lexicographic order of their sorted
    /// index lists. A cover is minimal when removing any single edge
    /// uncovers some vertex.
    pub fn minimal_edge_covers(&self) -> Result<Vec<EdgeSet>> {
        self.check_no_isolated_vertex()?;
        let m = self.edges.len();
        assert!(m < 64, "edge-cover enumeration is desk-scale only");
        let mut covers = Vec::new();
        for mask in 1u64..(1u64 << m) {
            if self.mask_is_cover(mask) && self.mask_is_minimal_cover(mask) {
                covers.push(EdgeSet::from_mask(mask));
            }
        }
        covers.sort();
        Ok(covers)
    }

    /// Minimal covers of minimum cardinality.
    pub fn minimum_edge_covers(&self) -> Result<Vec<EdgeSet>> {
        let minimal = self.minimal_edge_covers()?;
        let best = minimal.iter().map(|s| s.len()).min().unwrap();
        Ok(minimal.into_iter().filter(|s| s.len() == best).collect())
    }

    /// All perfect matchings: sets of pairwise-disjoint edges covering
    /// every vertex. Empty when none exist.
    pub fn perfect_matchings(&self) -> Vec<EdgeSet> {
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        let mut covered = vec![false; self.num_vertices];
        self.match_from(0, &mut covered, &mut chosen, &mut out);
        out.sort();
        out
    }

    fn match_from(
        &self,
        from: usize,
        covered: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        out: &mut Vec<EdgeSet>,
    ) {
        let next = (from..self.num_vertices).find(|&v| !covered[v]);
        let Some(v) = next else {
            out.push(EdgeSet {
                indices: {
                    let mut ix = chosen.clone();
                    ix.sort_unstable();
                    ix
                },
            });
            return;
        };
        for (idx, &(a, b)) in self.edges.iter().enumerate() {
            if (a == v || b == v) && !covered[a] && !covered[b] {
                covered[a] = true;
                covered[b] = true;
                chosen.push(idx);
                self.match_from(v + 1, covered, chosen, out);
                chosen.pop();
                covered[a] = false;
                covered[b] = false;
            }
        }
    }

    /// Number of connected components of the spanning subgraph formed by
    /// the edges of `cover`. Only defined for edge covers.
    pub fn cover_components(&self, cover: &EdgeSet) -> Result<usize> {
        if !self.is_edge_cover(cover) {
            return Err(Error::invalid("edge set is not an edge cover"));
        }
        let mut dsu = Dsu::new(self.num_vertices);
        for &idx in &cover.indices {
            let (u, v) = self.edges[idx];
            dsu.union(u, v);
        }
        let roots: BTreeSet<usize> = (0..self.num_vertices).map(|v| dsu.find(v)).collect();
        Ok(roots.len())
    }

    /// Connected components over edges: two edges are in the same component
    /// when they are linked by a chain of intersecting edges. Returns one
    /// sorted list of edge indices per component.
    pub fn edge_components(&self) -> Vec<Vec<usize>> {
        let mut dsu = Dsu::new(self.num_vertices);
        for &(u, v) in &self.edges {
            dsu.union(u, v);
        }
        let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (idx, &(u, _)) in self.edges.iter().enumerate() {
            by_root.entry(dsu.find(u)).or_default().push(idx);
        }
        by_root.into_values().collect()
    }

    fn check_no_isolated_vertex(&self) -> Result<()> {
        let deg = self.degrees();
        if let Some(v) = deg.iter().position(|&d| d == 0) {
            return Err(Error::NoCoverExists { vertex: v });
        }
        Ok(())
    }

    fn mask_is_cover(&self, mask: u64) -> bool {
        let mut hit = vec![false; self.num_vertices];
        for (idx, &(u, v)) in self.edges.iter().enumerate() {
            if mask >> idx & 1 == 1 {
                hit[u] = true;
                hit[v] = true;
            }
        }
        hit.iter().all(|&h| h)
    }

    fn mask_is_minimal_cover(&self, mask: u64) -> bool {
        // Covering is monotone, so minimality reduces to single-edge removals.
        let mut idx = 0;
        let mut rest = mask;
        while rest != 0 {
            if rest & 1 == 1 && self.mask_is_cover(mask & !(1u64 << idx)) {
                return false;
            }
            idx += 1;
            rest >>= 1;
        }
        true
    }
}

pub fn edges_intersect(a: (usize, usize), b: (usize, usize)) -> bool {
    a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1
}

/// A set of edge indices into some parent graph, kept sorted. Constructors
/// that take the parent validate the indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeSet {
    pub indices: Vec<usize>,
}

impl EdgeSet {
    pub fn new(parent: &Graph, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        for w in indices.windows(2) {
            if w[0] == w[1] {
                return Err(Error::invalid(format!("duplicate edge index {}", w[0])));
            }
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= parent.edges.len()) {
            return Err(Error::invalid(format!("edge index {bad} out of range")));
        }
        Ok(EdgeSet { indices })
    }

    fn from_mask(mask: u64) -> Self {
        let indices = (0..64).filter(|i| mask >> i & 1 == 1).collect();
        EdgeSet { indices }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.indices.binary_search(&idx).is_ok()
    }
}

/// The expression `max!/|m-n|! * min^{|m-n|}` for `m, n >= 2`.
///
/// Exact for m = n (the m! perfect matchings). For m != n it does NOT
/// count distinct minimum edge covers: it counts each cover once per
/// choice of a distinguished edge at every smaller-side vertex, i.e. it
/// equals the sum over covers of the product of smaller-side degrees.
/// K_{2,3} has 6 minimum covers while this expression gives 12. Use
/// [`kmn_minimum_cover_count_exact`] or the enumeration for true counts.
pub fn kmn_minimum_cover_count(m: usize, n: usize) -> Result<u128> {
    if m < 2 || n < 2 {
        return Err(Error::invalid("closed form requires m, n >= 2"));
    }
    let (hi, lo) = (m.max(n) as u128, m.min(n) as u128);
    let diff = hi - lo;
    let mut count: u128 = 1;
    for f in (diff + 1)..=hi {
        count *= f; // max!/|m-n|!
    }
    Ok(count * lo.pow(diff as u32))
}

/// Exact count of minimum edge covers of `K_{m,n}` for `m, n >= 2`.
///
/// A minimum cover splits into min{m,n} stars, one per smaller-side
/// vertex, so covers correspond to surjections from the larger side onto
/// the smaller: `sum_j (-1)^j C(lo,j) (lo-j)^hi`.
pub fn kmn_minimum_cover_count_exact(m: usize, n: usize) -> Result<u128> {
    if m < 2 || n < 2 {
        return Err(Error::invalid("closed form requires m, n >= 2"));
    }
    let (hi, lo) = (m.max(n) as u32, m.min(n) as u128);
    let mut total: i128 = 0;
    let mut binom: i128 = 1;
    for j in 0..=lo {
        let term = binom * ((lo - j) as i128).pow(hi);
        total += if j % 2 == 0 { term } else { -term };
        binom = binom * (lo as i128 - j as i128) / (j as i128 + 1);
    }
    Ok(total as u128)
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

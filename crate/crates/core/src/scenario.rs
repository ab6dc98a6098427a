//! Contextuality scenarios: hypergraphs whose nodes are measurement
//! outcomes and whose hyperedges are contexts. Probabilities are exact
//! rationals throughout; a probabilistic model normalizes every context.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{rat_vec, Rat};

/// A contextuality scenario. Hyperedges are sorted node-index lists;
/// duplicate hyperedges are allowed and count as distinct contexts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub num_nodes: usize,
    pub node_labels: Vec<String>,
    pub hyperedges: Vec<Vec<usize>>,
}

/// One structural violation found by [`validate`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every scenario invariant and lists each violation instead of
/// stopping at the first.
pub fn validate(num_nodes: usize, node_labels: &[String], hyperedges: &[Vec<usize>]) -> ValidationReport {
    let mut violations = Vec::new();
    if node_labels.len() != num_nodes {
        violations.push(format!(
            "expected {num_nodes} node labels, found {}",
            node_labels.len()
        ));
    }
    let mut covered = vec![false; num_nodes];
    for (i, edge) in hyperedges.iter().enumerate() {
        if edge.is_empty() {
            violations.push(format!("empty hyperedge at index {i}"));
        }
        let mut seen = BTreeSet::new();
        for &w in edge {
            if w >= num_nodes {
                violations.push(format!("hyperedge {i} references node {w} out of range"));
            } else {
                covered[w] = true;
            }
            if !seen.insert(w) {
                violations.push(format!("hyperedge {i} repeats node {w}"));
            }
        }
    }
    for (w, hit) in covered.iter().enumerate() {
        if !hit {
            violations.push(format!("node {w} appears in no hyperedge"));
        }
    }
    ValidationReport { violations }
}

impl Scenario {
    /// Builds a scenario, sorting each hyperedge and rejecting any
    /// invariant violation.
    pub fn new(num_nodes: usize, node_labels: Option<Vec<String>>, hyperedges: Vec<Vec<usize>>) -> Result<Self> {
        let labels =
            node_labels.unwrap_or_else(|| (0..num_nodes).map(|w| w.to_string()).collect());
        let report = validate(num_nodes, &labels, &hyperedges);
        if !report.is_valid() {
            return Err(Error::InvalidScenario(report.violations.join("; ")));
        }
        let mut sorted = hyperedges;
        for edge in &mut sorted {
            edge.sort_unstable();
        }
        Ok(Scenario {
            num_nodes,
            node_labels: labels,
            hyperedges: sorted,
        })
    }

    pub fn num_contexts(&self) -> usize {
        self.hyperedges.len()
    }

    pub fn validate_report(&self) -> ValidationReport {
        validate(self.num_nodes, &self.node_labels, &self.hyperedges)
    }

    /// Degree of a node: the number of contexts it appears in.
    pub fn node_degree(&self, w: usize) -> usize {
        self.hyperedges.iter().filter(|f| f.contains(&w)).count()
    }

    pub fn node_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.num_nodes];
        for f in &self.hyperedges {
            for &w in f {
                deg[w] += 1;
            }
        }
        deg
    }

    pub fn is_regular(&self, k: usize) -> bool {
        self.node_degrees().iter().all(|&d| d == k)
    }

    /// Parameter profile: uniformity, degree histogram, and the counting
    /// inequalities that the profile must satisfy.
    pub fn profile(&self) -> ScenarioProfile {
        let degrees = self.node_degrees();
        let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
        for &d in &degrees {
            *histogram.entry(d).or_insert(0) += 1;
        }
        let sizes: BTreeSet<usize> = self.hyperedges.iter().map(|f| f.len()).collect();
        let uniform_size = if sizes.len() == 1 {
            sizes.iter().next().copied()
        } else {
            None
        };
        let incidence_sum = self.hyperedges.iter().map(|f| f.len()).sum();
        ScenarioProfile::from_parts(
            uniform_size,
            self.num_contexts(),
            self.num_nodes,
            histogram,
            incidence_sum,
        )
    }

    /// Exact check that `p` assigns `[0,1]` values and that every context
    /// sums to exactly 1.
    pub fn is_probabilistic_model(&self, p: &ProbModel) -> Result<bool> {
        if p.values.len() != self.num_nodes {
            return Err(Error::invalid(format!(
                "model has {} values for {} nodes",
                p.values.len(),
                self.num_nodes
            )));
        }
        let one = Rat::one();
        let in_range = p
            .values
            .iter()
            .all(|v| !v.is_negative_strict() && *v <= one);
        if !in_range {
            return Ok(false);
        }
        Ok(self
            .hyperedges
            .iter()
            .all(|f| f.iter().map(|&w| &p.values[w]).sum::<Rat>() == one))
    }

    /// True when `s` intersects every hyperedge (a hitting set).
    pub fn is_transversal(&self, s: &BTreeSet<usize>) -> bool {
        self.hyperedges
            .iter()
            .all(|f| f.iter().any(|w| s.contains(w)))
    }

    /// Restriction of the scenario to `s`: nodes are renumbered in the
    /// sorted order of `s`, every hyperedge is intersected with `s`, and
    /// duplicate intersections are retained as distinct contexts.
    pub fn induced_subscenario(&self, s: &BTreeSet<usize>) -> Result<Scenario> {
        let order: Vec<usize> = s.iter().copied().collect();
        if let Some(&bad) = order.iter().find(|&&w| w >= self.num_nodes) {
            return Err(Error::invalid(format!("node {bad} out of range")));
        }
        let renumber: BTreeMap<usize, usize> =
            order.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let mut hyperedges = Vec::with_capacity(self.hyperedges.len());
        for (i, f) in self.hyperedges.iter().enumerate() {
            let inter: Vec<usize> = f
                .iter()
                .filter(|w| s.contains(w))
                .map(|w| renumber[w])
                .collect();
            if inter.is_empty() {
                return Err(Error::EmptyHyperedge(format!(
                    "node set misses hyperedge {i}; not a transversal"
                )));
            }
            hyperedges.push(inter);
        }
        let labels = order.iter().map(|&w| self.node_labels[w].clone()).collect();
        Scenario::new(order.len(), Some(labels), hyperedges)
    }

    /// Extends a model on the subscenario induced by `s` back to `self`:
    /// it agrees with `ps` on `s` and is zero elsewhere.
    pub fn extend_model(&self, s: &BTreeSet<usize>, ps: &ProbModel) -> Result<ProbModel> {
        let sub = self.induced_subscenario(s)?;
        if !sub.is_probabilistic_model(ps)? {
            return Err(Error::invalid(
                "given values are not a probabilistic model on the induced subscenario",
            ));
        }
        let mut values = vec![Rat::zero(); self.num_nodes];
        for (i, &w) in s.iter().enumerate() {
            values[w] = ps.values[i].clone();
        }
        let extended = ProbModel { values };
        debug_assert!(self.is_probabilistic_model(&extended)?);
        Ok(extended)
    }

    /// Pairwise co-membership: nodes adjacent when some hyperedge contains
    /// both.
    pub fn comembership_adjacency(&self) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); self.num_nodes];
        for f in &self.hyperedges {
            for (i, &u) in f.iter().enumerate() {
                for &v in &f[i + 1..] {
                    adj[u].insert(v);
                    adj[v].insert(u);
                }
            }
        }
        adj
    }

    /// All n-hypercycles: node sets of size `n` whose co-membership graph
    /// is a single chordless n-cycle with no hyperedge containing three or
    /// more of the nodes. Results are sorted node lists in lexicographic
    /// order.
    pub fn find_hypercycles(&self, n: usize, budget: u64) -> Result<Vec<Vec<usize>>> {
        if n < 3 {
            return Err(Error::invalid("hypercycles need n >= 3"));
        }
        let mut found = self.chordless_cycles(Some(n), budget)?;
        found.sort();
        Ok(found)
    }

    /// Chordless cycles of the co-membership graph that qualify as
    /// hypercycles, optionally restricted to one length. Enumeration is
    /// canonical: each cycle is discovered once, from its smallest node,
    /// walking toward its smaller neighbour first.
    pub(crate) fn chordless_cycles(&self, length: Option<usize>, budget: u64) -> Result<Vec<Vec<usize>>> {
        let adj = self.comembership_adjacency();
        let max_len = length.unwrap_or(self.num_nodes);
        let mut spent: u64 = 0;
        let mut out = Vec::new();
        let mut path: Vec<usize> = Vec::new();
        for start in 0..self.num_nodes {
            path.push(start);
            self.cycle_dfs(start, &adj, max_len, length, &mut path, &mut out, &mut spent, budget)?;
            path.pop();
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn cycle_dfs(
        &self,
        start: usize,
        adj: &[BTreeSet<usize>],
        max_len: usize,
        want: Option<usize>,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        spent: &mut u64,
        budget: u64,
    ) -> Result<()> {
        *spent += 1;
        if *spent > budget {
            return Err(Error::BudgetExceeded {
                spent: *spent,
                limit: budget,
            });
        }
        let last = *path.last().unwrap();
        let closes = path.len() >= 3 && adj[last].contains(&start);
        if closes {
            let qualifies = want.is_none_or(|n| n == path.len())
                && (path.len() > 3 || !self.triple_in_one_hyperedge(path))
                // Canonical direction: second node smaller than last node.
                && path[1] < last;
            if qualifies {
                let mut cyc = path.clone();
                cyc.sort_unstable();
                out.push(cyc);
            }
            // Extending past a start-adjacent tip would leave a chord back
            // to the start, so the cycle must close here or not at all.
            return Ok(());
        }
        if path.len() == max_len {
            return Ok(());
        }
        for &next in &adj[last] {
            if next <= start || path.contains(&next) {
                continue;
            }
            // Chordless: the new node may touch only the path's tip.
            if path[..path.len() - 1]
                .iter()
                .skip(1)
                .any(|&w| adj[next].contains(&w))
            {
                continue;
            }
            path.push(next);
            self.cycle_dfs(start, adj, max_len, want, path, out, spent, budget)?;
            path.pop();
        }
        Ok(())
    }

    fn triple_in_one_hyperedge(&self, nodes: &[usize]) -> bool {
        self.hyperedges
            .iter()
            .any(|f| nodes.iter().filter(|w| f.contains(w)).count() >= 3)
    }

    /// True when every node of hyperedge `f` carries a 0/1 value.
    pub fn is_deterministic_context(&self, p: &ProbModel, f: usize) -> bool {
        self.hyperedges[f]
            .iter()
            .all(|&w| p.values[w].is_zero() || p.values[w].is_one())
    }
}

/// A probability assignment to the nodes of some scenario.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProbModel {
    #[serde(with = "rat_vec", rename = "probabilities")]
    pub values: Vec<Rat>,
}

impl ProbModel {
    pub fn new(values: Vec<Rat>) -> Self {
        ProbModel { values }
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(w, _)| w)
            .collect()
    }

    pub fn is_deterministic(&self) -> bool {
        self.values.iter().all(|v| v.is_zero() || v.is_one())
    }
}

trait RatSignExt {
    fn is_negative_strict(&self) -> bool;
}

impl RatSignExt for Rat {
    fn is_negative_strict(&self) -> bool {
        self < &Rat::zero()
    }
}

/// Counting profile of a scenario: context size, degree histogram, and
/// the derived quantities used to screen for KS-uncolourability.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioProfile {
    /// Uniform context size `d`, or `None` for non-uniform scenarios.
    pub uniform_size: Option<usize>,
    pub num_contexts: usize,
    pub num_nodes: usize,
    /// Histogram `k -> n_k`: how many nodes lie in exactly `k` contexts.
    pub degree_histogram: BTreeMap<usize, usize>,
    pub max_degree: usize,
    /// Nodes shared by more than one context: `m = |W| - n_1`.
    pub multi_context_nodes: usize,
    /// Total incidence `sum_f |f|`; equals `d * |F|` when uniform.
    pub incidence_sum: usize,
    /// `m <= incidence_sum / 2`, which holds for every scenario.
    pub multi_nodes_le_half: bool,
    /// `|W| <= incidence_sum / 2`.
    pub nodes_le_half: bool,
    /// `n_1 <= sum_{k>=3} (k-2) n_k`, equivalent to `nodes_le_half`.
    pub degree_one_criterion: bool,
}

impl ScenarioProfile {
    fn from_parts(
        uniform_size: Option<usize>,
        num_contexts: usize,
        num_nodes: usize,
        degree_histogram: BTreeMap<usize, usize>,
        incidence_sum: usize,
    ) -> Self {
        let n1 = degree_histogram.get(&1).copied().unwrap_or(0);
        let max_degree = degree_histogram.keys().max().copied().unwrap_or(0);
        let multi = num_nodes - n1;
        let slack: usize = degree_histogram
            .iter()
            .filter(|(k, _)| **k >= 3)
            .map(|(k, n)| (k - 2) * n)
            .sum();
        debug_assert_eq!(
            incidence_sum,
            degree_histogram.iter().map(|(k, n)| k * n).sum::<usize>()
        );
        ScenarioProfile {
            uniform_size,
            num_contexts,
            num_nodes,
            degree_histogram,
            max_degree,
            multi_context_nodes: multi,
            incidence_sum,
            multi_nodes_le_half: 2 * multi <= incidence_sum,
            nodes_le_half: 2 * num_nodes <= incidence_sum,
            degree_one_criterion: n1 <= slack,
        }
    }

    /// Profile arithmetic from a degree histogram alone, for `d`-uniform
    /// scenarios whose incidence structure is not available. Fails when
    /// the incidence sum is not divisible by `d`.
    pub fn from_histogram(d: usize, histogram: BTreeMap<usize, usize>) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("context size d must be positive"));
        }
        let incidence_sum: usize = histogram.iter().map(|(k, n)| k * n).sum();
        if !incidence_sum.is_multiple_of(d) {
            return Err(Error::invalid(format!(
                "incidence sum {incidence_sum} is not divisible by d = {d}"
            )));
        }
        let num_nodes: usize = histogram.values().sum();
        Ok(ScenarioProfile::from_parts(
            Some(d),
            incidence_sum / d,
            num_nodes,
            histogram,
            incidence_sum,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn hypercycle(n: usize) -> Scenario {
        let edges = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        Scenario::new(n, None, edges).unwrap()
    }

    #[test]
    fn validation_lists_each_violation() {
        let report = validate(3, &["a".into(), "b".into(), "c".into()], &[vec![0, 1], vec![]]);
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("empty hyperedge")));
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("node 2 appears in no hyperedge")));
        assert!(Scenario::new(3, None, vec![vec![0, 1], vec![]]).is_err());
    }

    #[test]
    fn valid_scenario_passes() {
        let h = hypercycle(3);
        assert!(h.validate_report().is_valid());
    }

    #[test]
    fn profile_counts_hold() {
        let h = hypercycle(5);
        let p = h.profile();
        assert_eq!(p.uniform_size, Some(2));
        assert_eq!(p.num_contexts, 5);
        assert_eq!(p.num_nodes, 5);
        assert_eq!(p.degree_histogram.get(&2), Some(&5));
        assert_eq!(p.multi_context_nodes, 5);
        assert!(p.multi_nodes_le_half);
        // Profile identities.
        let lhs: usize = p.degree_histogram.iter().map(|(k, n)| k * n).sum();
        assert_eq!(lhs, p.incidence_sum);
        assert_eq!(
            p.num_nodes - p.degree_histogram.get(&1).copied().unwrap_or(0),
            p.multi_context_nodes
        );
    }

    #[test]
    fn histogram_profile_reproduces_ks67_parameters() {
        let mut hist = BTreeMap::new();
        hist.insert(1, 75);
        hist.insert(2, 90);
        hist.insert(3, 24);
        hist.insert(9, 3);
        let p = ScenarioProfile::from_histogram(3, hist).unwrap();
        assert_eq!(p.num_nodes, 192);
        assert_eq!(p.multi_context_nodes, 117);
        assert_eq!(p.num_contexts, 118);
        assert_eq!(p.incidence_sum, 354);
        // m < d|F|/2 = 177 < |W|
        assert!(p.multi_nodes_le_half);
        assert!(!p.nodes_le_half);
        assert!(!p.degree_one_criterion);
    }

    #[test]
    fn probabilistic_model_checks() {
        let h = hypercycle(3);
        let half = ProbModel::new(vec![rat(1, 2), rat(1, 2), rat(1, 2)]);
        assert!(h.is_probabilistic_model(&half).unwrap());
        let ones = ProbModel::new(vec![rat_int(1); 3]);
        assert!(!h.is_probabilistic_model(&ones).unwrap());
        let zeros = ProbModel::new(vec![rat_int(0); 3]);
        assert!(!h.is_probabilistic_model(&zeros).unwrap());
        let short = ProbModel::new(vec![rat_int(0); 2]);
        assert!(h.is_probabilistic_model(&short).is_err());
    }

    #[test]
    fn transversal_checks() {
        let h = hypercycle(5);
        let s: BTreeSet<usize> = [0, 2].into_iter().collect();
        // Hyperedge {3, 4} is unhit.
        assert!(!h.is_transversal(&s));
        assert!(!h.is_transversal(&BTreeSet::new()));
        let full: BTreeSet<usize> = (0..5).collect();
        assert!(h.is_transversal(&full));
    }

    #[test]
    fn induced_subscenario_identity_and_errors() {
        let h = hypercycle(4);
        let full: BTreeSet<usize> = (0..4).collect();
        assert_eq!(h.induced_subscenario(&full).unwrap(), h);
        let bad: BTreeSet<usize> = [0].into_iter().collect();
        assert!(matches!(
            h.induced_subscenario(&bad),
            Err(Error::EmptyHyperedge(_))
        ));
    }

    #[test]
    fn extend_model_round_trip() {
        let h = hypercycle(4);
        let s: BTreeSet<usize> = [0, 2].into_iter().collect();
        let ps = ProbModel::new(vec![rat_int(1), rat_int(1)]);
        let p = h.extend_model(&s, &ps).unwrap();
        assert_eq!(p.values, vec![rat_int(1), rat_int(0), rat_int(1), rat_int(0)]);
        assert!(h.is_probabilistic_model(&p).unwrap());
        // Restriction back to s recovers ps.
        let restricted: Vec<Rat> = s.iter().map(|&w| p.values[w].clone()).collect();
        assert_eq!(restricted, ps.values);
    }

    #[test]
    fn hypercycle_detection_on_footnote_example() {
        // H = {{1,2,3},{3,4,5},{5,6,1}} on six nodes (0-based here):
        // the only 3-hypercycle is {0, 2, 4}.
        let h = Scenario::new(6, None, vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 0]]).unwrap();
        let cycles = h.find_hypercycles(3, 1_000_000).unwrap();
        assert_eq!(cycles, vec![vec![0, 2, 4]]);
    }

    #[test]
    fn odd_cycle_scenarios_are_their_own_hypercycle() {
        for n in [3, 5, 7] {
            let h = hypercycle(n);
            let cycles = h.find_hypercycles(n, 1_000_000).unwrap();
            assert_eq!(cycles, vec![(0..n).collect::<Vec<_>>()]);
        }
    }

    #[test]
    fn budget_errors_are_explicit() {
        let h = hypercycle(9);
        assert!(matches!(
            h.find_hypercycles(9, 3),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn deterministic_context_detection() {
        let h = Scenario::new(4, None, vec![vec![0, 1, 2, 3]]).unwrap();
        let det = ProbModel::new(vec![rat_int(1), rat_int(0), rat_int(0), rat_int(0)]);
        assert!(h.is_deterministic_context(&det, 0));
        let mixed = ProbModel::new(vec![rat(1, 2), rat(1, 2), rat_int(0), rat_int(0)]);
        assert!(!h.is_deterministic_context(&mixed, 0));
    }
}

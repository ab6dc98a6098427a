//! Extremal probabilistic models: the vertices of the normalization
//! polytope. A model is extremal exactly when it extends the unique model
//! of an induced subscenario, so enumeration reduces to finding node sets
//! whose induced subscenario pins down a single full-support model.
//!
//! Two routes are implemented. The general route scans transversal node
//! subsets and solves the induced normalization system exactly. For
//! 2-regular scenarios (every node in exactly two contexts) the structural
//! route assembles supports from singleton contexts and disjoint odd
//! hypercycles via exact cover; it is the production path, with the
//! general route as its conformance oracle.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{self, LpOutcome, SystemSolution};
use crate::rational::{rat, rat_int, Rat};
use crate::scenario::{ProbModel, Scenario};
use crate::two_reg::TwoRegScenario;

/// An extremal model together with the structure of its support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalModel {
    #[serde(flatten)]
    pub model: ProbModel,
    pub support: Vec<usize>,
    /// Nodes valued 1 (each spans its contexts alone).
    pub singleton_part: Vec<usize>,
    /// Disjoint odd hypercycles of 1/2-valued nodes; populated by the
    /// structural route, empty for general-route provenance.
    #[serde(rename = "hypercycles")]
    pub hypercycle_part: Vec<Vec<usize>>,
    #[serde(skip)]
    zetas: Vec<Rat>,
}

impl ExtremalModel {
    fn from_values(h: &Scenario, values: Vec<Rat>, hypercycles: Vec<Vec<usize>>) -> Self {
        let support: Vec<usize> = values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(w, _)| w)
            .collect();
        let singleton_part = values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_one())
            .map(|(w, _)| w)
            .collect();
        let zetas = h
            .hyperedges
            .iter()
            .map(|f| f.iter().map(|&w| values[w].clone()).max().unwrap())
            .collect();
        ExtremalModel {
            model: ProbModel::new(values),
            support,
            singleton_part,
            hypercycle_part: hypercycles,
            zetas,
        }
    }

    /// Max node probability within context `f` under this model.
    pub fn zeta(&self, f: usize) -> &Rat {
        &self.zetas[f]
    }

    /// Contexts in which every node value is 0 or 1.
    pub fn deterministic_contexts(&self, h: &Scenario) -> Vec<usize> {
        (0..h.num_contexts())
            .filter(|&f| h.is_deterministic_context(&self.model, f))
            .collect()
    }

    pub fn num_indeterministic(&self, h: &Scenario) -> usize {
        h.num_contexts() - self.deterministic_contexts(h).len()
    }

    pub fn is_deterministic(&self) -> bool {
        self.model.is_deterministic()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EnumOptions {
    pub budget: u64,
    pub parallel: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            budget: crate::DEFAULT_BUDGET,
            parallel: false,
        }
    }
}

/// Outcome of deciding whether a scenario carries exactly one
/// probabilistic model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniqueModelOutcome {
    Unique(ProbModel),
    Multiple,
    /// The normalization system has no nonnegative solution at all.
    NoModel,
}

/// Decides uniqueness by exact LP: feasibility first, then minimizing and
/// maximizing every coordinate over the polytope; the model is unique
/// exactly when min = max for every node.
pub fn unique_model(h: &Scenario) -> Result<UniqueModelOutcome> {
    let sf = lp::normalization_polytope(h);
    let point = match lp::feasible_point(&sf) {
        Ok(p) => p,
        Err(_) => return Ok(UniqueModelOutcome::NoModel),
    };
    for w in 0..h.num_nodes {
        let mut obj = vec![Rat::zero(); h.num_nodes];
        obj[w] = Rat::one();
        let lo = match lp::minimize(&sf, &obj) {
            LpOutcome::Optimal { value, .. } => value,
            _ => unreachable!("feasible bounded polytope"),
        };
        let hi = match lp::maximize(&sf, &obj) {
            LpOutcome::Optimal { value, .. } => value,
            _ => unreachable!("feasible bounded polytope"),
        };
        if lo != hi {
            return Ok(UniqueModelOutcome::Multiple);
        }
    }
    Ok(UniqueModelOutcome::Unique(ProbModel::new(point)))
}

/// General enumeration via Theorem-style support search: every extremal
/// model corresponds to a transversal node set whose induced subscenario
/// has a unique model of full support. Subsets are screened cheaply
/// (size, transversality, forced-node conflicts) and survivors decided by
/// an exact linear solve.
pub fn enumerate_extremal_models(h: &Scenario, opts: &EnumOptions) -> Result<Vec<ExtremalModel>> {
    let n = h.num_nodes;
    if n > 64 {
        return Err(Error::invalid(
            "general enumeration is desk-scale only (at most 64 nodes)",
        ));
    }
    let edge_masks: Vec<u64> = h
        .hyperedges
        .iter()
        .map(|f| f.iter().fold(0u64, |m, &w| m | 1 << w))
        .collect();
    let node_edge_masks: Vec<u128> = {
        let mut masks = vec![0u128; n];
        for (e, f) in h.hyperedges.iter().enumerate() {
            for &w in f {
                masks[w] |= 1 << e;
            }
        }
        masks
    };
    let total: u64 = 1u64
        .checked_shl(n as u32)
        .ok_or_else(|| Error::invalid("too many nodes"))?;
    if total > opts.budget {
        return Err(Error::BudgetExceeded {
            spent: total,
            limit: opts.budget,
        });
    }
    let max_support = h.num_contexts().min(n);

    let scan = |mask: u64| -> Option<ExtremalModel> {
        let size = mask.count_ones() as usize;
        if size == 0 || size > max_support {
            return None;
        }
        if edge_masks.iter().any(|&f| f & mask == 0) {
            return None;
        }
        if has_forced_conflict(&edge_masks, &node_edge_masks, mask) {
            return None;
        }
        solve_support(h, mask).map(|values| ExtremalModel::from_values(h, values, Vec::new()))
    };

    let mut found: Vec<ExtremalModel> = if opts.parallel {
        (1..total)
            .into_par_iter()
            .filter_map(scan)
            .collect::<Vec<_>>()
    } else {
        (1..total).filter_map(scan).collect()
    };
    found.sort_by(|a, b| a.support.cmp(&b.support));
    Ok(found)
}

/// Rejects supports where a forced-1 node (sole survivor of some context)
/// shares another context with a second support node, which would force
/// that node to 0 and break full support.
fn has_forced_conflict(
    edge_masks: &[u64],
    node_edge_masks: &[u128],
    mask: u64,
) -> bool {
    for (e, &fmask) in edge_masks.iter().enumerate() {
        let inter = fmask & mask;
        if inter.count_ones() == 1 {
            let w = inter.trailing_zeros() as usize;
            let mut others = node_edge_masks[w] & !(1u128 << e);
            while others != 0 {
                let g = others.trailing_zeros() as usize;
                others &= others - 1;
                if (edge_masks[g] & mask).count_ones() >= 2 {
                    return true;
                }
            }
        }
    }
    false
}

/// Exact decision for one support: restrict every normalization equation
/// to the support columns and solve. The induced subscenario has a unique
/// full-support model exactly when the linear system has a unique,
/// strictly positive solution.
fn solve_support(h: &Scenario, mask: u64) -> Option<Vec<Rat>> {
    let cols: Vec<usize> = (0..h.num_nodes).filter(|&w| mask >> w & 1 == 1).collect();
    let col_of: std::collections::BTreeMap<usize, usize> =
        cols.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let rows: Vec<(Vec<Rat>, Rat)> = h
        .hyperedges
        .iter()
        .map(|f| {
            let mut row = vec![Rat::zero(); cols.len()];
            for w in f {
                if let Some(&i) = col_of.get(w) {
                    row[i] = Rat::one();
                }
            }
            (row, Rat::one())
        })
        .collect();
    match lp::solve_exact_system(&rows, cols.len()) {
        SystemSolution::Unique(x) if x.iter().all(|v| v.is_positive()) => {
            let mut values = vec![Rat::zero(); h.num_nodes];
            for (i, &w) in cols.iter().enumerate() {
                values[w] = x[i].clone();
            }
            Some(values)
        }
        _ => None,
    }
}

/// Structural enumeration for 2-regular scenarios: each extremal support
/// partitions the context set into singleton blocks (the two contexts of
/// a 1-valued node) and odd-hypercycle blocks (the contexts of a cycle of
/// 1/2-valued nodes), so supports are exactly the exact covers of the
/// context set by these blocks.
pub fn enumerate_extremal_models_2regular(
    h: &Scenario,
    opts: &EnumOptions,
) -> Result<Vec<ExtremalModel>> {
    if !h.is_regular(2) {
        return Err(Error::invalid(
            "structural enumeration needs a 2-regular scenario",
        ));
    }
    if h.num_contexts() > 128 {
        return Err(Error::invalid("too many contexts (at most 128)"));
    }
    let node_contexts: Vec<Vec<usize>> = {
        let mut map = vec![Vec::new(); h.num_nodes];
        for (e, f) in h.hyperedges.iter().enumerate() {
            for &w in f {
                map[w].push(e);
            }
        }
        map
    };

    #[derive(Debug)]
    enum Block {
        Singleton(usize),
        Cycle(Vec<usize>),
    }
    let mut blocks: Vec<(Block, u128)> = Vec::new();
    for (w, ctxs) in node_contexts.iter().enumerate() {
        let mask = ctxs.iter().fold(0u128, |m, &e| m | 1 << e);
        blocks.push((Block::Singleton(w), mask));
    }
    let cycles = h.chordless_cycles(None, opts.budget)?;
    for cyc in cycles.into_iter().filter(|c| c.len() % 2 == 1) {
        let mask = cyc
            .iter()
            .flat_map(|&w| node_contexts[w].iter().copied())
            .fold(0u128, |m, e| m | 1 << e);
        debug_assert_eq!(mask.count_ones() as usize, cyc.len());
        blocks.push((Block::Cycle(cyc), mask));
    }

    // For each context, the blocks covering it, in deterministic order.
    let mut covering: Vec<Vec<usize>> = vec![Vec::new(); h.num_contexts()];
    for (i, (_, mask)) in blocks.iter().enumerate() {
        let mut m = *mask;
        while m != 0 {
            let e = m.trailing_zeros() as usize;
            m &= m - 1;
            covering[e].push(i);
        }
    }

    let full: u128 = if h.num_contexts() == 128 {
        u128::MAX
    } else {
        (1u128 << h.num_contexts()) - 1
    };
    let mut chosen: Vec<usize> = Vec::new();
    let mut out: Vec<ExtremalModel> = Vec::new();
    let mut spent = 0u64;
    exact_cover(
        full,
        0,
        &blocks,
        &covering,
        &mut chosen,
        &mut |chosen| {
            let mut values = vec![Rat::zero(); h.num_nodes];
            let mut hypercycles = Vec::new();
            for &b in chosen {
                match &blocks[b].0 {
                    Block::Singleton(w) => values[*w] = rat_int(1),
                    Block::Cycle(cyc) => {
                        for &w in cyc {
                            values[w] = rat(1, 2);
                        }
                        hypercycles.push(cyc.clone());
                    }
                }
            }
            hypercycles.sort();
            out.push(ExtremalModel::from_values(h, values, hypercycles));
        },
        &mut spent,
        opts.budget,
    )?;
    out.sort_by(|a, b| a.support.cmp(&b.support));
    Ok(out)
}

/// Wrapper fixing the input to a 2Reg-constructed scenario.
pub fn enumerate_extremal_models_2reg(
    t: &TwoRegScenario,
    opts: &EnumOptions,
) -> Result<Vec<ExtremalModel>> {
    enumerate_extremal_models_2regular(&t.scenario, opts)
}

#[allow(clippy::too_many_arguments)]
fn exact_cover<F: FnMut(&[usize])>(
    uncovered: u128,
    _depth: usize,
    blocks: &[(impl Sized, u128)],
    covering: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    emit: &mut F,
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
    if uncovered == 0 {
        emit(chosen);
        return Ok(());
    }
    let target = uncovered.trailing_zeros() as usize;
    for &b in &covering[target] {
        let mask = blocks[b].1;
        if mask & !uncovered != 0 {
            continue;
        }
        chosen.push(b);
        exact_cover(uncovered & !mask, _depth + 1, blocks, covering, chosen, emit, spent, budget)?;
        chosen.pop();
    }
    Ok(())
}

/// Star-derived extremal models of 2Reg(K_{m,n}): the indeterministic part
/// is a single k-hypercycle built from k edges at one shared vertex, and
/// the rest of the contexts are covered by singletons. Requires odd
/// `mn > 1` and odd `k >= 3` fitting a star on one side.
pub fn khypercycle_models_kmn(m: usize, n: usize, k: usize) -> Result<Vec<ExtremalModel>> {
    if m * n <= 1 || (m * n).is_multiple_of(2) {
        return Err(Error::invalid("requires odd m*n > 1"));
    }
    if k.is_multiple_of(2) || k < 3 {
        return Err(Error::invalid("hypercycle length k must be odd and >= 3"));
    }
    if k > m && k > n {
        return Err(Error::invalid(format!(
            "no K_{{1,{k}}} or K_{{{k},1}} subgraph fits in K_{{{m},{n}}}"
        )));
    }
    let g = crate::graphs::Graph::complete_bipartite(m, n)?;
    let t = crate::two_reg::two_reg(&g)?;
    let h = &t.scenario;

    // Stars: k edges meeting at one vertex.
    let mut stars: Vec<Vec<usize>> = Vec::new();
    for v in 0..g.num_vertices {
        let incident: Vec<usize> = (0..g.edges.len())
            .filter(|&e| g.edges[e].0 == v || g.edges[e].1 == v)
            .collect();
        if incident.len() >= k {
            for combo in combinations(&incident, k) {
                stars.push(combo);
            }
        }
    }

    let node_contexts: Vec<Vec<usize>> = {
        let mut map = vec![Vec::new(); h.num_nodes];
        for (e, f) in h.hyperedges.iter().enumerate() {
            for &w in f {
                map[w].push(e);
            }
        }
        map
    };
    let singleton_blocks: Vec<u128> = node_contexts
        .iter()
        .map(|ctxs| ctxs.iter().fold(0u128, |acc, &e| acc | 1 << e))
        .collect();

    let mut out: Vec<ExtremalModel> = Vec::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for star in &stars {
        for arrangement in necklaces(star) {
            // Consecutive star edges share the centre, so each pair is a node.
            let cycle_nodes: Vec<usize> = (0..k)
                .map(|i| {
                    let (a, b) = (arrangement[i], arrangement[(i + 1) % k]);
                    t.node_of_pair(a, b).expect("star edges intersect")
                })
                .collect();
            let cycle_mask: u128 = star.iter().fold(0u128, |acc, &e| acc | 1 << e);
            // Complete the cover with singletons only.
            let mut completions: Vec<Vec<usize>> = Vec::new();
            let full: u128 = (1u128 << h.num_contexts()) - 1;
            singleton_cover(full & !cycle_mask, &singleton_blocks, &mut Vec::new(), &mut completions);
            for singles in completions {
                let mut values = vec![Rat::zero(); h.num_nodes];
                for &w in &cycle_nodes {
                    values[w] = rat(1, 2);
                }
                for &w in &singles {
                    values[w] = rat_int(1);
                }
                let mut sorted_cycle = cycle_nodes.clone();
                sorted_cycle.sort_unstable();
                let model = ExtremalModel::from_values(h, values, vec![sorted_cycle]);
                if seen.insert(model.support.clone()) {
                    out.push(model);
                }
            }
        }
    }
    out.sort_by(|a, b| a.support.cmp(&b.support));
    Ok(out)
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(items: &[usize], k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..items.len() {
            current.push(items[i]);
            rec(items, k, i + 1, current, out);
            current.pop();
        }
    }
    rec(items, k, 0, &mut current, &mut out);
    out
}

/// Distinct cyclic arrangements of `items` up to rotation and reflection:
/// first element pinned to the smallest, second smaller than last.
fn necklaces(items: &[usize]) -> Vec<Vec<usize>> {
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    let first = sorted[0];
    let rest: Vec<usize> = sorted[1..].to_vec();
    let mut out = Vec::new();
    permute(&rest, &mut Vec::new(), &mut |perm| {
        if perm.first() < perm.last() {
            let mut arrangement = vec![first];
            arrangement.extend_from_slice(perm);
            out.push(arrangement);
        }
    });
    out
}

fn permute<F: FnMut(&[usize])>(items: &[usize], current: &mut Vec<usize>, emit: &mut F) {
    if current.len() == items.len() {
        emit(current);
        return;
    }
    for &x in items {
        if !current.contains(&x) {
            current.push(x);
            permute(items, current, emit);
            current.pop();
        }
    }
}

/// Exact cover of `uncovered` using singleton blocks only; emits the node
/// lists of all covers.
fn singleton_cover(uncovered: u128, blocks: &[u128], chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if uncovered == 0 {
        let mut nodes = chosen.clone();
        nodes.sort_unstable();
        out.push(nodes);
        return;
    }
    let target = uncovered.trailing_zeros();
    for (w, &mask) in blocks.iter().enumerate() {
        if mask >> target & 1 == 1 && mask & !uncovered == 0 {
            chosen.push(w);
            singleton_cover(uncovered & !mask, blocks, chosen, out);
            chosen.pop();
        }
    }
}

/// The smallest number of indeterministic contexts over all extremal
/// models. Undefined for KS-colourable scenarios, where a deterministic
/// model leaves zero contexts indeterministic.
pub fn smallest_indeterministic_size(h: &Scenario, extremals: &[ExtremalModel]) -> Result<usize> {
    if extremals.is_empty() {
        return Err(Error::invalid("the scenario admits no probabilistic model"));
    }
    let smallest = extremals
        .iter()
        .map(|m| m.num_indeterministic(h))
        .min()
        .unwrap();
    if smallest == 0 {
        return Err(Error::invalid(
            "scenario is KS-colourable; indeterministic size is undefined",
        ));
    }
    Ok(smallest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Graph;
    use crate::two_reg::two_reg;

    fn hypercycle(n: usize) -> Scenario {
        Scenario::new(n, None, (0..n).map(|i| vec![i, (i + 1) % n]).collect()).unwrap()
    }

    #[test]
    fn odd_hypercycles_have_unique_half_model() {
        for n in [3, 5] {
            let h = hypercycle(n);
            match unique_model(&h).unwrap() {
                UniqueModelOutcome::Unique(p) => {
                    assert!(p.values.iter().all(|v| *v == rat(1, 2)));
                }
                other => panic!("expected unique, got {other:?}"),
            }
        }
    }

    #[test]
    fn even_hypercycle_has_multiple_models() {
        assert_eq!(
            unique_model(&hypercycle(4)).unwrap(),
            UniqueModelOutcome::Multiple
        );
    }

    #[test]
    fn infeasible_scenario_reports_no_model() {
        let h = Scenario::new(2, None, vec![vec![0], vec![1], vec![0, 1]]).unwrap();
        assert_eq!(unique_model(&h).unwrap(), UniqueModelOutcome::NoModel);
    }

    #[test]
    fn general_enumeration_on_small_hypercycles() {
        let three = enumerate_extremal_models(&hypercycle(3), &EnumOptions::default()).unwrap();
        assert_eq!(three.len(), 1);
        assert!(three[0].model.values.iter().all(|v| *v == rat(1, 2)));

        let four = enumerate_extremal_models(&hypercycle(4), &EnumOptions::default()).unwrap();
        assert_eq!(four.len(), 2);
        assert!(four.iter().all(|m| m.is_deterministic()));
        assert_eq!(four[0].support, vec![0, 2]);
        assert_eq!(four[1].support, vec![1, 3]);
    }

    #[test]
    fn structural_matches_general_on_small_scenarios() {
        for g in [
            Graph::claw(),
            Graph::cycle(4).unwrap(),
            Graph::cycle(5).unwrap(),
            Graph::complete_bipartite(2, 3).unwrap(),
            Graph::complete_bipartite(1, 5).unwrap(),
        ] {
            let t = two_reg(&g).unwrap();
            let general = enumerate_extremal_models(&t.scenario, &EnumOptions::default()).unwrap();
            let structural = enumerate_extremal_models_2reg(&t, &EnumOptions::default()).unwrap();
            let gv: Vec<&ProbModel> = general.iter().map(|m| &m.model).collect();
            let sv: Vec<&ProbModel> = structural.iter().map(|m| &m.model).collect();
            assert_eq!(gv, sv, "mismatch for {:?}", g);
        }
    }

    #[test]
    fn two_reg_values_are_half_integral() {
        let t = two_reg(&Graph::complete_bipartite(3, 3).unwrap()).unwrap();
        let models = enumerate_extremal_models_2reg(&t, &EnumOptions::default()).unwrap();
        assert!(!models.is_empty());
        for m in &models {
            for v in &m.model.values {
                assert!(v.is_zero() || *v == rat(1, 2) || v.is_one());
            }
        }
    }

    #[test]
    fn structural_rejects_irregular_input() {
        let h = Scenario::new(2, None, vec![vec![0, 1]]).unwrap();
        assert!(enumerate_extremal_models_2regular(&h, &EnumOptions::default()).is_err());
    }

    #[test]
    fn deterministic_pairing_of_contexts() {
        // In a 2Reg scenario, deterministic contexts come in pairs sharing
        // a 1-valued node.
        let t = two_reg(&Graph::complete_bipartite(3, 3).unwrap()).unwrap();
        let models = enumerate_extremal_models_2reg(&t, &EnumOptions::default()).unwrap();
        for m in &models {
            let det = m.deterministic_contexts(&t.scenario);
            assert_eq!(det.len(), 2 * m.singleton_part.len());
        }
    }

    #[test]
    fn star_models_for_claw() {
        let models = khypercycle_models_kmn(1, 3, 3).unwrap();
        assert_eq!(models.len(), 1);
        assert!(models[0].singleton_part.is_empty());
        assert!(models[0].model.values.iter().all(|v| *v == rat(1, 2)));
    }

    #[test]
    fn star_models_for_k17() {
        let models = khypercycle_models_kmn(1, 7, 3).unwrap();
        assert!(!models.is_empty());
        let g = Graph::complete_bipartite(1, 7).unwrap();
        let t = two_reg(&g).unwrap();
        for m in &models {
            assert!(t.scenario.is_probabilistic_model(&m.model).unwrap());
            // 4 deterministic contexts = 2 singleton nodes.
            assert_eq!(m.singleton_part.len(), 2);
            assert_eq!(m.num_indeterministic(&t.scenario), 3);
        }
    }

    #[test]
    fn star_models_for_k33() {
        let models = khypercycle_models_kmn(3, 3, 3).unwrap();
        let t = two_reg(&Graph::complete_bipartite(3, 3).unwrap()).unwrap();
        let all = enumerate_extremal_models_2reg(&t, &EnumOptions::default()).unwrap();
        let supports: BTreeSet<&Vec<usize>> = all.iter().map(|m| &m.support).collect();
        for m in &models {
            assert_eq!(m.deterministic_contexts(&t.scenario).len(), 6);
            assert!(supports.contains(&m.support));
        }
        assert!(khypercycle_models_kmn(3, 3, 4).is_err());
        assert!(khypercycle_models_kmn(2, 3, 3).is_err());
        assert!(khypercycle_models_kmn(3, 3, 5).is_err());
    }

    #[test]
    fn smallest_indeterministic_sizes() {
        let t = two_reg(&Graph::complete_bipartite(3, 3).unwrap()).unwrap();
        let models = enumerate_extremal_models_2reg(&t, &EnumOptions::default()).unwrap();
        assert_eq!(smallest_indeterministic_size(&t.scenario, &models).unwrap(), 3);

        let five = hypercycle(5);
        let models = enumerate_extremal_models(&five, &EnumOptions::default()).unwrap();
        assert_eq!(smallest_indeterministic_size(&five, &models).unwrap(), 5);

        let four = hypercycle(4);
        let models = enumerate_extremal_models(&four, &EnumOptions::default()).unwrap();
        assert!(smallest_indeterministic_size(&four, &models).is_err());
    }

    #[test]
    fn supports_recover_unique_restrictions() {
        let t = two_reg(&Graph::complete_bipartite(1, 5).unwrap()).unwrap();
        let models = enumerate_extremal_models_2reg(&t, &EnumOptions::default()).unwrap();
        for m in models.iter().take(6) {
            let s: BTreeSet<usize> = m.support.iter().copied().collect();
            let sub = t.scenario.induced_subscenario(&s).unwrap();
            match unique_model(&sub).unwrap() {
                UniqueModelOutcome::Unique(p) => {
                    let restricted: Vec<Rat> =
                        s.iter().map(|&w| m.model.values[w].clone()).collect();
                    assert_eq!(p.values, restricted);
                }
                other => panic!("support not unique: {other:?}"),
            }
        }
    }

    #[test]
    fn parallel_enumeration_agrees() {
        let t = two_reg(&Graph::complete_bipartite(1, 5).unwrap()).unwrap();
        let seq = enumerate_extremal_models(&t.scenario, &EnumOptions::default()).unwrap();
        let par = enumerate_extremal_models(
            &t.scenario,
            &EnumOptions {
                parallel: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(seq, par);
    }
}

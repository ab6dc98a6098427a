//! Structural invariants: exhaustive small-graph sweeps and randomized
//! property tests.

use std::collections::BTreeSet;

use proptest::prelude::*;

use ksc_core::colourability::{find_ks_colouring, parity_witness_general};
use ksc_core::extremal::{enumerate_extremal_models_2reg, EnumOptions};
use ksc_core::graphs::{edges_intersect, Graph};
use ksc_core::rational::{rat, Rat};
use ksc_core::scenario::ProbModel;
use ksc_core::two_reg::{is_hypercycle_scenario, matching_scenario, scenarios_isomorphic, two_reg};
use ksc_core::witness::{beta, QDist};
use num_traits::Zero;

/// All labeled graphs with `edges` edges and no isolated vertex, over all
/// vertex counts that admit one (any connectivity).
fn for_each_covered_graph(edges: usize, visit: &mut dyn FnMut(&Graph)) {
    for v in 2..=(2 * edges) {
        let all_pairs: Vec<(usize, usize)> = (0..v)
            .flat_map(|a| ((a + 1)..v).map(move |b| (a, b)))
            .collect();
        if all_pairs.len() < edges {
            continue;
        }
        let mut chosen: Vec<usize> = Vec::with_capacity(edges);
        combos(all_pairs.len(), edges, 0, &mut chosen, &mut |subset| {
            let mut touched = vec![false; v];
            for &i in subset {
                let (a, b) = all_pairs[i];
                touched[a] = true;
                touched[b] = true;
            }
            if touched.iter().all(|&t| t) {
                let edge_list: Vec<(usize, usize)> = subset.iter().map(|&i| all_pairs[i]).collect();
                let g = Graph::new(v, edge_list).unwrap();
                visit(&g);
            }
        });
    }
}

fn combos(n: usize, k: usize, start: usize, current: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    if current.len() == k {
        emit(current);
        return;
    }
    let remaining = k - current.len();
    for i in start..=(n - remaining) {
        current.push(i);
        combos(n, k, i + 1, current, emit);
        current.pop();
    }
}

fn is_cycle_graph(g: &Graph) -> Option<usize> {
    let n = g.num_vertices;
    if n < 3 || g.num_edges() != n {
        return None;
    }
    if !g.degrees().iter().all(|&d| d == 2) {
        return None;
    }
    if g.edge_components().len() != 1 {
        return None;
    }
    Some(n)
}

fn is_claw_or_triangle(g: &Graph) -> bool {
    let mut degrees = g.degrees();
    degrees.sort_unstable();
    (g.num_vertices == 4 && g.num_edges() == 3 && degrees == vec![1, 1, 1, 3])
        || (g.num_vertices == 3 && g.num_edges() == 3 && degrees == vec![2, 2, 2])
}

/// 2Reg(G) is a k-hypercycle (k >= 4) exactly when G is a k-cycle, and a
/// 3-hypercycle exactly when G is the claw or the triangle. Checked over
/// every graph with at most 5 edges and no isolated vertex.
#[test]
fn hypercycle_scenarios_come_only_from_cycles_and_claws() {
    let mut checked = 0usize;
    for edges in 1..=5 {
        for_each_covered_graph(edges, &mut |g| {
            let Ok(t) = two_reg(g) else {
                return; // an isolated edge: not a scenario
            };
            checked += 1;
            match is_hypercycle_scenario(&t.scenario) {
                Some(3) => assert!(is_claw_or_triangle(g), "false 3-hypercycle from {g:?}"),
                Some(k) => assert_eq!(is_cycle_graph(g), Some(k), "false {k}-hypercycle from {g:?}"),
                None => {
                    assert!(is_cycle_graph(g).is_none(), "missed cycle {g:?}");
                    assert!(!is_claw_or_triangle(g), "missed claw/triangle {g:?}");
                }
            }
        });
    }
    assert!(checked > 3_000, "sweep unexpectedly small: {checked}");
}

/// The pair-construction and the line-graph matching construction agree
/// on every graph in the sweep.
#[test]
fn matching_scenario_agrees_with_two_reg_everywhere() {
    for edges in 2..=4 {
        for_each_covered_graph(edges, &mut |g| {
            let Ok(t) = two_reg(g) else {
                return;
            };
            let m = matching_scenario(g).unwrap();
            assert_eq!(t.scenario.hyperedges, m.hyperedges, "structural mismatch for {g:?}");
        });
    }
    // The nontrivial isomorphism route on a few larger graphs.
    for g in [
        Graph::complete_bipartite(3, 3).unwrap(),
        Graph::complete_bipartite(1, 6).unwrap(),
        Graph::complete(5).unwrap(),
    ] {
        let t = two_reg(&g).unwrap();
        let m = matching_scenario(&g).unwrap();
        assert!(scenarios_isomorphic(&t.scenario, &m).is_some());
    }
}

/// Strategy: a connected-ish random graph given by a vertex count and a
/// set of edges; isolated-edge graphs are filtered at use sites.
fn arb_graph() -> impl Strategy<Value = Graph> {
    (3usize..8).prop_flat_map(|v| {
        let pairs: Vec<(usize, usize)> = (0..v)
            .flat_map(|a| ((a + 1)..v).map(move |b| (a, b)))
            .collect();
        let len = pairs.len();
        proptest::collection::btree_set(0..len, 2..=len.min(9)).prop_map(move |idx| {
            let edges: Vec<(usize, usize)> = idx.iter().map(|&i| pairs[i]).collect();
            let used: BTreeSet<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
            // Compact to the touched vertices so there are no isolated ones.
            let remap: std::collections::BTreeMap<usize, usize> =
                used.iter().enumerate().map(|(new, &old)| (old, new)).collect();
            let edges = edges.iter().map(|&(a, b)| (remap[&a], remap[&b])).collect();
            Graph::new(used.len(), edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn two_reg_profile_identities(g in arb_graph()) {
        let Ok(t) = two_reg(&g) else {
            return Ok(()); // isolated edge
        };
        let h = &t.scenario;
        prop_assert!(h.validate_report().is_valid());
        prop_assert!(h.is_regular(2));
        prop_assert_eq!(h.num_contexts(), g.num_edges());
        let pairs = (0..g.edges.len())
            .flat_map(|i| ((i + 1)..g.edges.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| edges_intersect(g.edges[i], g.edges[j]))
            .count();
        prop_assert_eq!(h.num_nodes, pairs);

        let p = h.profile();
        let weighted: usize = p.degree_histogram.iter().map(|(k, n)| k * n).sum();
        prop_assert_eq!(weighted, p.incidence_sum);
        let n1 = p.degree_histogram.get(&1).copied().unwrap_or(0);
        prop_assert_eq!(p.multi_context_nodes, p.num_nodes - n1);
        // m <= (sum of context sizes)/2 for every scenario.
        prop_assert!(2 * p.multi_context_nodes <= p.incidence_sum);
    }

    #[test]
    fn extend_model_round_trips(g in arb_graph()) {
        let Ok(t) = two_reg(&g) else {
            return Ok(());
        };
        let h = &t.scenario;
        let models = match enumerate_extremal_models_2reg(&t, &EnumOptions::default()) {
            Ok(m) => m,
            Err(_) => return Ok(()),
        };
        for m in models.iter().take(4) {
            let s: BTreeSet<usize> = m.support.iter().copied().collect();
            let sub = h.induced_subscenario(&s).unwrap();
            let restricted = ProbModel::new(
                s.iter().map(|&w| m.model.values[w].clone()).collect(),
            );
            prop_assert!(sub.is_probabilistic_model(&restricted).unwrap());
            let back = h.extend_model(&s, &restricted).unwrap();
            prop_assert_eq!(&back.values, &m.model.values);
        }
    }

    #[test]
    fn parity_certificates_are_sound(g in arb_graph()) {
        let Ok(t) = two_reg(&g) else {
            return Ok(());
        };
        if parity_witness_general(&t.scenario).is_some() {
            prop_assert!(find_ks_colouring(&t.scenario, 50_000_000).unwrap().is_none());
        }
    }

    #[test]
    fn convex_mixtures_never_beat_beta(
        picks in proptest::collection::vec((0usize..146, 1u32..20), 2..6)
    ) {
        // Vertices of the K33 polytope under uniform q: any convex
        // combination scores at most beta.
        let t = two_reg(&Graph::complete_bipartite(3, 3).unwrap()).unwrap();
        let models = enumerate_extremal_models_2reg(&t, &EnumOptions::default()).unwrap();
        let h = &t.scenario;
        let q = QDist::uniform(&(0..9).collect::<Vec<_>>()).unwrap();
        let bound = beta(h, &q, &models).unwrap();

        let total: u32 = picks.iter().map(|&(_, w)| w).sum();
        let mut mixed = vec![Rat::zero(); h.num_nodes];
        for &(idx, w) in &picks {
            let model = &models[idx % models.len()];
            let weight = rat(w as i64, total as i64);
            for (slot, v) in mixed.iter_mut().zip(&model.model.values) {
                *slot = &*slot + &weight * v;
            }
        }
        let mix = ProbModel::new(mixed);
        prop_assert!(h.is_probabilistic_model(&mix).unwrap());
        let score: Rat = (0..9)
            .map(|f| {
                let best = h.hyperedges[f]
                    .iter()
                    .map(|&w| mix.values[w].clone())
                    .max()
                    .unwrap();
                q.weight(f) * best
            })
            .sum();
        prop_assert!(score <= bound);
    }
}

//! Minimally indeterministic sets of contexts (MISCs). A set of contexts
//! is a MISC when no extremal model makes all of them deterministic; an
//! irreducible MISC (irrMISC) contains no smaller MISC. For 2Reg of a
//! complete bipartite graph these are exactly the (minimal) edge covers
//! of the source graph.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremal::ExtremalModel;
use crate::graphs::Graph;
use crate::rational::{rat, Rat};
use crate::scenario::Scenario;

/// A sorted set of context (hyperedge) indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ContextSet {
    pub indices: Vec<usize>,
}

impl ContextSet {
    pub fn new(h: &Scenario, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        for w in indices.windows(2) {
            if w[0] == w[1] {
                return Err(Error::invalid(format!("duplicate context index {}", w[0])));
            }
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= h.num_contexts()) {
            return Err(Error::invalid(format!("context index {bad} out of range")));
        }
        Ok(ContextSet { indices })
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    fn mask(&self) -> u128 {
        self.indices.iter().fold(0u128, |m, &i| m | 1 << i)
    }
}

/// Verdict on one context set, with witnessing data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MiscReport {
    pub is_misc: bool,
    pub is_irr: bool,
    /// An extremal model making every context in the set deterministic;
    /// present exactly when the set is not a MISC.
    pub counterexample: Option<ExtremalModel>,
    /// A proper-subset MISC, present when the set is a MISC but reducible.
    pub reducing_subset: Option<ContextSet>,
    /// Largest max-probability of the one remaining indeterministic
    /// context, over extremal models making all other contexts in the set
    /// deterministic.
    #[serde(with = "rat_option", default)]
    pub p_max: Option<Rat>,
}

mod rat_option {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &Option<Rat>,
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(r) => ser.serialize_some(&crate::rational::rat_to_string(r)),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<Option<Rat>, D::Error> {
        let raw = Option::<String>::deserialize(de)?;
        raw.map(|s| crate::rational::parse_rat(&s).map_err(de::Error::custom))
            .transpose()
    }
}

/// Per-model bitmask of deterministic contexts. A context set is a MISC
/// exactly when it fits inside no mask.
fn deterministic_masks(h: &Scenario, extremals: &[ExtremalModel]) -> Vec<u128> {
    extremals
        .iter()
        .map(|m| {
            m.deterministic_contexts(h)
                .into_iter()
                .fold(0u128, |acc, e| acc | 1 << e)
        })
        .collect()
}

/// Is `c` a MISC: can no extremal model make every context in `c`
/// deterministic? `extremals` must be the complete extremal-model list.
pub fn is_misc(h: &Scenario, c: &ContextSet, extremals: &[ExtremalModel]) -> Result<MiscReport> {
    if c.is_empty() {
        return Err(Error::invalid("empty context set"));
    }
    let mask = c.mask();
    let counterexample = extremals
        .iter()
        .find(|m| {
            let det = m
                .deterministic_contexts(h)
                .into_iter()
                .fold(0u128, |acc, e| acc | 1 << e);
            mask & !det == 0
        })
        .cloned();
    let is_misc = counterexample.is_none();
    let p_max = if is_misc { p_max(h, c, extremals) } else { None };
    Ok(MiscReport {
        is_misc,
        is_irr: false,
        counterexample,
        reducing_subset: None,
        p_max,
    })
}

/// Largest max-probability of the single indeterministic context, over
/// extremal models that make all but one context of the MISC
/// deterministic.
fn p_max(h: &Scenario, c: &ContextSet, extremals: &[ExtremalModel]) -> Option<Rat> {
    let mask = c.mask();
    let mut best: Option<Rat> = None;
    for m in extremals {
        let det = m
            .deterministic_contexts(h)
            .into_iter()
            .fold(0u128, |acc, e| acc | 1 << e);
        let open = mask & !det;
        if open.count_ones() == 1 {
            let f = open.trailing_zeros() as usize;
            let z = m.zeta(f).clone();
            best = Some(match best {
                Some(b) if b >= z => b,
                _ => z,
            });
        }
    }
    best
}

/// Is `c` an irreducible MISC? By monotonicity (supersets of MISCs are
/// MISCs) it suffices to check subsets of size `|c| - 1`.
pub fn is_irr_misc(h: &Scenario, c: &ContextSet, extremals: &[ExtremalModel]) -> Result<MiscReport> {
    let mut report = is_misc(h, c, extremals)?;
    if !report.is_misc {
        return Ok(report);
    }
    let masks = deterministic_masks(h, extremals);
    for drop in &c.indices {
        let sub: Vec<usize> = c.indices.iter().copied().filter(|i| i != drop).collect();
        if sub.is_empty() {
            continue;
        }
        let sub_mask = sub.iter().fold(0u128, |m, &i| m | 1 << i);
        let sub_is_misc = !masks.iter().any(|det| sub_mask & !det == 0);
        if sub_is_misc {
            report.reducing_subset = Some(ContextSet { indices: sub });
            return Ok(report);
        }
    }
    report.is_irr = true;
    Ok(report)
}

/// All irrMISCs, ascending by size then lexicographically. Ascending
/// subset scan with monotonicity pruning: supersets of a known MISC are
/// MISCs but never irreducible, so they are skipped.
pub fn enumerate_irr_miscs(
    h: &Scenario,
    extremals: &[ExtremalModel],
    budget: u64,
) -> Result<Vec<ContextSet>> {
    let n = h.num_contexts();
    if n > 24 {
        return Err(Error::invalid(
            "irrMISC enumeration is desk-scale only (at most 24 contexts)",
        ));
    }
    let masks = deterministic_masks(h, extremals);
    let mut spent: u64 = 0;
    let mut found_miscs: Vec<u128> = Vec::new();
    let mut result: Vec<(usize, Vec<usize>)> = Vec::new();
    // A subset's mask is numerically smaller than any strict superset's,
    // so scanning masks in order visits every MISC after all its subsets;
    // a MISC recorded here therefore contains no smaller MISC.
    for mask in 1u128..(1u128 << n) {
        spent += 1;
        if spent > budget {
            return Err(Error::BudgetExceeded {
                spent,
                limit: budget,
            });
        }
        if found_miscs.iter().any(|m| m & !mask == 0) {
            continue; // contains a known MISC: reducible
        }
        let is_misc = !masks.iter().any(|det| mask & !det == 0);
        if is_misc {
            found_miscs.push(mask);
            let indices: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            result.push((indices.len(), indices));
        }
    }
    result.sort();
    Ok(result
        .into_iter()
        .map(|(_, indices)| ContextSet { indices })
        .collect())
}

/// Closed-form irrMISCs of 2Reg(K_{m,n}) for odd `mn > 1`. For a star
/// (m = 1 or n = 1) these are all context sets of size exactly mn - 2;
/// otherwise they correspond to the minimal edge covers of K_{m,n},
/// context i naming edge i.
pub fn irr_miscs_kmn(m: usize, n: usize) -> Result<Vec<ContextSet>> {
    if m * n <= 1 || (m * n).is_multiple_of(2) {
        return Err(Error::invalid("requires odd m*n > 1"));
    }
    if m == 1 || n == 1 {
        let total = m * n;
        let size = total - 2;
        let mut out = Vec::new();
        let mut current = Vec::new();
        choose(total, size, 0, &mut current, &mut out);
        return Ok(out.into_iter().map(|indices| ContextSet { indices }).collect());
    }
    let g = Graph::complete_bipartite(m, n)?;
    let covers = g.minimal_edge_covers()?;
    Ok(covers
        .into_iter()
        .map(|c| ContextSet { indices: c.indices })
        .collect())
}

fn choose(n: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if current.len() == k {
        out.push(current.clone());
        return;
    }
    for i in start..n {
        current.push(i);
        choose(n, k, i + 1, current, out);
        current.pop();
    }
}

/// The guaranteed MISC size `n - k + 1`, where `k` is the smallest number
/// of indeterministic contexts over extremal models: any set of that many
/// contexts is a MISC. Verified against the deterministic masks before
/// returning.
pub fn sufficient_misc(h: &Scenario, extremals: &[ExtremalModel]) -> Result<usize> {
    let k = crate::extremal::smallest_indeterministic_size(h, extremals)?;
    let n = h.num_contexts();
    let size = n - k + 1;
    let masks = deterministic_masks(h, extremals);
    // Every extremal model leaves at least k contexts indeterministic, so
    // no deterministic mask can contain a set of n-k+1 contexts.
    debug_assert!(masks.iter().all(|m| (m.count_ones() as usize) <= n - k));
    Ok(size)
}

/// Convenience for uniform-q inequalities: the bound
/// `1 - (1 - p_max) / c` for a MISC of `c` contexts.
pub fn misc_upper_bound(c: usize, p_max: &Rat) -> Rat {
    let one = rat(1, 1);
    &one - (&one - p_max) / rat(c as i64, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::{enumerate_extremal_models_2reg, EnumOptions};
    use crate::two_reg::two_reg;

    fn k33() -> (Scenario, Vec<ExtremalModel>) {
        let t = two_reg(&Graph::complete_bipartite(3, 3).unwrap()).unwrap();
        let models = enumerate_extremal_models_2reg(&t, &EnumOptions::default()).unwrap();
        (t.scenario, models)
    }

    /// Edge (i, j-bar) of K_{3,3} has index 3i + j under the generator's
    /// ordering.
    fn e(i: usize, j: usize) -> usize {
        3 * i + j
    }

    #[test]
    fn k33_matching_is_misc() {
        let (h, models) = k33();
        let c = ContextSet::new(&h, vec![e(0, 0), e(1, 1), e(2, 2)]).unwrap();
        let report = is_misc(&h, &c, &models).unwrap();
        assert!(report.is_misc);
        assert_eq!(report.p_max, Some(rat(1, 2)));
    }

    #[test]
    fn k33_pairs_are_not_miscs() {
        let (h, models) = k33();
        for a in 0..9 {
            for b in (a + 1)..9 {
                let c = ContextSet::new(&h, vec![a, b]).unwrap();
                let report = is_misc(&h, &c, &models).unwrap();
                assert!(!report.is_misc);
                assert!(report.counterexample.is_some());
            }
        }
    }

    #[test]
    fn all_contexts_form_a_misc() {
        let (h, models) = k33();
        let c = ContextSet::new(&h, (0..9).collect()).unwrap();
        let report = is_irr_misc(&h, &c, &models).unwrap();
        assert!(report.is_misc);
        assert!(!report.is_irr);
        assert!(report.reducing_subset.is_some());
    }

    #[test]
    fn k33_irr_misc4_from_listed_example() {
        let (h, models) = k33();
        // {(3,1̄),(2,1̄),(1,2̄),(1,3̄)} in 1-based labels.
        let c = ContextSet::new(&h, vec![e(2, 0), e(1, 0), e(0, 1), e(0, 2)]).unwrap();
        let report = is_irr_misc(&h, &c, &models).unwrap();
        assert!(report.is_misc);
        assert!(report.is_irr);
    }

    #[test]
    fn k33_irr_misc_census() {
        let (h, models) = k33();
        let irr = enumerate_irr_miscs(&h, &models, 10_000_000).unwrap();
        assert_eq!(irr.len(), 15);
        assert_eq!(irr.iter().filter(|c| c.len() == 3).count(), 6);
        assert_eq!(irr.iter().filter(|c| c.len() == 4).count(), 9);
        // Size-3 irrMISCs are exactly the perfect matchings.
        let g = Graph::complete_bipartite(3, 3).unwrap();
        let matchings: Vec<Vec<usize>> = g
            .perfect_matchings()
            .into_iter()
            .map(|s| s.indices)
            .collect();
        let small: Vec<Vec<usize>> = irr
            .iter()
            .filter(|c| c.len() == 3)
            .map(|c| c.indices.clone())
            .collect();
        assert_eq!(small, matchings);
    }

    #[test]
    fn closed_form_matches_enumeration_for_k33() {
        let (h, models) = k33();
        let by_enum = enumerate_irr_miscs(&h, &models, 10_000_000).unwrap();
        let by_form = irr_miscs_kmn(3, 3).unwrap();
        let mut a = by_enum.clone();
        let mut b = by_form.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn closed_form_matches_enumeration_for_stars() {
        for n in [3, 5] {
            let t = two_reg(&Graph::complete_bipartite(1, n).unwrap()).unwrap();
            let models = enumerate_extremal_models_2reg(&t, &EnumOptions::default()).unwrap();
            let by_enum = enumerate_irr_miscs(&t.scenario, &models, 10_000_000).unwrap();
            let mut by_form = irr_miscs_kmn(1, n).unwrap();
            by_form.sort();
            assert_eq!(by_enum, by_form);
            assert_eq!(by_enum.len(), n * (n - 1) / 2);
            assert!(by_enum.iter().all(|c| c.len() == n - 2));
        }
    }

    #[test]
    fn sufficient_misc_sizes() {
        let (h, models) = k33();
        assert_eq!(sufficient_misc(&h, &models).unwrap(), 7);
        // Every 7-subset is a MISC.
        let mut subsets = Vec::new();
        choose(9, 7, 0, &mut Vec::new(), &mut subsets);
        unreachable_subsets(&h, &models, subsets);
    }

    fn unreachable_subsets(h: &Scenario, models: &[ExtremalModel], subsets: Vec<Vec<usize>>) {
        for s in subsets {
            let c = ContextSet::new(h, s).unwrap();
            assert!(is_misc(h, &c, models).unwrap().is_misc);
        }
    }

    #[test]
    fn misc_monotonicity() {
        // Supersets of MISCs are MISCs; checked over all subsets for a
        // star scenario.
        let t = two_reg(&Graph::complete_bipartite(1, 5).unwrap()).unwrap();
        let models = enumerate_extremal_models_2reg(&t, &EnumOptions::default()).unwrap();
        let h = &t.scenario;
        let n = h.num_contexts();
        let mut misc_masks = Vec::new();
        for mask in 1u32..(1 << n) {
            let indices: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let c = ContextSet::new(h, indices).unwrap();
            if is_misc(h, &c, &models).unwrap().is_misc {
                misc_masks.push(mask);
            }
        }
        for &m1 in &misc_masks {
            for mask in 1u32..(1 << n) {
                if mask & m1 == m1 {
                    assert!(misc_masks.contains(&mask));
                }
            }
        }
    }

    #[test]
    fn empty_set_is_invalid() {
        let (h, models) = k33();
        let c = ContextSet { indices: vec![] };
        assert!(is_misc(&h, &c, &models).is_err());
    }

    #[test]
    fn upper_bound_formula() {
        assert_eq!(misc_upper_bound(7, &rat(1, 2)), rat(13, 14));
        assert_eq!(misc_upper_bound(4, &rat(1, 2)), rat(7, 8));
    }
}

//! Noise-robust noncontextuality witnesses. For a KS-uncolourable
//! scenario, every ontic state corresponds to an indeterministic extremal
//! model, so the q-weighted average of per-context max-probabilities is
//! bounded by `beta = max_lambda sum_i q_i zeta(M_i, lambda) < 1` whenever
//! q is supported on a MISC. Operational data violating `Corr_q <= beta`
//! witnesses contextuality.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremal::ExtremalModel;
use crate::lp::{self, StandardForm};
use crate::misc::{self, ContextSet};
use crate::rational::{rat, rat_map, rat_matrix, rat_string, rat_to_f64, rat_to_string, Rat};
use crate::scenario::Scenario;

/// A probability distribution over context indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QDist {
    #[serde(with = "rat_map")]
    pub weights: BTreeMap<usize, Rat>,
}

impl QDist {
    pub fn new(weights: BTreeMap<usize, Rat>) -> Result<Self> {
        if weights.values().any(|w| w.is_negative()) {
            return Err(Error::invalid("q weights must be nonnegative"));
        }
        let total: Rat = weights.values().sum();
        if !total.is_one() {
            return Err(Error::invalid(format!(
                "q weights must sum to 1, got {}",
                rat_to_string(&total)
            )));
        }
        Ok(QDist { weights })
    }

    pub fn uniform(contexts: &[usize]) -> Result<Self> {
        if contexts.is_empty() {
            return Err(Error::invalid("uniform q needs at least one context"));
        }
        let w = rat(1, contexts.len() as i64);
        Ok(QDist {
            weights: contexts.iter().map(|&i| (i, w.clone())).collect(),
        })
    }

    /// Context indices carrying strictly positive weight.
    pub fn support(&self) -> Vec<usize> {
        self.weights
            .iter()
            .filter(|(_, w)| w.is_positive())
            .map(|(&i, _)| i)
            .collect()
    }

    pub fn weight(&self, i: usize) -> Rat {
        self.weights.get(&i).cloned().unwrap_or_else(Rat::zero)
    }
}

/// Max node probability of context `f` under an extremal model.
pub fn zeta(model: &ExtremalModel, f: usize) -> Rat {
    model.zeta(f).clone()
}

/// Weighted max-predictability: the exact maximum of
/// `sum_i q_i zeta(M_i, lambda)` over the extremal models. Errors on
/// KS-colourable scenarios (a deterministic model exists), where the bound
/// is undefined.
pub fn beta(h: &Scenario, q: &QDist, extremals: &[ExtremalModel]) -> Result<Rat> {
    if let Some(&bad) = q.support().iter().find(|&&i| i >= h.num_contexts()) {
        return Err(Error::invalid(format!("context {bad} out of range")));
    }
    if extremals.is_empty() {
        return Err(Error::invalid("scenario admits no probabilistic model"));
    }
    if extremals.iter().any(|m| m.is_deterministic()) {
        return Err(Error::UndefinedBeta);
    }
    Ok(weighted_zeta_max(q, extremals).1)
}

fn weighted_zeta(q: &QDist, model: &ExtremalModel) -> Rat {
    q.weights
        .iter()
        .map(|(&i, w)| w * model.zeta(i))
        .sum()
}

fn weighted_zeta_max(q: &QDist, extremals: &[ExtremalModel]) -> (usize, Rat) {
    extremals
        .iter()
        .enumerate()
        .map(|(idx, m)| (idx, weighted_zeta(q, m)))
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .expect("nonempty extremal list")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum Derivation {
    /// Exact maximization over the extremal models.
    ExactMax,
    /// The exact maximum coincides with the closed-form MISC bound
    /// `1 - (1 - p_max) / c` at the guaranteed MISC size `c = n - k + 1`.
    ClosedFormMisc {
        k: usize,
        #[serde(with = "rat_string")]
        p_max: Rat,
        c: usize,
    },
}

/// A noncontextuality inequality `Corr_q <= beta` for one context set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Inequality {
    pub scenario: Scenario,
    pub context_set: ContextSet,
    pub q: QDist,
    #[serde(with = "rat_string")]
    pub beta: Rat,
    pub beta_decimal: f64,
    pub derivation: Derivation,
    /// Human-readable statement of the bound.
    pub bound_expression: String,
}

/// Builds the inequality for `q` supported exactly on `c`. When `c` is a
/// MISC of the guaranteed size `n - k + 1` with uniform q, the closed-form
/// bound is cross-checked against the exact maximum.
pub fn make_inequality(
    h: &Scenario,
    c: &ContextSet,
    q: &QDist,
    extremals: &[ExtremalModel],
) -> Result<Inequality> {
    if q.support() != c.indices {
        return Err(Error::invalid(
            "q must be supported exactly on the context set",
        ));
    }
    let beta_value = beta(h, q, extremals)?;
    let report = misc::is_misc(h, c, extremals)?;
    // beta < 1 exactly when the support is a MISC.
    debug_assert_eq!(beta_value < Rat::one(), report.is_misc);

    let n = h.num_contexts();
    let k = crate::extremal::smallest_indeterministic_size(h, extremals)?;
    let uniform = QDist::uniform(&c.indices)?;
    let mut derivation = Derivation::ExactMax;
    let mut bound_expression = format!("Corr_q <= {}", rat_to_string(&beta_value));
    if report.is_misc && c.len() == n - k + 1 && *q == uniform {
        if let Some(p_max) = report.p_max.clone() {
            let closed = misc::misc_upper_bound(c.len(), &p_max);
            if beta_value > closed {
                return Err(Error::invalid(
                    "internal inconsistency: exact maximum exceeds the closed-form bound",
                ));
            }
            if beta_value == closed {
                bound_expression = format!(
                    "Corr_q <= 1 - (1 - {})/{} = {}",
                    rat_to_string(&p_max),
                    c.len(),
                    rat_to_string(&beta_value)
                );
                derivation = Derivation::ClosedFormMisc {
                    k,
                    p_max,
                    c: c.len(),
                };
            }
        }
    }
    Ok(Inequality {
        scenario: h.clone(),
        context_set: c.clone(),
        q: q.clone(),
        beta_decimal: rat_to_f64(&beta_value),
        beta: beta_value,
        derivation,
        bound_expression,
    })
}

/// Joint source-measurement statistics for one context: entry `[m][s]` is
/// `p(m, s | M, S)`. Column sums give the source marginal `p(s|S)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextData {
    pub index: usize,
    #[serde(with = "rat_matrix")]
    pub joint: Vec<Vec<Rat>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataTable {
    pub contexts: Vec<ContextData>,
}

impl DataTable {
    pub fn context(&self, index: usize) -> Option<&ContextData> {
        self.contexts.iter().find(|c| c.index == index)
    }

    /// Entries in [0,1], square matrix, total mass exactly 1 per context.
    pub fn validate(&self) -> Result<()> {
        for ctx in &self.contexts {
            let d = ctx.joint.len();
            if d == 0 || ctx.joint.iter().any(|row| row.len() != d) {
                return Err(Error::invalid(format!(
                    "context {}: joint matrix must be square and nonempty",
                    ctx.index
                )));
            }
            let mut total = Rat::zero();
            for row in &ctx.joint {
                for v in row {
                    if v.is_negative() || *v > Rat::one() {
                        return Err(Error::invalid(format!(
                            "context {}: entry {} outside [0,1]",
                            ctx.index,
                            rat_to_string(v)
                        )));
                    }
                    total += v;
                }
            }
            if !total.is_one() {
                return Err(Error::invalid(format!(
                    "context {}: joint mass {} != 1",
                    ctx.index,
                    rat_to_string(&total)
                )));
            }
        }
        Ok(())
    }

    /// Source marginal `p(s|S)` as column sums.
    pub fn source_marginal(&self, index: usize) -> Option<Vec<Rat>> {
        let ctx = self.context(index)?;
        let d = ctx.joint.len();
        Some(
            (0..d)
                .map(|s| ctx.joint.iter().map(|row| &row[s]).sum())
                .collect(),
        )
    }

    /// Perfectly correlated table: mass `1/d` on each diagonal entry.
    pub fn perfect(h: &Scenario, contexts: &[usize]) -> Self {
        let contexts = contexts
            .iter()
            .map(|&i| {
                let d = h.hyperedges[i].len();
                let w = rat(1, d as i64);
                let joint = (0..d)
                    .map(|m| {
                        (0..d)
                            .map(|s| if m == s { w.clone() } else { Rat::zero() })
                            .collect()
                    })
                    .collect();
                ContextData { index: i, joint }
            })
            .collect();
        DataTable { contexts }
    }

    /// Uniform uncorrelated table: every entry `1/d^2`.
    pub fn uniform(h: &Scenario, contexts: &[usize]) -> Self {
        let contexts = contexts
            .iter()
            .map(|&i| {
                let d = h.hyperedges[i].len();
                let w = rat(1, (d * d) as i64);
                let joint = (0..d).map(|_| vec![w.clone(); d]).collect();
                ContextData { index: i, joint }
            })
            .collect();
        DataTable { contexts }
    }

    /// Convex mixture `(1 - eps) * self + eps * other`, context by context.
    pub fn mix(&self, other: &DataTable, eps: &Rat) -> Result<DataTable> {
        let mut contexts = Vec::with_capacity(self.contexts.len());
        for ctx in &self.contexts {
            let o = other.context(ctx.index).ok_or_else(|| {
                Error::invalid(format!("context {} missing from mixture partner", ctx.index))
            })?;
            if o.joint.len() != ctx.joint.len() {
                return Err(Error::invalid("mixture dimension mismatch"));
            }
            let stay = Rat::one() - eps;
            let joint = ctx
                .joint
                .iter()
                .zip(&o.joint)
                .map(|(ra, rb)| {
                    ra.iter()
                        .zip(rb)
                        .map(|(a, b)| &stay * a + eps * b)
                        .collect()
                })
                .collect();
            contexts.push(ContextData {
                index: ctx.index,
                joint,
            });
        }
        Ok(DataTable { contexts })
    }
}

/// Source-measurement correlation: `sum_i q_i sum_x p(m_i=x, s_i=x)`.
pub fn corr(data: &DataTable, q: &QDist) -> Result<Rat> {
    data.validate()?;
    let mut total = Rat::zero();
    for (&i, w) in &q.weights {
        if w.is_zero() {
            continue;
        }
        let ctx = data
            .context(i)
            .ok_or_else(|| Error::invalid(format!("context {i} missing from data table")))?;
        let diag: Rat = (0..ctx.joint.len()).map(|x| &ctx.joint[x][x]).sum();
        total += w * diag;
    }
    Ok(total)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ViolationReport {
    #[serde(with = "rat_string")]
    pub corr: Rat,
    pub corr_decimal: f64,
    #[serde(with = "rat_string")]
    pub beta: Rat,
    pub beta_decimal: f64,
    pub violated: bool,
    #[serde(with = "rat_string")]
    pub margin: Rat,
    pub margin_decimal: f64,
}

/// Exact comparison of measured correlations against an inequality.
pub fn evaluate(data: &DataTable, ineq: &Inequality) -> Result<ViolationReport> {
    let corr_value = corr(data, &ineq.q)?;
    let margin = &corr_value - &ineq.beta;
    Ok(ViolationReport {
        violated: corr_value > ineq.beta,
        corr_decimal: rat_to_f64(&corr_value),
        corr: corr_value,
        beta_decimal: rat_to_f64(&ineq.beta),
        beta: ineq.beta.clone(),
        margin_decimal: rat_to_f64(&margin),
        margin,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NcFailure {
    LambdaIntersectionEmpty,
    PhenConstraintInfeasible,
}

/// An attempt at the saturating noncontextual model. The response
/// functions are the extremal models themselves, referenced by index into
/// the supplied list; retrodictive distributions are deterministic at the
/// per-context argmax outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NcModelAttempt {
    /// Indices (into the extremal list) of the ontic states attaining beta.
    pub lambda_max: Vec<usize>,
    #[serde(with = "rat_string")]
    pub beta: Rat,
    /// Chosen retrodiction outcome per (lambda in lambda_max, context).
    pub mu_retro: Vec<Vec<usize>>,
    /// Argmax ties per lambda: contexts where the tie-break picked the
    /// lowest of several maximizing outcomes.
    pub ties: Vec<Vec<usize>>,
    pub feasible: bool,
    pub failure_reason: Option<NcFailure>,
    /// Distribution over lambda_max when feasible (same order).
    #[serde(with = "rat_map")]
    pub nu: BTreeMap<usize, Rat>,
    /// Farkas certificate of the weight system when infeasible.
    #[serde(with = "crate::rational::rat_vec")]
    pub farkas: Vec<Rat>,
    /// Reconstructed operational statistics when feasible.
    pub reconstruction: Option<DataTable>,
}

/// Constructs a noncontextual model saturating `Corr_q = beta` when the
/// phenomenological constraints permit. Retrodictions are set
/// deterministically at each context's argmax outcome (lowest index on
/// ties); the ontic weights `nu`, supported on the beta-attaining states,
/// must then reproduce the requested source marginals. Both failure modes
/// are legitimate outcomes and carry their evidence.
pub fn build_saturating_nc_model(
    h: &Scenario,
    q: &QDist,
    source_marginals: Option<&BTreeMap<usize, Vec<Rat>>>,
    extremals: &[ExtremalModel],
) -> Result<NcModelAttempt> {
    let beta_value = beta(h, q, extremals)?;
    let n = h.num_contexts();

    let marginals: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let d = h.hyperedges[i].len();
            match source_marginals.and_then(|m| m.get(&i)) {
                Some(given) => given.clone(),
                None => vec![rat(1, d as i64); d],
            }
        })
        .collect();
    for (i, marg) in marginals.iter().enumerate() {
        let d = h.hyperedges[i].len();
        if marg.len() != d {
            return Err(Error::invalid(format!(
                "context {i}: expected {d} marginal entries, got {}",
                marg.len()
            )));
        }
        if marg.iter().any(|v| v.is_negative()) || !marg.iter().sum::<Rat>().is_one() {
            return Err(Error::invalid(format!(
                "context {i}: source marginal must be a probability distribution"
            )));
        }
    }

    let lambda_max: Vec<usize> = extremals
        .iter()
        .enumerate()
        .filter(|(_, m)| weighted_zeta(q, m) == beta_value)
        .map(|(idx, _)| idx)
        .collect();

    // Deterministic retrodictions at the argmax outcome per context.
    let mut mu_retro = Vec::with_capacity(lambda_max.len());
    let mut ties = Vec::with_capacity(lambda_max.len());
    for &idx in &lambda_max {
        let model = &extremals[idx];
        let mut per_context = Vec::with_capacity(n);
        let mut tied = Vec::new();
        for (i, f) in h.hyperedges.iter().enumerate() {
            let best = model.zeta(i);
            let argmax = f
                .iter()
                .position(|&w| model.model.values[w] == *best)
                .expect("zeta is attained");
            let num_best = f
                .iter()
                .filter(|&&w| model.model.values[w] == *best)
                .count();
            if num_best > 1 {
                tied.push(i);
            }
            per_context.push(argmax);
        }
        mu_retro.push(per_context);
        ties.push(tied);
    }

    // With deterministic retrodictions every beta-attaining state lies in
    // Lambda_detP, so the intersection is empty only if Lambda_max is.
    if lambda_max.is_empty() {
        return Ok(NcModelAttempt {
            lambda_max,
            beta: beta_value,
            mu_retro,
            ties,
            feasible: false,
            failure_reason: Some(NcFailure::LambdaIntersectionEmpty),
            nu: BTreeMap::new(),
            farkas: Vec::new(),
            reconstruction: None,
        });
    }

    // Weight system: for every context i and outcome s,
    //   sum_{lambda: y_i(lambda) = s} nu(lambda) = p(s_i | S_i).
    let mut sf = StandardForm::new(lambda_max.len());
    for i in 0..n {
        for (s, marginal) in marginals[i].iter().enumerate() {
            let coeffs: Vec<Rat> = (0..lambda_max.len())
                .map(|l| {
                    if mu_retro[l][i] == s {
                        Rat::one()
                    } else {
                        Rat::zero()
                    }
                })
                .collect();
            sf.push_row(coeffs, marginal.clone());
        }
    }
    match lp::feasible_point(&sf) {
        Err(farkas) => {
            debug_assert!(lp::verify_farkas(&sf, &farkas));
            Ok(NcModelAttempt {
                lambda_max,
                beta: beta_value,
                mu_retro,
                ties,
                feasible: false,
                failure_reason: Some(NcFailure::PhenConstraintInfeasible),
                nu: BTreeMap::new(),
                farkas,
                reconstruction: None,
            })
        }
        Ok(weights) => {
            let nu: BTreeMap<usize, Rat> = lambda_max
                .iter()
                .copied()
                .zip(weights.iter().cloned())
                .collect();
            // Reconstruction: p(m,s|M_i,S_i) =
            //   sum_{lambda: y_i = s} xi(m | M_i, lambda) nu(lambda).
            let contexts = (0..n)
                .map(|i| {
                    let f = &h.hyperedges[i];
                    let d = f.len();
                    let mut joint = vec![vec![Rat::zero(); d]; d];
                    for (l, &idx) in lambda_max.iter().enumerate() {
                        let s = mu_retro[l][i];
                        let weight = &weights[l];
                        if weight.is_zero() {
                            continue;
                        }
                        for (m, &w) in f.iter().enumerate() {
                            let xi = &extremals[idx].model.values[w];
                            if !xi.is_zero() {
                                joint[m][s] = &joint[m][s] + xi * weight;
                            }
                        }
                    }
                    ContextData { index: i, joint }
                })
                .collect();
            let table = DataTable { contexts };
            debug_assert!(table.validate().is_ok());
            Ok(NcModelAttempt {
                lambda_max,
                beta: beta_value,
                mu_retro,
                ties,
                feasible: true,
                failure_reason: None,
                nu,
                farkas: Vec::new(),
                reconstruction: Some(table),
            })
        }
    }
}

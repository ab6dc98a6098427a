//! The end-to-end analysis report: graph -> scenario -> colourability ->
//! extremal models -> irreducible MISCs with their inequality bounds.
//! Shared by the CLI and the C API.

use serde::{Deserialize, Serialize};

use crate::colourability::{parity_verdict_2regular, Certificate};
use crate::error::Result;
use crate::extremal::{self, EnumOptions};
use crate::graphs::Graph;
use crate::misc::{self};
use crate::rational::rat_to_string;
use crate::scenario::Scenario;
use crate::two_reg::{two_reg, TwoRegScenario};
use crate::witness::{self, QDist};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IrrMiscLine {
    pub contexts: Vec<usize>,
    pub beta: String,
    pub beta_decimal: f64,
    pub bound_expression: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineReport {
    pub scenario: Scenario,
    pub node_origin: Vec<(usize, usize)>,
    pub colourable: bool,
    pub certificate: Certificate,
    pub extremal_count: usize,
    pub smallest_indeterministic: Option<usize>,
    pub sufficient_misc_size: Option<usize>,
    pub irr_miscs: Vec<IrrMiscLine>,
}

/// Runs the whole pipeline on a graph. Colourable inputs produce a report
/// with no inequalities.
pub fn pipeline(g: &Graph, opts: &EnumOptions) -> Result<PipelineReport> {
    let t: TwoRegScenario = two_reg(g)?;
    let verdict = parity_verdict_2regular(&t);
    if verdict.colourable {
        return Ok(PipelineReport {
            scenario: t.scenario,
            node_origin: t.node_origin,
            colourable: true,
            certificate: verdict.certificate,
            extremal_count: 0,
            smallest_indeterministic: None,
            sufficient_misc_size: None,
            irr_miscs: Vec::new(),
        });
    }
    let models = extremal::enumerate_extremal_models_2reg(&t, opts)?;
    let k = extremal::smallest_indeterministic_size(&t.scenario, &models)?;
    let sufficient = misc::sufficient_misc(&t.scenario, &models)?;
    let irr = misc::enumerate_irr_miscs(&t.scenario, &models, opts.budget)?;
    let mut lines = Vec::with_capacity(irr.len());
    for set in &irr {
        let q = QDist::uniform(&set.indices)?;
        let ineq = witness::make_inequality(&t.scenario, set, &q, &models)?;
        lines.push(IrrMiscLine {
            contexts: set.indices.clone(),
            beta: rat_to_string(&ineq.beta),
            beta_decimal: ineq.beta_decimal,
            bound_expression: ineq.bound_expression,
        });
    }
    Ok(PipelineReport {
        scenario: t.scenario,
        node_origin: t.node_origin,
        colourable: false,
        certificate: verdict.certificate,
        extremal_count: models.len(),
        smallest_indeterministic: Some(k),
        sufficient_misc_size: Some(sufficient),
        irr_miscs: lines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pipeline_on_k33() {
        let g = Graph::complete_bipartite(3, 3).unwrap();
        let report = pipeline(&g, &EnumOptions::default()).unwrap();
        assert!(!report.colourable);
        assert_eq!(report.extremal_count, 146);
        assert_eq!(report.irr_miscs.len(), 15);
        assert_eq!(report.sufficient_misc_size, Some(7));
    }

    #[test]
    fn pipeline_on_colourable_graph() {
        let g = Graph::complete_bipartite(2, 3).unwrap();
        let report = pipeline(&g, &EnumOptions::default()).unwrap();
        assert!(report.colourable);
        assert!(report.irr_miscs.is_empty());
    }
}

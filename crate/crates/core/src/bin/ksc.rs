//! Command-line front end: generate graphs, map them to contextuality
//! scenarios, decide KS-colourability, enumerate extremal models and
//! irreducible MISCs, emit and evaluate noncontextuality inequalities,
//! and attempt the saturating noncontextual-model construction.
//!
//! Exit codes: 0 success (or inequality respected), 10 inequality
//! violated, 2 invalid input, 3 budget exceeded.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use ksc_core::colourability::{self, CertMethod};
use ksc_core::dot::{self, HyperedgeStyle};
use ksc_core::error::Error;
use ksc_core::extremal::{self, EnumOptions, ExtremalModel};
use ksc_core::graphs::Graph;
use ksc_core::misc::{self, ContextSet};
use ksc_core::rational::{parse_rat, rat_to_f64, rat_to_string, Rat};
use ksc_core::scenario::Scenario;
use ksc_core::two_reg;
use ksc_core::witness::{self, DataTable, Inequality, QDist};

#[derive(Parser)]
#[command(
    name = "ksc",
    about = "Exact tools for KS-uncolourable contextuality scenarios",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Work budget for exponential enumerations.
    #[arg(long, global = true, default_value_t = ksc_core::DEFAULT_BUDGET)]
    budget: u64,
    /// Parallelize internal enumeration; output order is unaffected.
    #[arg(long, global = true)]
    parallel: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Map a graph to its contextuality scenario (nodes are intersecting
    /// edge pairs). The output is scenario JSON with the origin maps
    /// alongside.
    TwoReg { graph: PathBuf },
    /// Map a graph through its line graph's matching scenario; the result
    /// is structurally identical to two-reg.
    MatchingScenario { graph: PathBuf },
    /// Decide KS-colourability.
    CheckKs {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = CheckMethod::Auto)]
        method: CheckMethod,
    },
    /// Enumerate extremal probabilistic models.
    Extremals {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = EnumMethod::Auto)]
        method: EnumMethod,
    },
    /// Enumerate MISCs (or only irreducible ones), or check one set.
    Miscs {
        scenario: PathBuf,
        /// Only irreducible MISCs.
        #[arg(long)]
        irr: bool,
        /// Check a single comma-separated context set instead.
        #[arg(long, value_delimiter = ',')]
        contexts: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value_t = EnumMethod::Auto)]
        method: EnumMethod,
    },
    /// Weighted max-predictability for a context weighting.
    Beta {
        scenario: PathBuf,
        #[command(flatten)]
        q: QArgs,
        #[arg(long, value_enum, default_value_t = EnumMethod::Auto)]
        method: EnumMethod,
    },
    /// Emit the noncontextuality inequality for a context set.
    Ineq {
        scenario: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        contexts: Vec<usize>,
        #[command(flatten)]
        q: QArgs,
        #[arg(long, value_enum, default_value_t = EnumMethod::Auto)]
        method: EnumMethod,
    },
    /// Source-measurement correlation of a data table.
    Corr {
        data: PathBuf,
        #[command(flatten)]
        q: QArgs,
        #[arg(long, value_delimiter = ',')]
        contexts: Option<Vec<usize>>,
    },
    /// Evaluate a data table against an inequality (exit 10 on violation).
    Evaluate { data: PathBuf, inequality: PathBuf },
    /// Attempt the saturating noncontextual-model construction.
    Ncmodel {
        scenario: PathBuf,
        #[command(flatten)]
        q: QArgs,
        /// JSON file {"<ctx>": ["num/den", ...]} of source marginals;
        /// defaults to uniform per context.
        #[arg(long)]
        marginals: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = EnumMethod::Auto)]
        method: EnumMethod,
    },
    /// Export a graph or scenario file as Graphviz DOT (autodetected).
    ExportDot {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = DotStyle::Clique)]
        style: DotStyle,
    },
    /// Full pipeline: graph -> scenario -> verdict -> extremal models ->
    /// irreducible MISCs with their inequality bounds.
    Pipeline { graph: PathBuf },
}

#[derive(Subcommand)]
enum GenKind {
    /// Complete bipartite graph K_{m,n}.
    CompleteBipartite { m: usize, n: usize },
    /// Cycle graph on n vertices.
    Cycle { n: usize },
    /// Complete graph K_n.
    Complete { n: usize },
    /// The claw K_{1,3}.
    Claw,
    /// Validate and normalize an existing graph file.
    FromFile { path: PathBuf },
}

#[derive(Args)]
struct QArgs {
    /// Either the literal "uniform" or a path to QDist JSON
    /// {"weights": {"<ctx>": "num/den"}}.
    #[arg(long, default_value = "uniform")]
    q: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckMethod {
    Auto,
    Parity,
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumMethod {
    Auto,
    General,
    Structural,
}

#[derive(Clone, Copy, ValueEnum)]
enum DotStyle {
    Clique,
    Star,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err.downcast_ref::<Error>() {
                Some(Error::BudgetExceeded { .. }) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

type AnyError = Box<dyn std::error::Error>;

fn run(cli: &Cli) -> Result<ExitCode, AnyError> {
    let opts = EnumOptions {
        budget: cli.budget,
        parallel: cli.parallel,
    };
    match &cli.command {
        Command::Gen { kind } => {
            let graph = match kind {
                GenKind::CompleteBipartite { m, n } => Graph::complete_bipartite(*m, *n)?,
                GenKind::Cycle { n } => Graph::cycle(*n)?,
                GenKind::Complete { n } => Graph::complete(*n)?,
                GenKind::Claw => Graph::claw(),
                GenKind::FromFile { path } => load_graph(path)?,
            };
            emit(cli, &graph)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::TwoReg { graph } => {
            let g = load_graph(graph)?;
            let t = two_reg::two_reg(&g)?;
            let mut value = serde_json::to_value(&t.scenario)?;
            let obj = value.as_object_mut().expect("scenario serializes to an object");
            obj.insert("node_origin".into(), serde_json::to_value(&t.node_origin)?);
            obj.insert("edge_origin".into(), serde_json::to_value(&t.edge_origin)?);
            emit(cli, &value)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::MatchingScenario { graph } => {
            let g = load_graph(graph)?;
            let h = two_reg::matching_scenario(&g)?;
            emit(cli, &h)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckKs { scenario, method } => {
            let h = load_scenario(scenario)?;
            let report = check_ks(&h, *method, cli.budget)?;
            emit(cli, &report)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Extremals { scenario, method } => {
            let h = load_scenario(scenario)?;
            let models = enumerate(&h, *method, &opts)?;
            emit(cli, &models)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Miscs {
            scenario,
            irr,
            contexts,
            method,
        } => {
            let h = load_scenario(scenario)?;
            let models = enumerate(&h, *method, &opts)?;
            match contexts {
                Some(indices) => {
                    let set = ContextSet::new(&h, indices.clone())?;
                    let report = misc::is_irr_misc(&h, &set, &models)?;
                    emit(cli, &json!({ "contexts": set.indices, "report": report }))?;
                }
                None => {
                    let list = misc_census(&h, &models, *irr, cli.budget)?;
                    emit(cli, &list)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Beta {
            scenario,
            q,
            method,
        } => {
            let h = load_scenario(scenario)?;
            let models = enumerate(&h, *method, &opts)?;
            let all: Vec<usize> = (0..h.num_contexts()).collect();
            let q = parse_q(&q.q, &all)?;
            let value = witness::beta(&h, &q, &models)?;
            emit(
                cli,
                &json!({ "beta": rat_to_string(&value), "beta_decimal": rat_to_f64(&value) }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Ineq {
            scenario,
            contexts,
            q,
            method,
        } => {
            let h = load_scenario(scenario)?;
            let models = enumerate(&h, *method, &opts)?;
            let set = ContextSet::new(&h, contexts.clone())?;
            let q = parse_q(&q.q, &set.indices)?;
            let ineq = witness::make_inequality(&h, &set, &q, &models)?;
            emit(cli, &ineq)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Corr { data, q, contexts } => {
            let table = load_data(data)?;
            let default: Vec<usize> = match contexts {
                Some(c) => c.clone(),
                None => table.contexts.iter().map(|c| c.index).collect(),
            };
            let q = parse_q(&q.q, &default)?;
            let value = witness::corr(&table, &q)?;
            emit(
                cli,
                &json!({ "corr": rat_to_string(&value), "corr_decimal": rat_to_f64(&value) }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Evaluate { data, inequality } => {
            let table = load_data(data)?;
            let ineq: Inequality = read_json(inequality)?;
            let report = witness::evaluate(&table, &ineq)?;
            let violated = report.violated;
            emit(cli, &report)?;
            Ok(if violated {
                ExitCode::from(10)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Ncmodel {
            scenario,
            q,
            marginals,
            method,
        } => {
            let h = load_scenario(scenario)?;
            let models = enumerate(&h, *method, &opts)?;
            let all: Vec<usize> = (0..h.num_contexts()).collect();
            let q = parse_q(&q.q, &all)?;
            let marg = match marginals {
                Some(path) => Some(load_marginals(path)?),
                None => None,
            };
            let attempt = witness::build_saturating_nc_model(&h, &q, marg.as_ref(), &models)?;
            emit(cli, &attempt)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ExportDot { file, style } => {
            let text = fs::read_to_string(file)?;
            let value: serde_json::Value = serde_json::from_str(&text)?;
            let dot = if value.get("num_vertices").is_some() {
                let g: Graph = serde_json::from_value(value)?;
                let g = Graph::new(g.num_vertices, g.edges)?;
                dot::graph_to_dot(&g)
            } else {
                let h = scenario_from_value(value)?;
                let style = match style {
                    DotStyle::Clique => HyperedgeStyle::Clique,
                    DotStyle::Star => HyperedgeStyle::Star,
                };
                dot::scenario_to_dot(&h, style)
            };
            emit_text(cli, dot)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Pipeline { graph } => {
            let g = load_graph(graph)?;
            let report = ksc_core::report::pipeline(&g, &opts)?;
            emit(cli, &report)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, AnyError> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Ok(serde_json::from_str(&text)?)
}

fn load_graph(path: &PathBuf) -> Result<Graph, AnyError> {
    let raw: Graph = read_json(path)?;
    Ok(Graph::new(raw.num_vertices, raw.edges)?)
}

fn scenario_from_value(value: serde_json::Value) -> Result<Scenario, AnyError> {
    let raw: Scenario = serde_json::from_value(value)?;
    let labels = if raw.node_labels.is_empty() {
        None
    } else {
        Some(raw.node_labels)
    };
    Ok(Scenario::new(raw.num_nodes, labels, raw.hyperedges)?)
}

fn load_scenario(path: &PathBuf) -> Result<Scenario, AnyError> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    scenario_from_value(serde_json::from_str(&text)?)
}

fn load_data(path: &PathBuf) -> Result<DataTable, AnyError> {
    let table: DataTable = read_json(path)?;
    table.validate()?;
    Ok(table)
}

fn load_marginals(path: &PathBuf) -> Result<BTreeMap<usize, Vec<Rat>>, AnyError> {
    let raw: BTreeMap<String, Vec<String>> = read_json(path)?;
    let mut out = BTreeMap::new();
    for (k, vals) in raw {
        let idx: usize = k.parse().map_err(|_| format!("bad context index '{k}'"))?;
        let parsed = vals
            .iter()
            .map(|s| parse_rat(s))
            .collect::<Result<Vec<_>, _>>()?;
        out.insert(idx, parsed);
    }
    Ok(out)
}

fn parse_q(spec: &str, default_contexts: &[usize]) -> Result<QDist, AnyError> {
    if spec == "uniform" {
        return Ok(QDist::uniform(default_contexts)?);
    }
    let q: QDist = read_json(&PathBuf::from(spec))?;
    Ok(QDist::new(q.weights)?)
}

fn enumerate(
    h: &Scenario,
    method: EnumMethod,
    opts: &EnumOptions,
) -> Result<Vec<ExtremalModel>, Error> {
    match method {
        EnumMethod::General => extremal::enumerate_extremal_models(h, opts),
        EnumMethod::Structural => extremal::enumerate_extremal_models_2regular(h, opts),
        EnumMethod::Auto => {
            if h.is_regular(2) {
                extremal::enumerate_extremal_models_2regular(h, opts)
            } else {
                extremal::enumerate_extremal_models(h, opts)
            }
        }
    }
}

#[derive(Serialize)]
struct CheckReport {
    decided: bool,
    colourable: Option<bool>,
    certificate: Option<ksc_core::colourability::Certificate>,
    witness: Option<ksc_core::scenario::ProbModel>,
}

fn check_ks(h: &Scenario, method: CheckMethod, budget: u64) -> Result<CheckReport, Error> {
    match method {
        CheckMethod::Auto => {
            let v = colourability::verdict(h, budget)?;
            Ok(CheckReport {
                decided: true,
                colourable: Some(v.colourable),
                certificate: Some(v.certificate),
                witness: v.witness,
            })
        }
        CheckMethod::Exhaustive => {
            let witness = colourability::find_ks_colouring(h, budget)?;
            Ok(CheckReport {
                decided: true,
                colourable: Some(witness.is_some()),
                certificate: Some(ksc_core::colourability::Certificate {
                    method: CertMethod::Exhaustive,
                    justification: "complete backtracking search".to_string(),
                }),
                witness,
            })
        }
        CheckMethod::Parity => match colourability::parity_witness_general(h) {
            Some(certificate) => Ok(CheckReport {
                decided: true,
                colourable: Some(false),
                certificate: Some(certificate),
                witness: None,
            }),
            None => Ok(CheckReport {
                decided: false,
                colourable: None,
                certificate: None,
                witness: None,
            }),
        },
    }
}

#[derive(Serialize)]
struct MiscEntry {
    contexts: Vec<usize>,
    report: ksc_core::misc::MiscReport,
}

/// Without --irr: every MISC (each with its report); with --irr: only
/// irreducible ones.
fn misc_census(
    h: &Scenario,
    models: &[ExtremalModel],
    irr_only: bool,
    budget: u64,
) -> Result<Vec<MiscEntry>, Error> {
    let irr = misc::enumerate_irr_miscs(h, models, budget)?;
    let sets: Vec<ContextSet> = if irr_only {
        irr
    } else {
        // MISCs are exactly the supersets of irreducible ones.
        let n = h.num_contexts();
        let irr_masks: Vec<u128> = irr
            .iter()
            .map(|c| c.indices.iter().fold(0u128, |m, &i| m | 1 << i))
            .collect();
        let mut all: Vec<(usize, Vec<usize>)> = Vec::new();
        for mask in 1u128..(1u128 << n) {
            if irr_masks.iter().any(|m| m & !mask == 0) {
                let indices: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                all.push((indices.len(), indices));
            }
        }
        all.sort();
        all.into_iter()
            .map(|(_, indices)| ContextSet { indices })
            .collect()
    };
    sets.into_iter()
        .map(|set| {
            let report = misc::is_irr_misc(h, &set, models)?;
            Ok(MiscEntry {
                contexts: set.indices,
                report,
            })
        })
        .collect()
}


fn emit<T: Serialize>(cli: &Cli, value: &T) -> Result<(), AnyError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit_text(cli, text)
}

fn emit_text(cli: &Cli, text: String) -> Result<(), AnyError> {
    match &cli.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display()).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

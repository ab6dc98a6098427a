//! C ABI for the ksc toolkit. Handles are opaque pointers owned by Rust;
//! every fallible call returns a [`KscStatus`] and leaves a message
//! retrievable with [`ksc_last_error_message`] on failure. Structured
//! results cross the boundary as JSON strings freed with
//! [`ksc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use ksc_core::colourability;
use ksc_core::extremal::{self, EnumOptions};
use ksc_core::graphs::Graph;
use ksc_core::misc;
use ksc_core::rational::{rat_to_f64, rat_to_string};
use ksc_core::report;
use ksc_core::scenario::Scenario;
use ksc_core::two_reg;
use ksc_core::witness::{self, QDist};
use ksc_core::Error;

/// Status codes mirroring the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KscStatus {
    Ok = 0,
    /// Unexpected internal failure.
    Internal = 1,
    InvalidArgument = 2,
    BudgetExceeded = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
}

/// An undirected simple graph handle.
pub struct KscGraph(Graph);

/// A contextuality scenario handle.
pub struct KscScenario(Scenario);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> KscStatus {
    set_error(&err.to_string());
    match err {
        Error::BudgetExceeded { .. } => KscStatus::BudgetExceeded,
        _ => KscStatus::InvalidArgument,
    }
}

/// Message for the most recent failure on this thread. Valid until the
/// next failing call; never null.
#[no_mangle]
pub extern "C" fn ksc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> KscStatus {
    if out.is_null() {
        set_error("null output pointer");
        return KscStatus::NullPointer;
    }
    *out = Box::into_raw(Box::new(value));
    KscStatus::Ok
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> KscStatus {
    if out.is_null() {
        set_error("null output pointer");
        return KscStatus::NullPointer;
    }
    match CString::new(text) {
        Ok(cstring) => {
            *out = cstring.into_raw();
            KscStatus::Ok
        }
        Err(_) => {
            set_error("output contained an interior NUL byte");
            KscStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, KscStatus> {
    if ptr.is_null() {
        set_error("null string pointer");
        return Err(KscStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        KscStatus::InvalidUtf8
    })
}

macro_rules! deref {
    ($ptr:expr) => {
        match $ptr.as_ref() {
            Some(r) => r,
            None => {
                set_error("null handle");
                return KscStatus::NullPointer;
            }
        }
    };
}

/// Builds the complete bipartite graph K_{m,n}.
/// # Safety
/// `out` must be a valid pointer; the result must be released with
/// [`ksc_graph_free`].
#[no_mangle]
pub unsafe extern "C" fn ksc_graph_complete_bipartite(
    m: usize,
    n: usize,
    out: *mut *mut KscGraph,
) -> KscStatus {
    match Graph::complete_bipartite(m, n) {
        Ok(g) => write_out(out, KscGraph(g)),
        Err(e) => status_of(&e),
    }
}

/// Builds the cycle graph on n vertices.
/// # Safety
/// As for [`ksc_graph_complete_bipartite`].
#[no_mangle]
pub unsafe extern "C" fn ksc_graph_cycle(n: usize, out: *mut *mut KscGraph) -> KscStatus {
    match Graph::cycle(n) {
        Ok(g) => write_out(out, KscGraph(g)),
        Err(e) => status_of(&e),
    }
}

/// Builds the complete graph K_n.
/// # Safety
/// As for [`ksc_graph_complete_bipartite`].
#[no_mangle]
pub unsafe extern "C" fn ksc_graph_complete(n: usize, out: *mut *mut KscGraph) -> KscStatus {
    match Graph::complete(n) {
        Ok(g) => write_out(out, KscGraph(g)),
        Err(e) => status_of(&e),
    }
}

/// Parses graph JSON `{"num_vertices": int, "edges": [[u,v], ...]}`.
/// # Safety
/// `json` must be a NUL-terminated string; `out` as above.
#[no_mangle]
pub unsafe extern "C" fn ksc_graph_from_json(
    json: *const c_char,
    out: *mut *mut KscGraph,
) -> KscStatus {
    let text = match read_str(json) {
        Ok(t) => t,
        Err(status) => return status,
    };
    let raw: Graph = match serde_json::from_str(text) {
        Ok(g) => g,
        Err(e) => {
            set_error(&format!("bad graph JSON: {e}"));
            return KscStatus::InvalidArgument;
        }
    };
    match Graph::new(raw.num_vertices, raw.edges) {
        Ok(g) => write_out(out, KscGraph(g)),
        Err(e) => status_of(&e),
    }
}

/// Serializes a graph to JSON.
/// # Safety
/// `graph` must be a live handle; free the string with [`ksc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ksc_graph_to_json(
    graph: *const KscGraph,
    out: *mut *mut c_char,
) -> KscStatus {
    let g = deref!(graph);
    match serde_json::to_string_pretty(&g.0) {
        Ok(text) => write_string(out, text),
        Err(e) => {
            set_error(&e.to_string());
            KscStatus::Internal
        }
    }
}

/// Number of vertices; 0 for a null handle.
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ksc_graph_num_vertices(graph: *const KscGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.num_vertices)
}

/// Number of edges; 0 for a null handle.
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ksc_graph_num_edges(graph: *const KscGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.num_edges())
}

/// Releases a graph handle. Null is a no-op.
/// # Safety
/// `graph` must be null or a pointer previously returned by this library,
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ksc_graph_free(graph: *mut KscGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Maps a graph to its contextuality scenario (one hyperedge per graph
/// edge, one node per intersecting edge pair).
/// # Safety
/// `graph` must be a live handle; the result must be released with
/// [`ksc_scenario_free`].
#[no_mangle]
pub unsafe extern "C" fn ksc_two_reg(
    graph: *const KscGraph,
    out: *mut *mut KscScenario,
) -> KscStatus {
    let g = deref!(graph);
    match two_reg::two_reg(&g.0) {
        Ok(t) => write_out(out, KscScenario(t.scenario)),
        Err(e) => status_of(&e),
    }
}

/// Like [`ksc_two_reg`] but emits scenario JSON with the node/edge origin
/// maps alongside.
/// # Safety
/// `graph` must be a live handle; free the string with [`ksc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ksc_two_reg_json(
    graph: *const KscGraph,
    out: *mut *mut c_char,
) -> KscStatus {
    let g = deref!(graph);
    match two_reg::two_reg(&g.0) {
        Ok(t) => {
            let mut value = serde_json::to_value(&t.scenario).expect("scenario serializes");
            let obj = value.as_object_mut().expect("object");
            obj.insert(
                "node_origin".into(),
                serde_json::to_value(&t.node_origin).expect("origin serializes"),
            );
            obj.insert(
                "edge_origin".into(),
                serde_json::to_value(&t.edge_origin).expect("origin serializes"),
            );
            write_string(out, serde_json::to_string_pretty(&value).expect("json"))
        }
        Err(e) => status_of(&e),
    }
}

/// Parses scenario JSON
/// `{"num_nodes": int, "node_labels": [str], "hyperedges": [[int,...],...]}`.
/// # Safety
/// `json` must be a NUL-terminated string; `out` as above.
#[no_mangle]
pub unsafe extern "C" fn ksc_scenario_from_json(
    json: *const c_char,
    out: *mut *mut KscScenario,
) -> KscStatus {
    let text = match read_str(json) {
        Ok(t) => t,
        Err(status) => return status,
    };
    let raw: Scenario = match serde_json::from_str(text) {
        Ok(s) => s,
        Err(e) => {
            set_error(&format!("bad scenario JSON: {e}"));
            return KscStatus::InvalidArgument;
        }
    };
    let labels = if raw.node_labels.is_empty() {
        None
    } else {
        Some(raw.node_labels)
    };
    match Scenario::new(raw.num_nodes, labels, raw.hyperedges) {
        Ok(h) => write_out(out, KscScenario(h)),
        Err(e) => status_of(&e),
    }
}

/// Serializes a scenario to JSON.
/// # Safety
/// `scenario` must be a live handle; free the string with
/// [`ksc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ksc_scenario_to_json(
    scenario: *const KscScenario,
    out: *mut *mut c_char,
) -> KscStatus {
    let h = deref!(scenario);
    match serde_json::to_string_pretty(&h.0) {
        Ok(text) => write_string(out, text),
        Err(e) => {
            set_error(&e.to_string());
            KscStatus::Internal
        }
    }
}

/// Number of nodes; 0 for a null handle.
/// # Safety
/// `scenario` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ksc_scenario_num_nodes(scenario: *const KscScenario) -> usize {
    scenario.as_ref().map_or(0, |s| s.0.num_nodes)
}

/// Number of contexts (hyperedges); 0 for a null handle.
/// # Safety
/// `scenario` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ksc_scenario_num_contexts(scenario: *const KscScenario) -> usize {
    scenario.as_ref().map_or(0, |s| s.0.num_contexts())
}

/// Releases a scenario handle. Null is a no-op.
/// # Safety
/// `scenario` must be null or a pointer previously returned by this
/// library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ksc_scenario_free(scenario: *mut KscScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Decides KS-colourability (parity certificates first, then complete
/// search). Writes the flag to `out_colourable` and, when `out_json` is
/// non-null, the full verdict JSON.
/// # Safety
/// `scenario` must be a live handle; `out_colourable` must be valid;
/// `out_json` may be null.
#[no_mangle]
pub unsafe extern "C" fn ksc_check_ks(
    scenario: *const KscScenario,
    budget: u64,
    out_colourable: *mut bool,
    out_json: *mut *mut c_char,
) -> KscStatus {
    let h = deref!(scenario);
    if out_colourable.is_null() {
        set_error("null output pointer");
        return KscStatus::NullPointer;
    }
    match colourability::verdict(&h.0, budget) {
        Ok(v) => {
            *out_colourable = v.colourable;
            if !out_json.is_null() {
                let text = serde_json::to_string_pretty(&v).expect("verdict serializes");
                return write_string(out_json, text);
            }
            KscStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Enumerates extremal probabilistic models (structural route for
/// 2-regular scenarios, general route otherwise) as a JSON list.
/// # Safety
/// `scenario` must be a live handle; free the string with
/// [`ksc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ksc_extremal_models_json(
    scenario: *const KscScenario,
    budget: u64,
    parallel: bool,
    out: *mut *mut c_char,
) -> KscStatus {
    let h = deref!(scenario);
    let opts = EnumOptions { budget, parallel };
    let result = if h.0.is_regular(2) {
        extremal::enumerate_extremal_models_2regular(&h.0, &opts)
    } else {
        extremal::enumerate_extremal_models(&h.0, &opts)
    };
    match result {
        Ok(models) => {
            let text = serde_json::to_string_pretty(&models).expect("models serialize");
            write_string(out, text)
        }
        Err(e) => status_of(&e),
    }
}

/// Enumerates irreducible MISCs as a JSON list of context-index lists.
/// # Safety
/// `scenario` must be a live handle; free the string with
/// [`ksc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ksc_irr_miscs_json(
    scenario: *const KscScenario,
    budget: u64,
    out: *mut *mut c_char,
) -> KscStatus {
    let h = deref!(scenario);
    let opts = EnumOptions {
        budget,
        parallel: false,
    };
    let models = match if h.0.is_regular(2) {
        extremal::enumerate_extremal_models_2regular(&h.0, &opts)
    } else {
        extremal::enumerate_extremal_models(&h.0, &opts)
    } {
        Ok(m) => m,
        Err(e) => return status_of(&e),
    };
    match misc::enumerate_irr_miscs(&h.0, &models, budget) {
        Ok(sets) => {
            let lists: Vec<&Vec<usize>> = sets.iter().map(|c| &c.indices).collect();
            let text = serde_json::to_string_pretty(&lists).expect("lists serialize");
            write_string(out, text)
        }
        Err(e) => status_of(&e),
    }
}

/// Weighted max-predictability for the uniform distribution over the
/// given contexts: writes the exact value as a `num/den` string and, when
/// non-null, its decimal approximation.
/// # Safety
/// `scenario` must be a live handle; `contexts` must point to
/// `num_contexts` readable entries; `out_beta` as above; `out_decimal`
/// may be null.
#[no_mangle]
pub unsafe extern "C" fn ksc_beta_uniform(
    scenario: *const KscScenario,
    contexts: *const usize,
    num_contexts: usize,
    budget: u64,
    out_beta: *mut *mut c_char,
    out_decimal: *mut f64,
) -> KscStatus {
    let h = deref!(scenario);
    if contexts.is_null() && num_contexts > 0 {
        set_error("null context array");
        return KscStatus::NullPointer;
    }
    let support: Vec<usize> = (0..num_contexts).map(|i| *contexts.add(i)).collect();
    let q = match QDist::uniform(&support) {
        Ok(q) => q,
        Err(e) => return status_of(&e),
    };
    let opts = EnumOptions {
        budget,
        parallel: false,
    };
    let models = match if h.0.is_regular(2) {
        extremal::enumerate_extremal_models_2regular(&h.0, &opts)
    } else {
        extremal::enumerate_extremal_models(&h.0, &opts)
    } {
        Ok(m) => m,
        Err(e) => return status_of(&e),
    };
    match witness::beta(&h.0, &q, &models) {
        Ok(value) => {
            if !out_decimal.is_null() {
                *out_decimal = rat_to_f64(&value);
            }
            write_string(out_beta, rat_to_string(&value))
        }
        Err(e) => status_of(&e),
    }
}

/// Runs the full pipeline on a graph and returns the report JSON:
/// scenario, colourability verdict, extremal-model count, and every
/// irreducible MISC with its inequality bound.
/// # Safety
/// `graph` must be a live handle; free the string with
/// [`ksc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ksc_pipeline_json(
    graph: *const KscGraph,
    budget: u64,
    out: *mut *mut c_char,
) -> KscStatus {
    let g = deref!(graph);
    let opts = EnumOptions {
        budget,
        parallel: false,
    };
    match report::pipeline(&g.0, &opts) {
        Ok(r) => {
            let text = serde_json::to_string_pretty(&r).expect("report serializes");
            write_string(out, text)
        }
        Err(e) => status_of(&e),
    }
}

/// Releases a string returned by this library. Null is a no-op.
/// # Safety
/// `s` must be null or a string pointer previously returned by this
/// library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ksc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

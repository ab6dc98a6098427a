#ifndef KSC_H
#define KSC_H

/* Generated by cbindgen from ksc-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirroring the CLI exit codes.
 */
typedef enum KscStatus {
  KSC_STATUS_OK = 0,
  /**
   * Unexpected internal failure.
   */
  KSC_STATUS_INTERNAL = 1,
  KSC_STATUS_INVALID_ARGUMENT = 2,
  KSC_STATUS_BUDGET_EXCEEDED = 3,
  KSC_STATUS_NULL_POINTER = 4,
  KSC_STATUS_INVALID_UTF8 = 5,
} KscStatus;

/**
 * An undirected simple graph handle.
 */
typedef struct KscGraph KscGraph;

/**
 * A contextuality scenario handle.
 */
typedef struct KscScenario KscScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Valid until the
 * next failing call; never null.
 */
const char *ksc_last_error_message(void);

/**
 * Builds the complete bipartite graph K_{m,n}.
 * # Safety
 * `out` must be a valid pointer; the result must be released with
 * [`ksc_graph_free`].
 */
enum KscStatus ksc_graph_complete_bipartite(uintptr_t m, uintptr_t n, struct KscGraph **out);

/**
 * Builds the cycle graph on n vertices.
 * # Safety
 * As for [`ksc_graph_complete_bipartite`].
 */
enum KscStatus ksc_graph_cycle(uintptr_t n, struct KscGraph **out);

/**
 * Builds the complete graph K_n.
 * # Safety
 * As for [`ksc_graph_complete_bipartite`].
 */
enum KscStatus ksc_graph_complete(uintptr_t n, struct KscGraph **out);

/**
 * Parses graph JSON `{"num_vertices": int, "edges": [[u,v], ...]}`.
 * # Safety
 * `json` must be a NUL-terminated string; `out` as above.
 */
enum KscStatus ksc_graph_from_json(const char *json, struct KscGraph **out);

/**
 * Serializes a graph to JSON.
 * # Safety
 * `graph` must be a live handle; free the string with [`ksc_string_free`].
 */
enum KscStatus ksc_graph_to_json(const struct KscGraph *graph, char **out);

/**
 * Number of vertices; 0 for a null handle.
 * # Safety
 * `graph` must be null or a live handle.
 */
uintptr_t ksc_graph_num_vertices(const struct KscGraph *graph);

/**
 * Number of edges; 0 for a null handle.
 * # Safety
 * `graph` must be null or a live handle.
 */
uintptr_t ksc_graph_num_edges(const struct KscGraph *graph);

/**
 * Releases a graph handle. Null is a no-op.
 * # Safety
 * `graph` must be null or a pointer previously returned by this library,
 * not yet freed.
 */
void ksc_graph_free(struct KscGraph *graph);

/**
 * Maps a graph to its contextuality scenario (one hyperedge per graph
 * edge, one node per intersecting edge pair).
 * # Safety
 * `graph` must be a live handle; the result must be released with
 * [`ksc_scenario_free`].
 */
enum KscStatus ksc_two_reg(const struct KscGraph *graph, struct KscScenario **out);

/**
 * Like [`ksc_two_reg`] but emits scenario JSON with the node/edge origin
 * maps alongside.
 * # Safety
 * `graph` must be a live handle; free the string with [`ksc_string_free`].
 */
enum KscStatus ksc_two_reg_json(const struct KscGraph *graph, char **out);

/**
 * Parses scenario JSON
 * `{"num_nodes": int, "node_labels": [str], "hyperedges": [[int,...],...]}`.
 * # Safety
 * `json` must be a NUL-terminated string; `out` as above.
 */
enum KscStatus ksc_scenario_from_json(const char *json, struct KscScenario **out);

/**
 * Serializes a scenario to JSON.
 * # Safety
 * `scenario` must be a live handle; free the string with
 * [`ksc_string_free`].
 */
enum KscStatus ksc_scenario_to_json(const struct KscScenario *scenario, char **out);

/**
 * Number of nodes; 0 for a null handle.
 * # Safety
 * `scenario` must be null or a live handle.
 */
uintptr_t ksc_scenario_num_nodes(const struct KscScenario *scenario);

/**
 * Number of contexts (hyperedges); 0 for a null handle.
 * # Safety
 * `scenario` must be null or a live handle.
 */
uintptr_t ksc_scenario_num_contexts(const struct KscScenario *scenario);

/**
 * Releases a scenario handle. Null is a no-op.
 * # Safety
 * `scenario` must be null or a pointer previously returned by this
 * library, not yet freed.
 */
void ksc_scenario_free(struct KscScenario *scenario);

/**
 * Decides KS-colourability (parity certificates first, then complete
 * search). Writes the flag to `out_colourable` and, when `out_json` is
 * non-null, the full verdict JSON.
 * # Safety
 * `scenario` must be a live handle; `out_colourable` must be valid;
 * `out_json` may be null.
 */
enum KscStatus ksc_check_ks(const struct KscScenario *scenario,
                            uint64_t budget,
                            bool *out_colourable,
                            char **out_json);

/**
 * Enumerates extremal probabilistic models (structural route for
 * 2-regular scenarios, general route otherwise) as a JSON list.
 * # Safety
 * `scenario` must be a live handle; free the string with
 * [`ksc_string_free`].
 */
enum KscStatus ksc_extremal_models_json(const struct KscScenario *scenario,
                                        uint64_t budget,
                                        bool parallel,
                                        char **out);

/**
 * Enumerates irreducible MISCs as a JSON list of context-index lists.
 * # Safety
 * `scenario` must be a live handle; free the string with
 * [`ksc_string_free`].
 */
enum KscStatus ksc_irr_miscs_json(const struct KscScenario *scenario, uint64_t budget, char **out);

/**
 * Weighted max-predictability for the uniform distribution over the
 * given contexts: writes the exact value as a `num/den` string and, when
 * non-null, its decimal approximation.
 * # Safety
 * `scenario` must be a live handle; `contexts` must point to
 * `num_contexts` readable entries; `out_beta` as above; `out_decimal`
 * may be null.
 */
enum KscStatus ksc_beta_uniform(const struct KscScenario *scenario,
                                const uintptr_t *contexts,
                                uintptr_t num_contexts,
                                uint64_t budget,
                                char **out_beta,
                                double *out_decimal);

/**
 * Runs the full pipeline on a graph and returns the report JSON:
 * scenario, colourability verdict, extremal-model count, and every
 * irreducible MISC with its inequality bound.
 * # Safety
 * `graph` must be a live handle; free the string with
 * [`ksc_string_free`].
 */
enum KscStatus ksc_pipeline_json(const struct KscGraph *graph, uint64_t budget, char **out);

/**
 * Releases a string returned by this library. Null is a no-op.
 * # Safety
 * `s` must be null or a string pointer previously returned by this
 * library, not yet freed.
 */
void ksc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KSC_H */

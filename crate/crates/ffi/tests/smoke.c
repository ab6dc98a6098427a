/* Links against libksc_ffi and walks the pipeline from C. */
#include <stdbool.h>
#include <stddef.h>
#include <string.h>

#include "ksc.h"

int main(void) {
    KscGraph *graph = NULL;
    if (ksc_graph_complete_bipartite(3, 3, &graph) != KSC_STATUS_OK) return 1;
    if (ksc_graph_num_edges(graph) != 9) return 2;

    KscScenario *scenario = NULL;
    if (ksc_two_reg(graph, &scenario) != KSC_STATUS_OK) return 3;
    if (ksc_scenario_num_nodes(scenario) != 18) return 4;
    if (ksc_scenario_num_contexts(scenario) != 9) return 5;

    bool colourable = true;
    if (ksc_check_ks(scenario, 50000000, &colourable, NULL) != KSC_STATUS_OK) return 6;
    if (colourable) return 7;

    uintptr_t contexts[3] = {0, 4, 8};
    char *beta = NULL;
    double decimal = 0.0;
    if (ksc_beta_uniform(scenario, contexts, 3, 50000000, &beta, &decimal) != KSC_STATUS_OK)
        return 8;
    if (strcmp(beta, "5/6") != 0) return 9;
    ksc_string_free(beta);

    char *report = NULL;
    if (ksc_pipeline_json(graph, 50000000, &report) != KSC_STATUS_OK) return 10;
    if (strstr(report, "\"extremal_count\": 146") == NULL) return 11;
    ksc_string_free(report);

    /* Error paths: status code plus retrievable message. */
    KscGraph *bad = NULL;
    if (ksc_graph_complete_bipartite(0, 3, &bad) != KSC_STATUS_INVALID_ARGUMENT) return 12;
    if (ksc_last_error_message() == NULL) return 13;

    ksc_scenario_free(scenario);
    ksc_graph_free(graph);
    return 0;
}

#include <stdio.h>
#include <string.h>

#include "penrose_virial.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    PvModel *model = NULL;
    PvCoefficientTable *table = NULL;
    PvTree *tree = NULL;
    PvBoundResult bound;
    PvPartitionSummary summary;
    char buf[256];
    uint8_t seq[] = {1, 1};
    size_t l = 0;

    CHECK(pv_model_parse("onepoint", &model) == PV_STATUS_OK);
    CHECK(pv_coefficients_compute(model, 5, PV_ROUTE_GRAPH_BELL, false, &table) == PV_STATUS_OK);
    CHECK(pv_table_beta(table, 5, buf, sizeof buf, NULL) == PV_STATUS_OK);
    CHECK(strcmp(buf, "24") == 0);
    pv_table_free(table);
    pv_model_free(model);

    CHECK(pv_tree_from_prufer(seq, 2, &tree) == PV_STATUS_OK);
    CHECK(pv_tree_max_splittability(tree, &l) == PV_STATUS_OK && l == 1);
    pv_tree_free(tree);

    CHECK(pv_verify_partition(5, true, &summary) == PV_STATUS_OK);
    CHECK(summary.covered == 728);

    CHECK(pv_radius_bound(1.0, 1e-13, &bound) == PV_STATUS_OK);
    CHECK(bound.alpha > 0.2319 && bound.alpha < 0.2320);

    CHECK(pv_model_parse("hardrod", &model) == PV_STATUS_INVALID_ARGUMENT);
    CHECK(pv_last_error_message(buf, sizeof buf) == PV_STATUS_OK);
    CHECK(strstr(buf, "hardrod") != NULL);

    printf("ok\n");
    return 0;
}

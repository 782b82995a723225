#ifndef PENROSE_VIRIAL_H
#define PENROSE_VIRIAL_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PvRoute {
  PV_ROUTE_GRAPH_BELL = 0,
  PV_ROUTE_GRAPH_REVERSION = 1,
  PV_ROUTE_PENROSE_TREES = 2,
} PvRoute;

typedef enum PvStatus {
  PV_STATUS_OK = 0,
  PV_STATUS_NULL_POINTER = 1,
  PV_STATUS_INVALID_ARGUMENT = 2,
  PV_STATUS_SIZE_OUT_OF_RANGE = 3,
  PV_STATUS_CHECK_FAILED = 4,
  PV_STATUS_BUFFER_TOO_SMALL = 5,
  PV_STATUS_PANIC = 6,
} PvStatus;

// Coefficient table handle.
typedef struct PvCoefficientTable PvCoefficientTable;

// Interaction model handle.
typedef struct PvModel PvModel;

// Labeled tree handle.
typedef struct PvTree PvTree;

typedef struct PvPartitionSummary {
  size_t n;
  uint64_t connected_count;
  uint64_t interval_total;
  uint64_t covered;
  size_t violations;
} PvPartitionSummary;

typedef struct PvBoundResult {
  double u;
  double t;
  double c;
  double alpha;
  double radius_coeff;
  double residual_c;
  double residual_t;
  double residual_alpha;
} PvBoundResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a status code.
const char *pv_status_message(enum PvStatus status);

// Size of the last error message on this thread, including the NUL.
size_t pv_last_error_length(void);

// Copies the last error message on this thread into `buf`.
//
// # Safety
// `buf` must be valid for `len` bytes of writes.
enum PvStatus pv_last_error_message(char *buf, size_t len);

// Decodes a Prüfer sequence of `len` labels into a tree on `len + 2` vertices.
//
// # Safety
// `seq` must be valid for `len` reads (it may be null when `len == 0`);
// `out` must be valid for one write.
enum PvStatus pv_tree_from_prufer(const uint8_t *seq, size_t len, struct PvTree **out);

// Builds a spanning tree on `[n]` from `edge_count` pairs stored as
// `endpoints[2k], endpoints[2k+1]`.
//
// # Safety
// `endpoints` must be valid for `2 * edge_count` reads; `out` for one write.
enum PvStatus pv_tree_from_edges(size_t n,
                                 const uint8_t *endpoints,
                                 size_t edge_count,
                                 struct PvTree **out);

// Releases a tree; null is ignored.
//
// # Safety
// `tree` must come from a `pv_tree_*` constructor and not be freed twice.
void pv_tree_free(struct PvTree *tree);

// # Safety
// `tree` must be a live handle; `out` valid for one write.
enum PvStatus pv_tree_vertex_count(const struct PvTree *tree, size_t *out);

// Edge bit field, pairs `{i < j}` indexed lexicographically from bit 0.
//
// # Safety
// `tree` must be a live handle; `out` valid for one write.
enum PvStatus pv_tree_edge_bits(const struct PvTree *tree, uint64_t *out);

// Bit field of the extra edges of the Penrose completion.
//
// # Safety
// `tree` must be a live handle; `out` valid for one write.
enum PvStatus pv_tree_penrose_extra_bits(const struct PvTree *tree, uint64_t *out);

// # Safety
// `tree` must be a live handle; `out` valid for one write.
enum PvStatus pv_tree_max_splittability(const struct PvTree *tree, size_t *out);

// Parses `"onepoint"` or `"lattice:a=<int>"`.
//
// # Safety
// `spec` must be a NUL-terminated string; `out` valid for one write.
enum PvStatus pv_model_parse(const char *spec, struct PvModel **out);

// # Safety
// `model` must come from [`pv_model_parse`] and not be freed twice.
void pv_model_free(struct PvModel *model);

// Penrose tree weight as an exact fraction string.
//
// # Safety
// Handles must be live; `buf` valid for `len` writes; `required` null or
// valid for one write.
enum PvStatus pv_tree_weight(const struct PvModel *model,
                             const struct PvTree *tree,
                             char *buf,
                             size_t len,
                             size_t *required);

// Computes `b_1..b_nmax` and `β_1..β_nmax` by one route.
//
// # Safety
// `model` must be live; `out` valid for one write.
enum PvStatus pv_coefficients_compute(const struct PvModel *model,
                                      size_t nmax,
                                      enum PvRoute route,
                                      bool parallel,
                                      struct PvCoefficientTable **out);

// # Safety
// `table` must be live; `out` valid for one write.
enum PvStatus pv_table_nmax(const struct PvCoefficientTable *table, size_t *out);

// Cluster coefficient `b_n` (1-based) as a fraction string.
//
// # Safety
// As for [`pv_tree_weight`].
enum PvStatus pv_table_b(const struct PvCoefficientTable *table,
                         size_t n,
                         char *buf,
                         size_t len,
                         size_t *required);

// Virial coefficient `β_n` (1-based) as a fraction string.
//
// # Safety
// As for [`pv_tree_weight`].
enum PvStatus pv_table_beta(const struct PvCoefficientTable *table,
                            size_t n,
                            char *buf,
                            size_t len,
                            size_t *required);

// # Safety
// `table` must come from [`pv_coefficients_compute`] and not be freed twice.
void pv_table_free(struct PvCoefficientTable *table);

// Runs the partition check on `[n]`; returns `CheckFailed` (with `out`
// filled) when violations are found.
//
// # Safety
// `out` must be valid for one write.
enum PvStatus pv_verify_partition(size_t n, bool parallel, struct PvPartitionSummary *out);

// Number of `l`-splittable trees on `[n]`.
//
// # Safety
// `out` must be valid for one write.
enum PvStatus pv_count_splittable(size_t n, size_t l, uint64_t *out);

// Radius bound at `u`; `CheckFailed` if the two radius formulas disagree.
//
// # Safety
// `out` must be valid for one write.
enum PvStatus pv_radius_bound(double u, double tol, struct PvBoundResult *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PENROSE_VIRIAL_H */

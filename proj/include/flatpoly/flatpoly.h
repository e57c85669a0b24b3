#ifndef FLATPOLY_FLATPOLY_H
#define FLATPOLY_FLATPOLY_H

/*
 * C interface to the flatpoly library: Singer difference sets, their
 * normalized polynomials, flatness and Mahler diagnostics, generalized Riesz
 * product plans and the matching rank-one constructions.
 *
 * Every fallible call returns an fp_status. On failure the message of the
 * most recent error on the calling thread is available from fp_last_error().
 * Handles are opaque and owned by the caller; release them with the matching
 * *_destroy function. Strings returned through char** are UTF-8 JSON and must
 * be released with fp_string_free().
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FLATPOLY_BUILDING_LIBRARY)
#    define FP_API __declspec(dllexport)
#  else
#    define FP_API __declspec(dllimport)
#  endif
#else
#  define FP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Defaults and limits shared by every entry point. */
#define FP_DEFAULT_GRID_MULTIPLIER 16
#define FP_MIN_GRID_MULTIPLIER 8
#define FP_NEAR_ZERO_MODULUS 1e-14
#define FP_MAX_JENSEN_DEGREE 2048
#define FP_MAX_KERNEL_TAIL 1e-8
#define FP_KERNEL_TRUNCATION_TOLERANCE 1e-9
#define FP_MIN_KERNEL_TRUNCATION 8
#define FP_ENUMERATION_BUDGET 1000000
#define FP_MAX_TOWER_LEVELS 10000000

typedef enum fp_status {
  FP_OK = 0,
  FP_ERR_INVALID_ARGUMENT = 1,
  FP_ERR_NOT_PRIME = 2,
  FP_ERR_BUDGET_EXCEEDED = 3,
  FP_ERR_PRECONDITION = 4,
  FP_ERR_NOT_PERFECT_DIFFERENCE = 5,
  FP_ERR_NEGATIVE_SPACER = 6,
  FP_ERR_NUMERIC_FAILURE = 7,
  FP_ERR_PARSE = 8,
  FP_ERR_BUFFER_TOO_SMALL = 9,
  FP_ERR_INTERNAL = 10
} fp_status;

typedef enum fp_mahler_method { FP_MAHLER_LOG_INTEGRAL = 0, FP_MAHLER_JENSEN = 1 } fp_mahler_method;

typedef enum fp_dissociation_mode { FP_DISSOCIATION_FREQUENCY_SUMS = 0, FP_DISSOCIATION_DIFFERENCE = 1 } fp_dissociation_mode;

/* Which polynomial of a fp_poly handle: the Newman polynomial P or the defect polynomial Q. */
typedef enum fp_poly_kind { FP_POLY_NEWMAN = 0, FP_POLY_DEFECT = 1 } fp_poly_kind;

typedef struct fp_singer fp_singer;
typedef struct fp_poly fp_poly;
typedef struct fp_plan fp_plan;
typedef struct fp_rankone fp_rankone;

typedef struct fp_flatness_report {
  int64_t p_power;
  int64_t q;
  double alpha;
  size_t grid_size;
  double defect_sq;
  double defect_abs;
  double l1_norm;
  double l2_defect_closed;
  double s3_bound;
} fp_flatness_report;

typedef struct fp_l2_exact_report {
  double value;
  int64_t squared_num; /* reduced */
  int64_t squared_den;
  int perfect_difference;
} fp_l2_exact_report;

typedef struct fp_mz_report {
  double alpha;
  size_t n;
  double discrete_mean;
  double integral;
  double ratio;
  size_t integral_grid;
} fp_mz_report;

typedef struct fp_mahler_report {
  fp_mahler_method method;
  int64_t degree;
  double value;
  double l1;
  size_t grid_size;
  size_t perturbed_points;
  int64_t roots_outside;
} fp_mahler_report;

typedef struct fp_realline_report {
  double alpha;
  double s;
  int64_t truncation;
  size_t grid_size;
  double value;
  double tail_bound;
} fp_realline_report;

typedef struct fp_dissociation_report {
  size_t stages;
  fp_dissociation_mode mode;
  int valid;
  int64_t combinations;
  int has_collision;
  int64_t collision_value;
} fp_dissociation_report;

typedef struct fp_correlation_report {
  size_t k;
  size_t K;
  size_t sim_stage;
  int64_t n;
  int64_t predicted_num;
  int64_t predicted_den;
  int64_t empirical_num;
  int64_t empirical_den;
  int64_t tolerance_num;
  int64_t tolerance_den;
  int within_tolerance;
} fp_correlation_report;

/* ---- library ---------------------------------------------------------- */

FP_API const char* fp_version(void);
FP_API const char* fp_status_name(fp_status status);
/* Empty string when the calling thread has not seen an error. */
FP_API const char* fp_last_error(void);
FP_API void fp_string_free(char* s);
FP_API int fp_is_prime(uint64_t n);

/* ---- Singer sets ------------------------------------------------------ */

FP_API fp_status fp_singer_create(uint64_t p, unsigned m, fp_singer** out);
/* Validates the perfect difference property and normalizes. */
FP_API fp_status fp_singer_from_residues(const int64_t* residues, size_t count, int64_t q, fp_singer** out);
FP_API void fp_singer_destroy(fp_singer* set);
FP_API int64_t fp_singer_modulus(const fp_singer* set);
FP_API size_t fp_singer_size(const fp_singer* set);
FP_API fp_status fp_singer_residues(const fp_singer* set, int64_t* out, size_t capacity);
/* {"set", "field" (null for fp_singer_from_residues), "verification"} */
FP_API fp_status fp_singer_json(const fp_singer* set, char** out_json);
/* first_violation is -1 when valid. */
FP_API fp_status fp_verify_perfect_difference(const int64_t* residues, size_t count, int64_t q, int* valid,
                                              int64_t* first_violation);

/* ---- polynomials ------------------------------------------------------ */

FP_API fp_status fp_poly_create(const fp_singer* set, fp_poly** out);
/* Newman polynomial on an arbitrary support in [0, q); no difference-set check. */
FP_API fp_status fp_poly_from_support(const int64_t* support, size_t count, int64_t q, fp_poly** out);
FP_API void fp_poly_destroy(fp_poly* poly);
FP_API int64_t fp_poly_degree(const fp_poly* poly);
/* Values at exp(2 pi i j / n), j in [0, n); n >= q. */
FP_API fp_status fp_poly_eval_grid(const fp_poly* poly, fp_poly_kind kind, size_t n, double* re, double* im);
FP_API fp_status fp_poly_defect_at_one(const fp_poly* poly, int64_t* num, int64_t* den);
/* grid_size 0 selects 16 q. */
FP_API fp_status fp_flatness(const fp_poly* poly, double alpha, size_t grid_size, fp_flatness_report* out);
FP_API fp_status fp_l2_defect_exact(const fp_poly* poly, fp_l2_exact_report* out);
FP_API fp_status fp_mz_ratio(const fp_poly* poly, fp_poly_kind kind, double alpha, size_t n, size_t integral_grid,
                             fp_mz_report* out);
FP_API fp_status fp_mz_ratio_dense(const double* re, const double* im, size_t count, double alpha, size_t n,
                                   size_t integral_grid, fp_mz_report* out);
/* grid_size 0 selects the default grid; ignored by the Jensen method. */
FP_API fp_status fp_mahler(const fp_poly* poly, fp_mahler_method method, size_t grid_size, fp_mahler_report* out);
FP_API fp_status fp_mahler_dense(const double* re, const double* im, size_t count, fp_mahler_method method,
                                 size_t grid_size, fp_mahler_report* out);

/* ---- real-line flatness ---------------------------------------------- */

FP_API fp_status fp_kernel_value(double s, double theta, double* out);
/* truncation 0 selects the default truncation for s. */
FP_API fp_status fp_periodized_kernel(double s, int64_t truncation, double theta, double* value, double* tail_bound);
FP_API fp_status fp_kernel_default_truncation(double s, int64_t* truncation);
FP_API fp_status fp_realline(const fp_poly* poly, double alpha, double s, int64_t truncation, size_t grid_size,
                             fp_realline_report* out);

/* ---- Riesz product plans ---------------------------------------------- */

/* rule: "default", "margin:<c>" or "explicit" (scales required only for explicit). */
FP_API fp_status fp_plan_create(const uint64_t* primes, size_t count, unsigned m, const char* rule,
                                const int64_t* scales, size_t scale_count, fp_plan** out);
/* Explicit scales without the growth checks. */
FP_API fp_status fp_plan_create_unchecked(const uint64_t* primes, size_t count, unsigned m, const int64_t* scales,
                                          fp_plan** out);
FP_API fp_status fp_plan_from_json(const char* json, fp_plan** out);
FP_API fp_status fp_plan_to_json(const fp_plan* plan, char** out_json);
FP_API void fp_plan_destroy(fp_plan* plan);
FP_API size_t fp_plan_stage_count(const fp_plan* plan);
FP_API fp_status fp_plan_scales(const fp_plan* plan, int64_t* out, size_t capacity);
FP_API fp_status fp_plan_heights(const fp_plan* plan, int64_t* out, size_t capacity);
/* budget 0 selects the default enumeration budget. */
FP_API fp_status fp_plan_dissociation(const fp_plan* plan, size_t stages, fp_dissociation_mode mode, int64_t budget,
                                      fp_dissociation_report* out);
FP_API fp_status fp_plan_dissociation_json(const fp_plan* plan, size_t stages, fp_dissociation_mode mode,
                                           int64_t budget, char** out_json);
/* Reduced coefficient of the partial product over stages 1..k. */
FP_API fp_status fp_plan_coefficient(const fp_plan* plan, size_t k, int64_t frequency, int64_t* num, int64_t* den);
FP_API fp_status fp_plan_coefficients_json(const fp_plan* plan, size_t k, char** out_json);
FP_API fp_status fp_plan_ergodicity_json(const fp_plan* plan, char** out_json);
/* x as "a/b", an integer or a finite decimal. */
FP_API fp_status fp_plan_quasi_invariance_json(const fp_plan* plan, const char* x, char** out_json);
/* grid_multiplier 0 selects 16. */
FP_API fp_status fp_plan_mahler(const fp_plan* plan, size_t stages, size_t grid_multiplier, double* value);
FP_API fp_status fp_plan_mahler_json(const fp_plan* plan, size_t stages, size_t grid_multiplier, char** out_json);

/* ---- rank-one constructions ------------------------------------------- */

FP_API fp_status fp_rankone_from_plan(const fp_plan* plan, fp_rankone** out);
/* spacers holds the stage lists back to back; lengths[j] is the cut count of stage j. */
FP_API fp_status fp_rankone_from_cutting(const int64_t* spacers, const size_t* lengths, size_t stages,
                                         fp_rankone** out);
FP_API void fp_rankone_destroy(fp_rankone* r);
FP_API size_t fp_rankone_stage_count(const fp_rankone* r);
/* h_k with h_0 = 1. */
FP_API fp_status fp_rankone_height(const fp_rankone* r, size_t k, int64_t* out);
FP_API fp_status fp_rankone_json(const fp_rankone* r, char** out_json);
FP_API fp_status fp_rankone_flow_json(const fp_plan* plan, const char* tau, char** out_json);
FP_API fp_status fp_rankone_growth_json(const fp_rankone* r, char** out_json);
FP_API fp_status fp_rankone_tower_json(const fp_rankone* r, size_t K, char** out_json);
/* *count always receives the full count; nothing is written when capacity is short. */
FP_API fp_status fp_rankone_base_occurrences(const fp_rankone* r, size_t k, size_t K, int64_t* out, size_t capacity,
                                             size_t* count);
/* sim_stage 0 simulates inside the stage-K tower. */
FP_API fp_status fp_rankone_correlation(const fp_rankone* r, size_t k, size_t K, int64_t n, size_t sim_stage,
                                        fp_correlation_report* out);

#ifdef __cplusplus
}
#endif

#endif

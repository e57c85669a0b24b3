#include "flatpoly/flatpoly.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "core/analysis.hpp"
#include "core/error.hpp"
#include "core/fft.hpp"
#include "core/mahler.hpp"
#include "core/number_theory.hpp"
#include "core/poly.hpp"
#include "core/rankone.hpp"
#include "core/report.hpp"
#include "core/riesz.hpp"
#include "core/singer.hpp"

struct fp_singer {
  flatpoly::SingerSet set;
  std::optional<flatpoly::FieldSpec> field;
};

struct fp_poly {
  flatpoly::NewmanPolynomial newman;
  flatpoly::CorrelationTable table;
  flatpoly::DefectPolynomial defect;
};

struct fp_plan {
  flatpoly::RieszPlan plan;
};

struct fp_rankone {
  flatpoly::RankOneParams params;
};

namespace {

using namespace flatpoly;

static_assert(FP_DEFAULT_GRID_MULTIPLIER == flatness_grid_multiplier);
static_assert(FP_DEFAULT_GRID_MULTIPLIER == mahler_grid_multiplier);
static_assert(FP_MIN_GRID_MULTIPLIER == min_flatness_grid_multiplier);
static_assert(FP_NEAR_ZERO_MODULUS == near_zero_modulus);
static_assert(FP_MAX_JENSEN_DEGREE == max_jensen_degree);
static_assert(FP_MAX_KERNEL_TAIL == max_kernel_tail);
static_assert(FP_MIN_KERNEL_TRUNCATION == min_kernel_truncation);
static_assert(FP_ENUMERATION_BUDGET == default_enumeration_budget);
static_assert(FP_MAX_TOWER_LEVELS == max_tower_levels);

thread_local std::string last_error;

fp_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return FP_ERR_INVALID_ARGUMENT;
    case ErrorCode::not_prime: return FP_ERR_NOT_PRIME;
    case ErrorCode::budget_exceeded: return FP_ERR_BUDGET_EXCEEDED;
    case ErrorCode::precondition: return FP_ERR_PRECONDITION;
    case ErrorCode::not_perfect_difference: return FP_ERR_NOT_PERFECT_DIFFERENCE;
    case ErrorCode::negative_spacer: return FP_ERR_NEGATIVE_SPACER;
    case ErrorCode::numeric_failure: return FP_ERR_NUMERIC_FAILURE;
    case ErrorCode::parse_error: return FP_ERR_PARSE;
  }
  return FP_ERR_INTERNAL;
}

struct BufferTooSmall {
  std::size_t needed;
};

// Runs fn, translating exceptions into status codes and the thread-local message.
template <class Fn>
fp_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return FP_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const BufferTooSmall& e) {
    last_error = "output buffer too small, need " + std::to_string(e.needed);
    return FP_ERR_BUFFER_TOO_SMALL;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return FP_ERR_BUDGET_EXCEEDED;
  } catch (const std::exception& e) {
    last_error = e.what();
    return FP_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return FP_ERR_INTERNAL;
  }
}

void require(const void* ptr, const char* name) {
  if (ptr == nullptr) fail(ErrorCode::invalid_argument, std::string(name) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit_json(const report::json& j, char** out) {
  require(out, "out_json");
  *out = dup_string(j.dump(2));
}

template <class T>
void copy_out(const std::vector<T>& v, T* out, std::size_t capacity) {
  if (capacity < v.size()) throw BufferTooSmall{v.size()};
  if (!v.empty()) require(out, "out");
  std::copy(v.begin(), v.end(), out);
}

std::int64_t to_int64(const BigInt& v) {
  if (v > BigInt(INT64_MAX) || v < BigInt(INT64_MIN)) fail(ErrorCode::budget_exceeded, "value exceeds 64 bits");
  return v.convert_to<std::int64_t>();
}

void split(const Rational& r, std::int64_t* num, std::int64_t* den) {
  *num = to_int64(boost::multiprecision::numerator(r));
  *den = to_int64(boost::multiprecision::denominator(r));
}

DensePolynomial dense_from(const double* re, const double* im, std::size_t count) {
  if (count > 0) require(re, "re");
  DensePolynomial d;
  d.coeffs.resize(count);
  for (std::size_t i = 0; i < count; ++i) d.coeffs[i] = Complex(re[i], im != nullptr ? im[i] : 0.0);
  return d;
}

DensePolynomial dense_of(const fp_poly* poly, fp_poly_kind kind) {
  return kind == FP_POLY_DEFECT ? to_dense(poly->defect) : to_dense(poly->newman);
}

MahlerReport run_mahler(const DensePolynomial& d, fp_mahler_method method, std::size_t grid) {
  switch (method) {
    case FP_MAHLER_LOG_INTEGRAL: return mahler_log(d, grid);
    case FP_MAHLER_JENSEN: return mahler_jensen(d);
  }
  fail(ErrorCode::invalid_argument, "unknown Mahler method");
}

void fill(const MahlerReport& r, fp_mahler_report* out) {
  out->method = r.method == MahlerMethod::jensen ? FP_MAHLER_JENSEN : FP_MAHLER_LOG_INTEGRAL;
  out->degree = r.degree;
  out->value = r.value;
  out->l1 = r.l1;
  out->grid_size = r.grid_size;
  out->perturbed_points = r.perturbed_points;
  out->roots_outside = r.roots_outside;
}

void fill(const MZReport& r, fp_mz_report* out) {
  out->alpha = r.alpha;
  out->n = r.n;
  out->discrete_mean = r.discrete_mean;
  out->integral = r.integral;
  out->ratio = r.ratio;
  out->integral_grid = r.integral_grid;
}

KernelSpec kernel_spec(double s, std::int64_t truncation) {
  if (!(s > 0)) fail(ErrorCode::invalid_argument, "kernel scale s must be positive");
  if (truncation == 0) return KernelSpec::with_default_truncation(s);
  if (truncation < min_kernel_truncation) {
    fail(ErrorCode::precondition, "truncation must be at least " + std::to_string(min_kernel_truncation));
  }
  return KernelSpec{s, truncation};
}

DissociationMode mode_of(fp_dissociation_mode mode) {
  switch (mode) {
    case FP_DISSOCIATION_FREQUENCY_SUMS: return DissociationMode::frequency_sums;
    case FP_DISSOCIATION_DIFFERENCE: return DissociationMode::difference_blocks;
  }
  fail(ErrorCode::invalid_argument, "unknown dissociation mode");
}

std::int64_t budget_or_default(std::int64_t budget) {
  if (budget < 0) fail(ErrorCode::invalid_argument, "budget must be nonnegative");
  return budget == 0 ? default_enumeration_budget : budget;
}

Rational parse_text(const char* text, const char* name) {
  require(text, name);
  return parse_rational(text);
}

}  // namespace

extern "C" {

const char* fp_version(void) { return FLATPOLY_VERSION_STRING; }

const char* fp_status_name(fp_status status) {
  switch (status) {
    case FP_OK: return "ok";
    case FP_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case FP_ERR_NOT_PRIME: return "not_prime";
    case FP_ERR_BUDGET_EXCEEDED: return "budget_exceeded";
    case FP_ERR_PRECONDITION: return "precondition";
    case FP_ERR_NOT_PERFECT_DIFFERENCE: return "not_perfect_difference";
    case FP_ERR_NEGATIVE_SPACER: return "negative_spacer";
    case FP_ERR_NUMERIC_FAILURE: return "numeric_failure";
    case FP_ERR_PARSE: return "parse_error";
    case FP_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
    case FP_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* fp_last_error(void) { return last_error.c_str(); }

void fp_string_free(char* s) { std::free(s); }

int fp_is_prime(uint64_t n) { return is_prime(n) ? 1 : 0; }

/* Singer sets */

fp_status fp_singer_create(uint64_t p, unsigned m, fp_singer** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    FieldSpec field = canonical_field(p, m);
    SingerSet set = normalize(construct_singer_raw(field));
    *out = new fp_singer{std::move(set), std::move(field)};
  });
}

fp_status fp_singer_from_residues(const int64_t* residues, size_t count, int64_t q, fp_singer** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (count > 0) require(residues, "residues");
    SingerSet set = normalize(singer_from_residues({residues, count}, q));
    *out = new fp_singer{std::move(set), std::nullopt};
  });
}

void fp_singer_destroy(fp_singer* set) { delete set; }

int64_t fp_singer_modulus(const fp_singer* set) { return set == nullptr ? 0 : set->set.q; }

size_t fp_singer_size(const fp_singer* set) { return set == nullptr ? 0 : set->set.size(); }

fp_status fp_singer_residues(const fp_singer* set, int64_t* out, size_t capacity) {
  return guarded([&] {
    require(set, "set");
    copy_out(set->set.residues, out, capacity);
  });
}

fp_status fp_singer_json(const fp_singer* set, char** out_json) {
  return guarded([&] {
    require(set, "set");
    report::json j;
    j["set"] = report::to_json(set->set);
    j["field"] = set->field ? report::to_json(*set->field) : report::json(nullptr);
    j["verification"] = report::to_json(verify_perfect_difference(set->set.residues, set->set.q));
    emit_json(j, out_json);
  });
}

fp_status fp_verify_perfect_difference(const int64_t* residues, size_t count, int64_t q, int* valid,
                                       int64_t* first_violation) {
  return guarded([&] {
    require(valid, "valid");
    if (count > 0) require(residues, "residues");
    const DifferenceReport r = verify_perfect_difference({residues, count}, q);
    *valid = r.valid ? 1 : 0;
    if (first_violation != nullptr) *first_violation = r.first_violation.value_or(-1);
  });
}

/* polynomials */

fp_status fp_poly_create(const fp_singer* set, fp_poly** out) {
  return guarded([&] {
    require(set, "set");
    require(out, "out");
    *out = nullptr;
    NewmanPolynomial p = build_polynomial(set->set);
    CorrelationTable t = correlations(p);
    DefectPolynomial d = defect_poly(t);
    *out = new fp_poly{std::move(p), std::move(t), std::move(d)};
  });
}

fp_status fp_poly_from_support(const int64_t* support, size_t count, int64_t q, fp_poly** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (count > 0) require(support, "support");
    NewmanPolynomial p = newman_from_support({support, count}, q);
    CorrelationTable t = correlations(p);
    DefectPolynomial d = defect_poly(t);
    *out = new fp_poly{std::move(p), std::move(t), std::move(d)};
  });
}

void fp_poly_destroy(fp_poly* poly) { delete poly; }

int64_t fp_poly_degree(const fp_poly* poly) { return poly == nullptr ? -1 : poly->newman.degree(); }

fp_status fp_poly_eval_grid(const fp_poly* poly, fp_poly_kind kind, size_t n, double* re, double* im) {
  return guarded([&] {
    require(poly, "poly");
    require(re, "re");
    require(im, "im");
    const GridValues g = kind == FP_POLY_DEFECT ? eval_grid(poly->defect, n) : eval_grid(poly->newman, n);
    for (std::size_t j = 0; j < g.n; ++j) {
      re[j] = g.values[j].real();
      im[j] = g.values[j].imag();
    }
  });
}

fp_status fp_poly_defect_at_one(const fp_poly* poly, int64_t* num, int64_t* den) {
  return guarded([&] {
    require(poly, "poly");
    require(num, "num");
    require(den, "den");
    split(poly->defect.value_at_one(), num, den);
  });
}

fp_status fp_flatness(const fp_poly* poly, double alpha, size_t grid_size, fp_flatness_report* out) {
  return guarded([&] {
    require(poly, "poly");
    require(out, "out");
    const std::size_t grid =
        grid_size == 0 ? flatness_grid_multiplier * static_cast<std::size_t>(poly->newman.q) : grid_size;
    const FlatnessReport r = flatness(poly->newman, alpha, grid);
    *out = fp_flatness_report{r.p_power, r.q, r.alpha, r.grid_size, r.defect_sq, r.defect_abs,
                              r.l1_norm, r.l2_defect_closed, r.s3_bound};
  });
}

fp_status fp_l2_defect_exact(const fp_poly* poly, fp_l2_exact_report* out) {
  return guarded([&] {
    require(poly, "poly");
    require(out, "out");
    const L2DefectExact r = l2_defect_exact(poly->table);
    out->value = r.value;
    split(r.squared, &out->squared_num, &out->squared_den);
    out->perfect_difference = r.perfect_difference ? 1 : 0;
  });
}

fp_status fp_mz_ratio(const fp_poly* poly, fp_poly_kind kind, double alpha, size_t n, size_t integral_grid,
                      fp_mz_report* out) {
  return guarded([&] {
    require(poly, "poly");
    require(out, "out");
    fill(mz_ratio(dense_of(poly, kind), alpha, n, integral_grid), out);
  });
}

fp_status fp_mz_ratio_dense(const double* re, const double* im, size_t count, double alpha, size_t n,
                            size_t integral_grid, fp_mz_report* out) {
  return guarded([&] {
    require(out, "out");
    fill(mz_ratio(dense_from(re, im, count), alpha, n, integral_grid), out);
  });
}

fp_status fp_mahler(const fp_poly* poly, fp_mahler_method method, size_t grid_size, fp_mahler_report* out) {
  return guarded([&] {
    require(poly, "poly");
    require(out, "out");
    fill(run_mahler(to_dense(poly->newman), method, grid_size), out);
  });
}

fp_status fp_mahler_dense(const double* re, const double* im, size_t count, fp_mahler_method method,
                          size_t grid_size, fp_mahler_report* out) {
  return guarded([&] {
    require(out, "out");
    fill(run_mahler(dense_from(re, im, count), method, grid_size), out);
  });
}

/* real-line flatness */

fp_status fp_kernel_value(double s, double theta, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = kernel_value(kernel_spec(s, min_kernel_truncation), theta);
  });
}

fp_status fp_periodized_kernel(double s, int64_t truncation, double theta, double* value, double* tail_bound) {
  return guarded([&] {
    require(value, "value");
    const PeriodizedValue v = periodized_kernel(kernel_spec(s, truncation), theta);
    *value = v.value;
    if (tail_bound != nullptr) *tail_bound = v.tail_bound;
  });
}

fp_status fp_kernel_default_truncation(double s, int64_t* truncation) {
  return guarded([&] {
    require(truncation, "truncation");
    *truncation = kernel_spec(s, 0).truncation;
  });
}

fp_status fp_realline(const fp_poly* poly, double alpha, double s, int64_t truncation, size_t grid_size,
                      fp_realline_report* out) {
  return guarded([&] {
    require(poly, "poly");
    require(out, "out");
    const std::size_t grid =
        grid_size == 0 ? flatness_grid_multiplier * static_cast<std::size_t>(poly->newman.q) : grid_size;
    const RealLineReport r = realline_flatness(poly->newman, alpha, kernel_spec(s, truncation), grid);
    *out = fp_realline_report{r.alpha, r.s, r.truncation, r.grid_size, r.value, r.tail_bound};
  });
}

/* Riesz plans */

fp_status fp_plan_create(const uint64_t* primes, size_t count, unsigned m, const char* rule, const int64_t* scales,
                         size_t scale_count, fp_plan** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (count > 0) require(primes, "primes");
    if (scale_count > 0) require(scales, "scales");
    const ScaleRule r = ScaleRule::parse(rule == nullptr ? "default" : rule,
                                         std::vector<std::int64_t>(scales, scales + scale_count));
    *out = new fp_plan{make_plan({primes, count}, r, m)};
  });
}

fp_status fp_plan_create_unchecked(const uint64_t* primes, size_t count, unsigned m, const int64_t* scales,
                                   fp_plan** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (count > 0) {
      require(primes, "primes");
      require(scales, "scales");
    }
    *out = new fp_plan{make_plan_unchecked({primes, count}, {scales, count}, m)};
  });
}

fp_status fp_plan_from_json(const char* json, fp_plan** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = nullptr;
    *out = new fp_plan{plan_from_json(json)};
  });
}

fp_status fp_plan_to_json(const fp_plan* plan, char** out_json) {
  return guarded([&] {
    require(plan, "plan");
    require(out_json, "out_json");
    *out_json = dup_string(plan_to_json(plan->plan));
  });
}

void fp_plan_destroy(fp_plan* plan) { delete plan; }

size_t fp_plan_stage_count(const fp_plan* plan) { return plan == nullptr ? 0 : plan->plan.stages.size(); }

fp_status fp_plan_scales(const fp_plan* plan, int64_t* out, size_t capacity) {
  return guarded([&] {
    require(plan, "plan");
    copy_out(plan->plan.scales(), out, capacity);
  });
}

fp_status fp_plan_heights(const fp_plan* plan, int64_t* out, size_t capacity) {
  return guarded([&] {
    require(plan, "plan");
    copy_out(plan->plan.heights(), out, capacity);
  });
}

fp_status fp_plan_dissociation(const fp_plan* plan, size_t stages, fp_dissociation_mode mode, int64_t budget,
                               fp_dissociation_report* out) {
  return guarded([&] {
    require(plan, "plan");
    require(out, "out");
    const DissociationCertificate c = check_dissociated(plan->plan, stages, mode_of(mode), budget_or_default(budget));
    *out = fp_dissociation_report{c.stages, mode, c.valid ? 1 : 0, c.combinations, c.collision_value ? 1 : 0,
                                  c.collision_value.value_or(0)};
  });
}

fp_status fp_plan_dissociation_json(const fp_plan* plan, size_t stages, fp_dissociation_mode mode, int64_t budget,
                                    char** out_json) {
  return guarded([&] {
    require(plan, "plan");
    emit_json(report::to_json(check_dissociated(plan->plan, stages, mode_of(mode), budget_or_default(budget))),
              out_json);
  });
}

fp_status fp_plan_coefficient(const fp_plan* plan, size_t k, int64_t frequency, int64_t* num, int64_t* den) {
  return guarded([&] {
    require(plan, "plan");
    require(num, "num");
    require(den, "den");
    split(partial_coeffs(plan->plan, k).coefficient(frequency), num, den);
  });
}

fp_status fp_plan_coefficients_json(const fp_plan* plan, size_t k, char** out_json) {
  return guarded([&] {
    require(plan, "plan");
    emit_json(report::to_json(partial_coeffs(plan->plan, k)), out_json);
  });
}

fp_status fp_plan_ergodicity_json(const fp_plan* plan, char** out_json) {
  return guarded([&] {
    require(plan, "plan");
    emit_json(report::to_json(ergodicity_sum(plan->plan)), out_json);
  });
}

fp_status fp_plan_quasi_invariance_json(const fp_plan* plan, const char* x, char** out_json) {
  return guarded([&] {
    require(plan, "plan");
    emit_json(report::to_json(quasi_invariance_sum(plan->plan, parse_text(x, "x"))), out_json);
  });
}

fp_status fp_plan_mahler(const fp_plan* plan, size_t stages, size_t grid_multiplier, double* value) {
  return guarded([&] {
    require(plan, "plan");
    require(value, "value");
    *value = riesz_mahler(plan->plan, stages, grid_multiplier == 0 ? mahler_grid_multiplier : grid_multiplier).value;
  });
}

fp_status fp_plan_mahler_json(const fp_plan* plan, size_t stages, size_t grid_multiplier, char** out_json) {
  return guarded([&] {
    require(plan, "plan");
    emit_json(report::to_json(riesz_mahler(plan->plan, stages,
                                           grid_multiplier == 0 ? mahler_grid_multiplier : grid_multiplier)),
              out_json);
  });
}

/* rank-one constructions */

fp_status fp_rankone_from_plan(const fp_plan* plan, fp_rankone** out) {
  return guarded([&] {
    require(plan, "plan");
    require(out, "out");
    *out = nullptr;
    *out = new fp_rankone{derive_map_params(plan->plan)};
  });
}

fp_status fp_rankone_from_cutting(const int64_t* spacers, const size_t* lengths, size_t stages, fp_rankone** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (stages > 0) require(lengths, "lengths");
    std::vector<std::vector<std::int64_t>> lists;
    std::size_t pos = 0;
    for (std::size_t j = 0; j < stages; ++j) {
      if (lengths[j] > 0) require(spacers, "spacers");
      lists.emplace_back(spacers + pos, spacers + pos + lengths[j]);
      pos += lengths[j];
    }
    *out = new fp_rankone{RankOneParams::from_cutting(lists)};
  });
}

void fp_rankone_destroy(fp_rankone* r) { delete r; }

size_t fp_rankone_stage_count(const fp_rankone* r) { return r == nullptr ? 0 : r->params.size(); }

fp_status fp_rankone_height(const fp_rankone* r, size_t k, int64_t* out) {
  return guarded([&] {
    require(r, "r");
    require(out, "out");
    *out = r->params.height(k);
  });
}

fp_status fp_rankone_json(const fp_rankone* r, char** out_json) {
  return guarded([&] {
    require(r, "r");
    emit_json(report::to_json(r->params), out_json);
  });
}

fp_status fp_rankone_flow_json(const fp_plan* plan, const char* tau, char** out_json) {
  return guarded([&] {
    require(plan, "plan");
    emit_json(report::to_json(derive_flow_params(plan->plan, parse_text(tau, "tau"))), out_json);
  });
}

fp_status fp_rankone_growth_json(const fp_rankone* r, char** out_json) {
  return guarded([&] {
    require(r, "r");
    emit_json(report::to_json(measure_growth(r->params)), out_json);
  });
}

fp_status fp_rankone_tower_json(const fp_rankone* r, size_t K, char** out_json) {
  return guarded([&] {
    require(r, "r");
    emit_json(report::to_json(build_tower(r->params, K)), out_json);
  });
}

fp_status fp_rankone_base_occurrences(const fp_rankone* r, size_t k, size_t K, int64_t* out, size_t capacity,
                                      size_t* count) {
  return guarded([&] {
    require(r, "r");
    require(count, "count");
    const std::vector<std::int64_t> occ = base_occurrences(r->params, k, K);
    *count = occ.size();
    if (!occ.empty()) require(out, "out");
    copy_out(occ, out, capacity);
  });
}

fp_status fp_rankone_correlation(const fp_rankone* r, size_t k, size_t K, int64_t n, size_t sim_stage,
                                 fp_correlation_report* out) {
  return guarded([&] {
    require(r, "r");
    require(out, "out");
    const CorrelationReport c = correlation(r->params, k, K, n, sim_stage);
    out->k = c.k;
    out->K = c.K;
    out->sim_stage = c.sim_stage;
    out->n = c.n;
    split(c.predicted, &out->predicted_num, &out->predicted_den);
    split(c.empirical, &out->empirical_num, &out->empirical_den);
    split(c.tolerance, &out->tolerance_num, &out->tolerance_den);
    out->within_tolerance = c.within_tolerance ? 1 : 0;
  });
}

}  // extern "C"

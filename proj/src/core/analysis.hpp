#pragma once

#include <cstdint>
#include <span>

#include "core/poly.hpp"
#include "core/rational.hpp"

namespace flatpoly {

// Fixed-order block-wise Neumaier summation.
double stable_sum(std::span<const double> terms);
double stable_mean(std::span<const double> terms);

/// (1/N) sum_j |values[j]|^alpha.
double lp_mean(const GridValues& grid, double alpha);
/// lp_mean^(1/alpha).
double lp_norm(const GridValues& grid, double alpha);

struct FlatnessReport {
  std::int64_t p_power = 0;  // p^m = |S| - 1
  std::int64_t q = 0;
  double alpha = 0;
  std::size_t grid_size = 0;
  double defect_sq = 0;   // || |P|^2 - 1 ||_alpha
  double defect_abs = 0;  // || |P| - 1 ||_alpha
  double l1_norm = 0;
  double l2_defect_closed = 0;  // sqrt(p^m / (p^m + 1))
  double s3_bound = 0;          // p^a/q + ((q-1)/q)(p+1)^-a, constant taken as 1
};

inline constexpr std::size_t flatness_grid_multiplier = 16;
inline constexpr std::size_t min_flatness_grid_multiplier = 8;

FlatnessReport flatness(const NewmanPolynomial& poly, double alpha, std::size_t grid_size);

struct L2DefectExact {
  double value = 0;
  Rational squared;  // sum_{l != 0} c_l^2 / |S|^2
  bool perfect_difference = false;
};

L2DefectExact l2_defect_exact(const CorrelationTable& table);

struct MZReport {
  double alpha = 0;
  std::size_t n = 0;
  double discrete_mean = 0;  // (1/n) sum |P(w^j)|^alpha
  double integral = 0;       // ||P||_alpha^alpha
  double ratio = 0;
  std::size_t integral_grid = 0;
};

// integral_grid = 0 picks max(2^14, next power of two >= 16 (deg + 1)).
MZReport mz_ratio(const DensePolynomial& poly, double alpha, std::size_t n, std::size_t integral_grid = 0);

/// Fejer kernel K_s(t) = (s / 2 pi) (sin(s t / 2) / (s t / 2))^2 and its
/// 2 pi-periodization, truncated to |n| <= truncation shifts.
struct KernelSpec {
  double s = 1.0;
  std::int64_t truncation = 8;

  // Smallest truncation >= 8 whose tail bound is at most `tolerance`.
  static KernelSpec with_default_truncation(double s, double tolerance = 1e-9);
};

inline constexpr std::int64_t min_kernel_truncation = 8;
inline constexpr double max_kernel_tail = 1e-8;

double kernel_value(const KernelSpec& spec, double theta);

struct PeriodizedValue {
  double value = 0;       // 2 pi sum_n K_s(theta + 2 pi n)
  double tail_bound = 0;  // bound on the part not summed or modelled
};

/// The truncated sum is completed by the exact non-oscillating tail
/// (1 / pi s) sum_{|n| > T} (theta + 2 pi n)^-2 through the trigamma function;
/// for integer s the oscillating part is exact too, otherwise it is bounded by
/// Abel summation and reported.
PeriodizedValue periodized_kernel(const KernelSpec& spec, double theta);

// Supremum over theta of the periodized tail bound.
double periodized_tail_bound(const KernelSpec& spec);

/// (1/N) sum_j samples[j] * Ktilde_s(2 pi j / N).
double periodized_mean(std::span<const double> samples, const KernelSpec& spec);

struct RealLineReport {
  double alpha = 0;
  double s = 0;
  std::int64_t truncation = 0;
  std::size_t grid_size = 0;
  double value = 0;  // int_R | |P(t)| - 1 |^alpha d lambda_s
  double tail_bound = 0;
};

RealLineReport realline_flatness(const NewmanPolynomial& poly, double alpha, const KernelSpec& spec,
                                 std::size_t circle_grid);

}  // namespace flatpoly

#pragma once

#include <cstdint>
#include <vector>

#include "core/poly.hpp"

namespace flatpoly {

struct RieszPlan;

enum class MahlerMethod { log_integral, jensen };

const char* to_string(MahlerMethod method) noexcept;

struct MahlerReport {
  MahlerMethod method = MahlerMethod::log_integral;
  std::int64_t degree = 0;
  double value = 0;  // M(P)
  double l1 = 0;     // ||P||_1 on the same (or a default) grid
  std::size_t grid_size = 0;
  std::size_t perturbed_points = 0;     // log-integral: points moved off a near-root
  std::int64_t roots_outside = 0;       // jensen: roots with |z| > 1
};

inline constexpr std::size_t mahler_grid_multiplier = 16;
inline constexpr std::int64_t max_jensen_degree = 2048;
inline constexpr double near_zero_modulus = 1e-14;

// Midpoint-rule grid mean of log|P|; grid_size = 0 picks the smallest power
// of two >= max(16 * degree, 4096).
MahlerReport mahler_log(const DensePolynomial& poly, std::size_t grid_size = 0);

// |lead| * prod_{|z| > 1} |z| over companion-matrix eigenvalues.
MahlerReport mahler_jensen(const DensePolynomial& poly);

struct RieszMahlerReport {
  std::vector<double> factors;          // M(P_{q_j})^2
  std::vector<double> partial_products; // prod_{i <= j} factors[i]
  double value = 0;
};

// M(P(z^N)) = M(P), so scales drop out and only the stage sets matter.
RieszMahlerReport riesz_mahler(const RieszPlan& plan, std::size_t stages, std::size_t grid_multiplier = 16);

}  // namespace flatpoly

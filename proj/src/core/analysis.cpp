#include "core/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/special_functions/trigamma.hpp>

#include "core/error.hpp"
#include "core/fft.hpp"

namespace flatpoly {
namespace {

constexpr std::size_t block_size = 1024;
constexpr double two_pi = 2.0 * std::numbers::pi;

struct Neumaier {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double total() const { return sum + carry; }
};

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    fail(ErrorCode::invalid_argument, "exponent alpha must be positive and finite");
  }
}

double pow_abs(double x, double alpha) {
  x = std::abs(x);
  if (alpha == 1.0) return x;
  if (alpha == 2.0) return x * x;
  return std::pow(x, alpha);
}

bool is_integer(double s) { return s == std::round(s); }

}  // namespace

double stable_sum(std::span<const double> terms) {
  Neumaier outer;
  for (std::size_t start = 0; start < terms.size(); start += block_size) {
    Neumaier inner;
    const std::size_t stop = std::min(terms.size(), start + block_size);
    for (std::size_t i = start; i < stop; ++i) inner.add(terms[i]);
    outer.add(inner.total());
  }
  return outer.total();
}

double stable_mean(std::span<const double> terms) {
  if (terms.empty()) fail(ErrorCode::invalid_argument, "mean of an empty sample");
  return stable_sum(terms) / static_cast<double>(terms.size());
}

double lp_mean(const GridValues& grid, double alpha) {
  require_alpha(alpha);
  std::vector<double> terms(grid.values.size());
  for (std::size_t j = 0; j < terms.size(); ++j) terms[j] = pow_abs(std::abs(grid.values[j]), alpha);
  return stable_mean(terms);
}

double lp_norm(const GridValues& grid, double alpha) { return std::pow(lp_mean(grid, alpha), 1.0 / alpha); }

FlatnessReport flatness(const NewmanPolynomial& poly, double alpha, std::size_t grid_size) {
  require_alpha(alpha);
  if (alpha > 2.0) fail(ErrorCode::invalid_argument, "flatness is reported for alpha in (0, 2]");
  if (grid_size < min_flatness_grid_multiplier * static_cast<std::size_t>(poly.q)) {
    std::ostringstream msg;
    msg << "grid " << grid_size << " is below " << min_flatness_grid_multiplier << "q = "
        << min_flatness_grid_multiplier * static_cast<std::size_t>(poly.q);
    fail(ErrorCode::precondition, msg.str());
  }
  const GridValues grid = eval_grid(poly, grid_size);
  std::vector<double> sq(grid_size), ab(grid_size), mod(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j) {
    const double m = std::abs(grid.values[j]);
    mod[j] = m;
    sq[j] = pow_abs(std::norm(grid.values[j]) - 1.0, alpha);
    ab[j] = pow_abs(m - 1.0, alpha);
  }
  FlatnessReport r;
  r.p_power = poly.size() - 1;
  r.q = poly.q;
  r.alpha = alpha;
  r.grid_size = grid_size;
  r.defect_sq = std::pow(stable_mean(sq), 1.0 / alpha);
  r.defect_abs = std::pow(stable_mean(ab), 1.0 / alpha);
  r.l1_norm = stable_mean(mod);
  const auto pm = static_cast<double>(r.p_power);
  const auto q = static_cast<double>(r.q);
  r.l2_defect_closed = std::sqrt(pm / (pm + 1.0));
  r.s3_bound = std::pow(pm, alpha) / q + ((q - 1.0) / q) * std::pow(pm + 1.0, -alpha);
  return r;
}

L2DefectExact l2_defect_exact(const CorrelationTable& table) {
  BigInt sum_sq = 0;
  for (std::int64_t l = 1 - table.q; l < table.q; ++l) {
    if (l == 0) continue;
    const BigInt c = table.aperiodic(l);
    sum_sq += c * c;
  }
  L2DefectExact out;
  const BigInt s = table.support_size;
  out.squared = Rational(sum_sq, s * s);
  out.value = std::sqrt(to_double(out.squared));
  out.perfect_difference = true;
  for (std::int64_t r = 1; r < table.q; ++r) {
    if (table.cyclic(r) != 1) {
      out.perfect_difference = false;
      break;
    }
  }
  return out;
}

MZReport mz_ratio(const DensePolynomial& poly, double alpha, std::size_t n, std::size_t integral_grid) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) fail(ErrorCode::invalid_argument, "MZ ratios need alpha > 1");
  if (poly.is_zero()) fail(ErrorCode::invalid_argument, "zero polynomial");
  const auto deg = static_cast<std::size_t>(poly.degree());
  if (n == 0 || deg >= n) {
    fail(ErrorCode::precondition,
         "degree " + std::to_string(deg) + " must be at most n - 1 = " + std::to_string(n == 0 ? 0 : n - 1));
  }
  if (integral_grid == 0) integral_grid = std::max<std::size_t>(1u << 14, fft::next_power_of_two(16 * (deg + 1)));
  MZReport r;
  r.alpha = alpha;
  r.n = n;
  r.integral_grid = integral_grid;
  r.discrete_mean = lp_mean(eval_grid(poly, n), alpha);
  r.integral = lp_mean(eval_grid(poly, integral_grid), alpha);
  r.ratio = r.discrete_mean / r.integral;
  return r;
}

KernelSpec KernelSpec::with_default_truncation(double s, double tolerance) {
  KernelSpec spec{s, min_kernel_truncation};
  if (!(s > 0.0)) fail(ErrorCode::invalid_argument, "kernel scale s must be positive");
  // The bound decays like T^-2; doubling then bisecting keeps this cheap.
  std::int64_t hi = min_kernel_truncation;
  while (periodized_tail_bound({s, hi}) > tolerance) {
    if (hi > (std::int64_t{1} << 40)) fail(ErrorCode::budget_exceeded, "kernel truncation would exceed 2^40 terms");
    hi *= 2;
  }
  std::int64_t lo = std::max<std::int64_t>(min_kernel_truncation, hi / 2);
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (periodized_tail_bound({s, mid}) > tolerance) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  spec.truncation = hi;
  return spec;
}

double kernel_value(const KernelSpec& spec, double theta) {
  if (!(spec.s > 0.0)) fail(ErrorCode::invalid_argument, "kernel scale s must be positive");
  const double x = 0.5 * spec.s * theta;
  double sinc;
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    sinc = 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  } else {
    sinc = std::sin(x) / x;
  }
  return spec.s / two_pi * sinc * sinc;
}

double periodized_tail_bound(const KernelSpec& spec) {
  if (!(spec.s > 0.0)) fail(ErrorCode::invalid_argument, "kernel scale s must be positive");
  if (is_integer(spec.s)) return 0.0;
  const double sin_ps = std::abs(std::sin(std::numbers::pi * spec.s));
  const auto t = static_cast<double>(spec.truncation);
  const double a = two_pi * (t + 1.0);
  const double b = two_pi * t;
  return two_pi / (std::numbers::pi * spec.s * sin_ps) * (1.0 / (a * a) + 1.0 / (b * b));
}

PeriodizedValue periodized_kernel(const KernelSpec& spec, double theta) {
  if (!(spec.s > 0.0)) fail(ErrorCode::invalid_argument, "kernel scale s must be positive");
  if (spec.truncation < min_kernel_truncation) {
    fail(ErrorCode::precondition, "kernel truncation must be at least " + std::to_string(min_kernel_truncation));
  }
  theta = std::fmod(theta, two_pi);
  if (theta < 0) theta += two_pi;

  Neumaier acc;
  for (std::int64_t n = -spec.truncation; n <= spec.truncation; ++n) {
    acc.add(kernel_value(spec, theta + two_pi * static_cast<double>(n)));
  }
  // sum_{n > T} (theta + 2 pi n)^-2 = psi'(T + 1 + x) / (4 pi^2), x = theta / 2 pi,
  // and symmetrically for n < -T.
  const double x = theta / two_pi;
  const auto t = static_cast<double>(spec.truncation);
  const double envelope = (boost::math::trigamma(t + 1.0 + x) + boost::math::trigamma(t + 1.0 - x)) /
                          (two_pi * two_pi) / (std::numbers::pi * spec.s);
  PeriodizedValue out;
  if (is_integer(spec.s)) {
    acc.add(envelope * (1.0 - std::cos(spec.s * theta)));
    out.tail_bound = 0.0;
  } else {
    acc.add(envelope);
    const double sin_ps = std::abs(std::sin(std::numbers::pi * spec.s));
    const double a = theta + two_pi * (t + 1.0);
    const double b = two_pi * (t + 1.0) - theta;
    out.tail_bound = two_pi / (std::numbers::pi * spec.s * sin_ps) * (1.0 / (a * a) + 1.0 / (b * b));
  }
  out.value = two_pi * acc.total();
  return out;
}

double periodized_mean(std::span<const double> samples, const KernelSpec& spec) {
  const double tail = periodized_tail_bound(spec);
  if (tail > max_kernel_tail) {
    std::ostringstream msg;
    msg << "kernel truncation " << spec.truncation << " leaves an estimated tail of " << tail << " > "
        << max_kernel_tail;
    fail(ErrorCode::precondition, msg.str());
  }
  const std::size_t n = samples.size();
  std::vector<double> terms(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double theta = two_pi * static_cast<double>(j) / static_cast<double>(n);
    terms[j] = samples[j] * periodized_kernel(spec, theta).value;
  }
  return stable_mean(terms);
}

RealLineReport realline_flatness(const NewmanPolynomial& poly, double alpha, const KernelSpec& spec,
                                 std::size_t circle_grid) {
  require_alpha(alpha);
  if (circle_grid < min_flatness_grid_multiplier * static_cast<std::size_t>(poly.q)) {
    fail(ErrorCode::precondition, "circle grid must be at least 8q");
  }
  const GridValues grid = eval_grid(poly, circle_grid);
  std::vector<double> f(circle_grid);
  for (std::size_t j = 0; j < circle_grid; ++j) f[j] = pow_abs(std::abs(grid.values[j]) - 1.0, alpha);
  RealLineReport r;
  r.alpha = alpha;
  r.s = spec.s;
  r.truncation = spec.truncation;
  r.grid_size = circle_grid;
  r.value = periodized_mean(f, spec);
  r.tail_bound = periodized_tail_bound(spec);
  return r;
}

}  // namespace flatpoly

#include "core/mahler.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "core/analysis.hpp"
#include "core/error.hpp"
#include "core/fft.hpp"
#include "core/riesz.hpp"

namespace flatpoly {

const char* to_string(MahlerMethod method) noexcept {
  return method == MahlerMethod::jensen ? "jensen" : "log_integral";
}

MahlerReport mahler_log(const DensePolynomial& poly, std::size_t grid_size) {
  if (poly.is_zero()) fail(ErrorCode::invalid_argument, "Mahler measure of the zero polynomial");
  const std::int64_t deg = poly.degree();
  const std::size_t min_grid = mahler_grid_multiplier * static_cast<std::size_t>(std::max<std::int64_t>(deg, 1));
  if (grid_size == 0) grid_size = fft::next_power_of_two(std::max<std::size_t>(min_grid, 4096));
  if (grid_size < min_grid) {
    fail(ErrorCode::precondition, "log-integral grid must be at least 16 * degree = " + std::to_string(min_grid));
  }
  const GridValues grid = eval_grid(poly, grid_size, /*midpoint=*/true);

  MahlerReport r;
  r.method = MahlerMethod::log_integral;
  r.degree = deg;
  r.grid_size = grid_size;
  std::vector<double> logs(grid_size), mods(grid_size);
  std::size_t usable = 0;
  for (std::size_t j = 0; j < grid_size; ++j) {
    double m = std::abs(grid.values[j]);
    if (m < near_zero_modulus) {
      // Move half a step further, off the (rational-angle) root.
      const double theta = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.75) / static_cast<double>(grid_size);
      m = std::abs(poly.evaluate(std::polar(1.0, theta)));
      ++r.perturbed_points;
    }
    if (m >= near_zero_modulus) ++usable;
    mods[j] = m;
    logs[j] = std::log(std::max(m, near_zero_modulus));
  }
  if (usable == 0) fail(ErrorCode::numeric_failure, "polynomial vanishes on the whole grid");
  r.value = std::exp(stable_mean(logs));
  r.l1 = stable_mean(mods);
  return r;
}

MahlerReport mahler_jensen(const DensePolynomial& poly) {
  if (poly.is_zero()) fail(ErrorCode::invalid_argument, "Mahler measure of the zero polynomial");
  const std::int64_t deg = poly.degree();
  if (deg > max_jensen_degree) {
    fail(ErrorCode::budget_exceeded,
         "degree " + std::to_string(deg) + " exceeds the root-finding budget of " + std::to_string(max_jensen_degree));
  }
  // Roots at the origin contribute nothing; strip them.
  std::size_t low = 0;
  while (poly.coeffs[low] == Complex{}) ++low;
  const auto top = static_cast<std::size_t>(deg);
  const Complex lead = poly.coeffs[top];
  const auto n = static_cast<Eigen::Index>(top - low);

  MahlerReport r;
  r.method = MahlerMethod::jensen;
  r.degree = deg;
  r.l1 = mahler_log(poly).l1;
  double product = std::abs(lead);
  if (n > 0) {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) companion(i, n - 1) = -poly.coeffs[low + static_cast<std::size_t>(i)] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) fail(ErrorCode::numeric_failure, "companion eigenvalue iteration did not converge");
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = std::abs(solver.eigenvalues()[i]);
      if (m > 1.0) {
        product *= m;
        ++r.roots_outside;
      }
    }
  }
  r.value = product;
  return r;
}

RieszMahlerReport riesz_mahler(const RieszPlan& plan, std::size_t stages, std::size_t grid_multiplier) {
  if (stages == 0 || stages > plan.stages.size()) {
    fail(ErrorCode::precondition, "plan has " + std::to_string(plan.stages.size()) + " stages, requested " +
                                      std::to_string(stages));
  }
  RieszMahlerReport r;
  double running = 1.0;
  for (std::size_t j = 0; j < stages; ++j) {
    const auto& set = plan.stages[j].set;
    const std::size_t grid = fft::next_power_of_two(grid_multiplier * static_cast<std::size_t>(set.q));
    const double m = mahler_log(to_dense(build_polynomial(set)), grid).value;
    r.factors.push_back(m * m);
    running *= m * m;
    r.partial_products.push_back(running);
  }
  r.value = running;
  return r;
}

}  // namespace flatpoly

#include "core/poly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/error.hpp"
#include "core/fft.hpp"

namespace flatpoly {

double InverseSqrt::value() const { return 1.0 / std::sqrt(static_cast<double>(radicand)); }

Complex NewmanPolynomial::evaluate(Complex z) const {
  Complex acc{};
  Complex power{1.0, 0.0};
  std::int64_t at = 0;
  for (std::int64_t s : support) {
    power *= std::pow(z, static_cast<double>(s - at));
    at = s;
    acc += power;
  }
  return acc * scale.value();
}

Complex NewmanPolynomial::evaluate_angle(double theta) const {
  Complex acc{};
  for (std::int64_t s : support) acc += std::polar(1.0, theta * static_cast<double>(s));
  return acc * scale.value();
}

std::int64_t CorrelationTable::aperiodic(std::int64_t l) const {
  if (l <= -q || l >= q) return 0;
  return aperiodic_counts[static_cast<std::size_t>(l + q - 1)];
}

std::int64_t CorrelationTable::cyclic(std::int64_t r) const {
  r %= q;
  if (r < 0) r += q;
  return cyclic_counts[static_cast<std::size_t>(r)];
}

Rational DefectPolynomial::coefficient(std::int64_t l) const {
  if (l <= 0 || l >= q) return Rational(0);
  return make_rational(numerators[static_cast<std::size_t>(l)], support_size);
}

Rational DefectPolynomial::value_at_one() const {
  std::int64_t total = 0;
  for (auto v : numerators) total += v;
  return make_rational(total, support_size);
}

Complex DefectPolynomial::evaluate(Complex z) const {
  Complex acc{};
  for (std::size_t l = numerators.size(); l-- > 0;) acc = acc * z + static_cast<double>(numerators[l]);
  return acc / static_cast<double>(support_size);
}

std::int64_t DensePolynomial::degree() const noexcept {
  for (std::size_t i = coeffs.size(); i-- > 0;)
    if (coeffs[i] != Complex{}) return static_cast<std::int64_t>(i);
  return -1;
}

Complex DensePolynomial::evaluate(Complex z) const {
  Complex acc{};
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
  return acc;
}

bool DensePolynomial::is_zero() const noexcept { return degree() < 0; }

NewmanPolynomial newman_from_support(std::span<const std::int64_t> support, std::int64_t q) {
  if (support.empty()) fail(ErrorCode::invalid_argument, "support must be nonempty");
  NewmanPolynomial poly;
  poly.q = q;
  poly.support.assign(support.begin(), support.end());
  std::sort(poly.support.begin(), poly.support.end());
  for (std::size_t i = 0; i < poly.support.size(); ++i) {
    if (poly.support[i] < 0 || poly.support[i] >= q) {
      fail(ErrorCode::invalid_argument, "exponent " + std::to_string(poly.support[i]) + " outside [0, q)");
    }
    if (i > 0 && poly.support[i] == poly.support[i - 1]) fail(ErrorCode::invalid_argument, "duplicate exponent");
  }
  poly.scale.radicand = poly.size();
  return poly;
}

NewmanPolynomial build_polynomial(const SingerSet& set) { return newman_from_support(set.residues, set.q); }

CorrelationTable correlations(const NewmanPolynomial& poly) {
  CorrelationTable t;
  t.q = poly.q;
  t.support_size = poly.size();
  t.aperiodic_counts.assign(static_cast<std::size_t>(2 * poly.q - 1), 0);
  t.cyclic_counts.assign(static_cast<std::size_t>(poly.q), 0);
  for (std::int64_t s : poly.support) {
    for (std::int64_t u : poly.support) {
      const std::int64_t l = s - u;
      ++t.aperiodic_counts[static_cast<std::size_t>(l + poly.q - 1)];
      ++t.cyclic_counts[static_cast<std::size_t>(((l % poly.q) + poly.q) % poly.q)];
    }
  }
  return t;
}

CorrelationTable correlations(const SingerSet& set) { return correlations(build_polynomial(set)); }

DefectPolynomial defect_poly(const CorrelationTable& table) {
  DefectPolynomial d;
  d.q = table.q;
  d.support_size = table.support_size;
  d.numerators.assign(static_cast<std::size_t>(table.q), 0);
  for (std::int64_t l = 1; l < table.q; ++l) d.numerators[static_cast<std::size_t>(l)] = table.cyclic(l);
  return d;
}

DefectPolynomial defect_poly(const SingerSet& set) { return defect_poly(correlations(set)); }

DensePolynomial to_dense(const NewmanPolynomial& poly) {
  DensePolynomial d;
  d.coeffs.assign(static_cast<std::size_t>(poly.degree() + 1), Complex{});
  const double c = poly.scale.value();
  for (std::int64_t s : poly.support) d.coeffs[static_cast<std::size_t>(s)] = c;
  return d;
}

DensePolynomial to_dense(const DefectPolynomial& poly) {
  DensePolynomial d;
  d.coeffs.resize(poly.numerators.size());
  for (std::size_t l = 0; l < poly.numerators.size(); ++l) {
    d.coeffs[l] = static_cast<double>(poly.numerators[l]) / static_cast<double>(poly.support_size);
  }
  return d;
}

DensePolynomial multiply(const DensePolynomial& a, const DensePolynomial& b) {
  DensePolynomial r;
  if (a.coeffs.empty() || b.coeffs.empty()) return r;
  r.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, Complex{});
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) r.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  return r;
}

GridValues eval_grid(const NewmanPolynomial& poly, std::size_t n) {
  if (static_cast<std::int64_t>(n) < poly.q) {
    fail(ErrorCode::precondition, "grid size " + std::to_string(n) + " is smaller than q = " + std::to_string(poly.q));
  }
  std::vector<Complex> coeffs(static_cast<std::size_t>(poly.degree() + 1), Complex{});
  const double c = poly.scale.value();
  for (std::int64_t s : poly.support) coeffs[static_cast<std::size_t>(s)] = c;
  return {n, fft::evaluate_at_roots(coeffs, n)};
}

GridValues eval_grid(const DefectPolynomial& poly, std::size_t n) {
  if (static_cast<std::int64_t>(n) < poly.q) {
    fail(ErrorCode::precondition, "grid size " + std::to_string(n) + " is smaller than q = " + std::to_string(poly.q));
  }
  return {n, fft::evaluate_at_roots(to_dense(poly).coeffs, n)};
}

GridValues eval_grid(const DensePolynomial& poly, std::size_t n, bool midpoint) {
  if (n == 0) fail(ErrorCode::invalid_argument, "grid size must be positive");
  if (!midpoint) return {n, fft::evaluate_at_roots(poly.coeffs, n)};
  std::vector<Complex> twisted(poly.coeffs.size());
  for (std::size_t k = 0; k < poly.coeffs.size(); ++k) twisted[k] = poly.coeffs[k] * fft::unit_root(k % (2 * n), 2 * n);
  return {n, fft::evaluate_at_roots(twisted, n)};
}

}  // namespace flatpoly

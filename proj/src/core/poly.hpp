#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "core/rational.hpp"
#include "core/singer.hpp"

namespace flatpoly {

using Complex = std::complex<double>;

// 1 / sqrt(radicand), kept symbolic.
struct InverseSqrt {
  std::int64_t radicand = 1;
  double value() const;
};

/// (1/sqrt|S|) * sum_{s in S} z^s with exponents in [0, q).
struct NewmanPolynomial {
  std::int64_t q = 0;
  std::vector<std::int64_t> support;  // sorted
  InverseSqrt scale;

  std::int64_t size() const noexcept { return static_cast<std::int64_t>(support.size()); }
  std::int64_t degree() const noexcept { return support.empty() ? 0 : support.back(); }
  Complex evaluate(Complex z) const;
  Complex evaluate_angle(double theta) const;  // P(e^{i theta})
};

/// Aperiodic counts c_l (l in [-(q-1), q-1]) and cyclic counts gamma_r
/// (r in [0, q)) of ordered support pairs with difference l, resp. r mod q.
struct CorrelationTable {
  std::int64_t q = 0;
  std::int64_t support_size = 0;
  std::vector<std::int64_t> aperiodic_counts;  // index l + q - 1
  std::vector<std::int64_t> cyclic_counts;     // index r

  std::int64_t aperiodic(std::int64_t l) const;
  std::int64_t cyclic(std::int64_t r) const;
};

/// Q(z) = (1/|S|) sum_{l=1}^{q-1} gamma_l z^l, built on cyclic counts.
struct DefectPolynomial {
  std::int64_t q = 0;
  std::int64_t support_size = 0;
  std::vector<std::int64_t> numerators;  // index l; numerators[0] == 0

  Rational coefficient(std::int64_t l) const;
  Rational value_at_one() const;
  Complex evaluate(Complex z) const;
};

struct GridValues {
  std::size_t n = 0;
  std::vector<Complex> values;  // values[j] = P(exp(2 pi i (j + offset) / n))
};

// Dense complex coefficients, low degree first.
struct DensePolynomial {
  std::vector<Complex> coeffs;

  std::int64_t degree() const noexcept;  // -1 for the zero polynomial
  Complex evaluate(Complex z) const;
  bool is_zero() const noexcept;
};

NewmanPolynomial build_polynomial(const SingerSet& set);
NewmanPolynomial newman_from_support(std::span<const std::int64_t> support, std::int64_t q);

CorrelationTable correlations(const SingerSet& set);
CorrelationTable correlations(const NewmanPolynomial& poly);

DefectPolynomial defect_poly(const SingerSet& set);
DefectPolynomial defect_poly(const CorrelationTable& table);

GridValues eval_grid(const NewmanPolynomial& poly, std::size_t n);
GridValues eval_grid(const DefectPolynomial& poly, std::size_t n);
// Half-step offset grid when `midpoint` is set.
GridValues eval_grid(const DensePolynomial& poly, std::size_t n, bool midpoint = false);

DensePolynomial to_dense(const NewmanPolynomial& poly);
DensePolynomial to_dense(const DefectPolynomial& poly);
DensePolynomial multiply(const DensePolynomial& a, const DensePolynomial& b);

}  // namespace flatpoly

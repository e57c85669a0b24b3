#include "core/fft.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "core/error.hpp"

namespace flatpoly::fft {
namespace {

// Table of exp(2 pi i r / n), r in [0, n); uses octant symmetry so each entry
// comes from an angle in [0, pi/4].
std::vector<Complex> root_table(std::size_t n) {
  std::vector<Complex> t(n);
  for (std::size_t r = 0; r < n; ++r) t[r] = unit_root(r, n);
  return t;
}

// In-place radix-2 transform with exponent sign `sign` (+1 or -1), no scaling.
void radix2(std::vector<Complex>& a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const std::vector<Complex> roots = root_table(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    const std::size_t half = len >> 1;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        Complex w = roots[k * stride];
        if (sign < 0) w = std::conj(w);
        const Complex u = a[i + k];
        const Complex v = a[i + k + half] * w;
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

std::vector<Complex> fold(std::span<const Complex> coeffs, std::size_t n) {
  std::vector<Complex> a(n, Complex{});
  for (std::size_t k = 0; k < coeffs.size(); ++k) a[k % n] += coeffs[k];
  return a;
}

std::vector<Complex> bluestein(std::vector<Complex> x) {
  const std::size_t n = x.size();
  const std::size_t m = next_power_of_two(2 * n - 1);
  // chirp[t] = exp(pi i t^2 / n), with t^2 reduced mod 2n.
  std::vector<Complex> chirp(n);
  for (std::size_t t = 0; t < n; ++t) {
    const auto r = static_cast<std::size_t>((static_cast<unsigned __int128>(t) * t) % (2 * n));
    chirp[t] = unit_root(r, 2 * n);
  }
  std::vector<Complex> a(m, Complex{}), b(m, Complex{});
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
  b[0] = std::conj(chirp[0]);
  for (std::size_t t = 1; t < n; ++t) b[t] = b[m - t] = std::conj(chirp[t]);
  radix2(a, -1);
  radix2(b, -1);
  for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
  radix2(a, +1);
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t j = 0; j < n; ++j) x[j] = chirp[j] * a[j] * inv_m;
  return x;
}

}  // namespace

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

Complex unit_root(std::size_t r, std::size_t n) {
  r %= n;
  // Reduce to the first octant: angle = 2 pi r / n = (pi/4) * (8r / n).
  const unsigned __int128 eight_r = static_cast<unsigned __int128>(r) * 8;
  const auto octant = static_cast<unsigned>(eight_r / n);
  const auto rem = static_cast<double>(static_cast<std::size_t>(eight_r % n));
  const double quarter = std::numbers::pi / 4.0;
  double theta = quarter * rem / static_cast<double>(n);  // in [0, pi/4)
  double c, s;
  if (octant & 1) {
    theta = quarter - theta;
    c = std::sin(theta);
    s = std::cos(theta);
  } else {
    c = std::cos(theta);
    s = std::sin(theta);
  }
  // (c, s) is now the point at angle octant_base + offset within [0, pi/2)
  // for octants 0 and 1; rotate by multiples of pi/2.
  switch (octant / 2) {
    case 0: return {c, s};
    case 1: return {-s, c};
    case 2: return {-c, -s};
    default: return {s, -c};
  }
}

std::vector<Complex> evaluate_at_roots(std::span<const Complex> coeffs, std::size_t n) {
  if (n == 0) fail(ErrorCode::invalid_argument, "transform length must be positive");
  if (n < direct_cutoff) return evaluate_at_roots_direct(coeffs, n);
  std::vector<Complex> a = fold(coeffs, n);
  if (is_power_of_two(n)) {
    radix2(a, +1);
    return a;
  }
  return bluestein(std::move(a));
}

std::vector<Complex> evaluate_at_roots_direct(std::span<const Complex> coeffs, std::size_t n) {
  if (n == 0) fail(ErrorCode::invalid_argument, "transform length must be positive");
  const std::vector<Complex> a = fold(coeffs, n);
  const std::vector<Complex> roots = root_table(n);
  std::vector<Complex> out(n, Complex{});
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k] == Complex{}) continue;
    std::size_t idx = 0;  // j * k mod n
    for (std::size_t j = 0; j < n; ++j) {
      out[j] += a[k] * roots[idx];
      idx += k;
      if (idx >= n) idx -= n;
    }
  }
  return out;
}

std::vector<Complex> interpolate_from_roots(std::span<const Complex> values) {
  const std::size_t n = values.size();
  std::vector<Complex> conj_values(n);
  for (std::size_t j = 0; j < n; ++j) conj_values[j] = std::conj(values[j]);
  std::vector<Complex> out = evaluate_at_roots(conj_values, n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (auto& c : out) c = std::conj(c) * inv_n;
  return out;
}

}  // namespace flatpoly::fft

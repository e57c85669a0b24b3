#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace flatpoly::fft {

using Complex = std::complex<double>;

// Transforms below this length use direct summation.
inline constexpr std::size_t direct_cutoff = 64;

/// values[j] = sum_k coeffs[k] * exp(2 pi i j k / n), j in [0, n).
/// Power-of-two n uses a radix-2 transform, other n a Bluestein chirp
/// transform built on power-of-two convolutions. Coefficients beyond n are
/// folded modulo n.
std::vector<Complex> evaluate_at_roots(std::span<const Complex> coeffs, std::size_t n);

// Same contract, O(n * nnz) direct summation with exact index reduction.
std::vector<Complex> evaluate_at_roots_direct(std::span<const Complex> coeffs, std::size_t n);

/// coeffs[k] = (1/n) sum_j values[j] * exp(-2 pi i j k / n).
std::vector<Complex> interpolate_from_roots(std::span<const Complex> values);

// exp(2 pi i r / n) with r reduced exactly before the trigonometric call.
Complex unit_root(std::size_t r, std::size_t n);

bool is_power_of_two(std::size_t n) noexcept;
std::size_t next_power_of_two(std::size_t n) noexcept;

}  // namespace flatpoly::fft

#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace flatpoly {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

inline std::string numerator_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str();
}

inline std::string denominator_string(const Rational& r) {
  return boost::multiprecision::denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Accepts "a", "-a", "a/b" and finite decimals such as "0.125".
Rational parse_rational(const std::string& text);

}  // namespace flatpoly

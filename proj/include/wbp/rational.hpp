#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace wbp {

// Exact arithmetic for oracle runs and the exact solve mode. Every finite
// double is a dyadic rational, so conversion from double is lossless.
using Rational = boost::multiprecision::cpp_rational;

inline Rational to_rational(double value) { return Rational(value); }

inline double to_double(const Rational& value) {
  return value.convert_to<double>();
}

inline Rational pow_exact(const Rational& base, int exponent) {
  Rational result = 1;
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

}  // namespace wbp

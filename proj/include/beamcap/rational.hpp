#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace beamcap {

// Exact arithmetic for the probe-size recursion and the enumeration oracles.
// The recursion alternates halving and min, so denominators grow as powers of
// two; arbitrary precision keeps every derived quantity drift-free.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline bool is_integral(const Rational& r) { return denominator(r) == 1; }

inline BigInt rat_floor(const Rational& r) {
  BigInt q = numerator(r) / denominator(r);
  if (r < 0 && q * denominator(r) != numerator(r)) --q;
  return q;
}

inline BigInt rat_ceil(const Rational& r) {
  BigInt f = rat_floor(r);
  return f == r ? f : f + 1;
}

inline const Rational& rat_min(const Rational& a, const Rational& b) {
  return b < a ? b : a;
}

}  // namespace beamcap

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace stein {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational& q);

// Natural log of a positive rational, accurate to ~1e-15 absolute even
// when the value itself under/overflows double.
double log_rational(const Rational& q);

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

}  // namespace stein

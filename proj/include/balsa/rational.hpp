#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace balsa {

// Exact rational arithmetic for bound certification. Certified comparisons
// (deviations, feasible constants, charges) stay rational end to end; the
// only floating point in the project is in log2-style reporting checks.
// Arbitrary precision matters here: the feasible-constant recurrence
// accumulates products of distinct odd factors in the denominator, which
// overflows 64-bit (and eventually 128-bit) integers for large k.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

double rat_to_double(const Rat& r);

// "p/q", or just "p" when the denominator is 1.
std::string rat_string(const Rat& r);

// Decimal rendering: exact when the reduced denominator is of the form
// 2^a * 5^b, otherwise rounded half-up to `digits` fractional digits.
std::string rat_decimal(const Rat& r, int digits = 9);

}  // namespace balsa

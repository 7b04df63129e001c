#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace bellctx {

// Exact arithmetic backing for probability tables and the feasibility LP.
// Doubles convert losslessly (every finite double is a dyadic rational).
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Whether a table's numbers are exact rationals or floating-point readings.
// Exact tables get exact checks; approximate ones get tolerance checks.
enum class Backing { Exact, Approx };

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Parses "p/q" or a plain integer string. Throws input_error on anything else
// (including q <= 0).
Rational parse_rational(const std::string& text);

// Canonical "p/q" form ("p" when q == 1).
std::string rational_to_string(const Rational& r);

}  // namespace bellctx

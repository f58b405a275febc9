#pragma once

#include <boost/rational.hpp>
#include <string>
#include <string_view>

namespace efp {

// Exact money amounts. Prices and valuations are never floats anywhere in the
// toolkit: verification compares sums for equality and strict inequality.
using Rat = boost::rational<long long>;

inline bool is_integer(const Rat& x) { return x.denominator() == 1; }

// Largest integer <= x, as a plain integer. Callers guarantee x >= 0.
inline long long floor_to_int(const Rat& x) {
  long long q = x.numerator() / x.denominator();
  if (x.numerator() < 0 && q * x.denominator() != x.numerator()) --q;
  return q;
}

// Canonical "num/den" form, always with the denominator ("11/1").
std::string rat_to_string(const Rat& x);

// Accepts "num/den" or a bare integer "num". Throws ParseError.
Rat rat_from_string(std::string_view text);

}  // namespace efp

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace qr {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(const BigInt& num, const BigInt& den) { return Rational(num, den); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const BigInt& v) { return v.str(); }

/// x^{1/4} for x ≥ 0, correctly rounded up to a few ulps.
double fourth_root(const Rational& x);

/// Exact test of a ≤ b^{1/4}, i.e. a ≥ 0 ∧ a^4 ≤ b (or a < 0).
bool le_fourth_root(const Rational& a, const Rational& b);

}  // namespace qr

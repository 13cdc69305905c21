#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace gcdlab {

using ExactInt = mpz_class;
using Rational = mpq_class;

inline ExactInt to_exact(std::int64_t v) { return ExactInt(static_cast<long>(v)); }

ExactInt to_exact(__int128 v);

std::optional<std::int64_t> to_int64(const ExactInt& v);

std::string to_string(const ExactInt& v);
std::string to_string(const Rational& v);

// Accepts "3", "-7/12", "0.01", "1e-2", "2.5E+3". The result is exact:
// decimal input is read as a terminating decimal, never via binary floating point.
Rational parse_rational(std::string_view text);

double to_double(const Rational& v);

// num/den in canonical form; GMP arithmetic assumes canonical operands.
Rational ratio(const ExactInt& num, const ExactInt& den);

// Natural logarithm of a positive exact integer, valid far beyond double range.
double log_of(const ExactInt& v);
double log_of(const Rational& v);

// floor(v^(1/r)) for v >= 0, r >= 1.
ExactInt floor_root(const ExactInt& v, unsigned r);

}  // namespace gcdlab

#include "gcdlab/exact.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "gcdlab/errors.hpp"

namespace gcdlab {

ExactInt to_exact(__int128 v) {
  const bool negative = v < 0;
  unsigned __int128 mag = negative ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  ExactInt hi(static_cast<unsigned long>(static_cast<std::uint64_t>(mag >> 64)));
  ExactInt lo(static_cast<unsigned long>(static_cast<std::uint64_t>(mag)));
  ExactInt out = (hi << 64) + lo;
  return negative ? ExactInt(-out) : out;
}

std::optional<std::int64_t> to_int64(const ExactInt& v) {
  if (!v.fits_slong_p()) return std::nullopt;
  return static_cast<std::int64_t>(v.get_si());
}

std::string to_string(const ExactInt& v) { return v.get_str(); }

std::string to_string(const Rational& v) { return v.get_str(); }

namespace {

ExactInt parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) throw parse_error("empty number in '" + std::string(whole) + "'");
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) throw parse_error("malformed number '" + std::string(whole) + "'");
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j])))
      throw parse_error("malformed number '" + std::string(whole) + "'");
  std::string buf(s[0] == '+' ? s.substr(1) : s);
  return ExactInt(buf, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw parse_error("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    ExactInt num = parse_integer(text.substr(0, slash), text);
    ExactInt den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw parse_error("zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  std::string_view mant = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mant = text.substr(0, e);
    ExactInt ev = parse_integer(text.substr(e + 1), text);
    if (!ev.fits_slong_p() || std::abs(ev.get_si()) > 10000)
      throw parse_error("exponent out of range in '" + std::string(text) + "'");
    exponent = ev.get_si();
  }
  std::string digits;
  bool negative = false;
  std::size_t i = 0;
  if (!mant.empty() && (mant[0] == '+' || mant[0] == '-')) {
    negative = mant[0] == '-';
    i = 1;
  }
  bool seen_point = false;
  bool seen_digit = false;
  for (; i < mant.size(); ++i) {
    char c = mant[i];
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --exponent;
    } else {
      throw parse_error("malformed number '" + std::string(text) + "'");
    }
  }
  if (!seen_digit) throw parse_error("malformed number '" + std::string(text) + "'");

  ExactInt num(digits, 10);
  if (negative) num = -num;
  ExactInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::abs(exponent)));
  Rational r = exponent >= 0 ? Rational(num * scale) : Rational(num, scale);
  r.canonicalize();
  return r;
}

double to_double(const Rational& v) { return v.get_d(); }

Rational ratio(const ExactInt& num, const ExactInt& den) {
  if (den == 0) throw usage_error("ratio: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

double log_of(const ExactInt& v) {
  if (v <= 0) throw usage_error("log_of: argument must be positive");
  long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

double log_of(const Rational& v) {
  if (v <= 0) throw usage_error("log_of: argument must be positive");
  return log_of(ExactInt(v.get_num())) - log_of(ExactInt(v.get_den()));
}

ExactInt floor_root(const ExactInt& v, unsigned r) {
  if (v < 0) throw usage_error("floor_root: negative argument");
  if (r == 0) throw usage_error("floor_root: zero index");
  ExactInt out;
  mpz_root(out.get_mpz_t(), v.get_mpz_t(), r);
  return out;
}

}  // namespace gcdlab

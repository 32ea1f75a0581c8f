#pragma once

// Exact rational scalars and the small helpers shared across the library.

#include <gmpxx.h>

#include <cstdint>
#include <regex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cdbt {

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses the `p/q` (or plain integer `p`) literal syntax. Decimal or exponent
/// notation is rejected so that exact parameters never pass through a float.
inline Rational parse_rational(std::string_view text) {
  static const std::regex pattern(R"(^\s*([+-]?[0-9]+)(?:\s*/\s*([0-9]+))?\s*$)");
  std::string s(text);
  std::smatch m;
  if (!std::regex_match(s, m, pattern))
    throw std::invalid_argument("not an exact rational literal (expected p/q): '" + s + "'");
  BigInt num(m[1].str().front() == '+' ? m[1].str().substr(1) : m[1].str(), 10);
  BigInt den(1);
  if (m[2].matched) den = BigInt(m[2].str(), 10);
  if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  return make_rational(num, den);
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline int sign(const Rational& r) { return sgn(r); }

inline double to_double(const Rational& r) { return r.get_d(); }

/// Closer-than-double conversion for the numeric kernels that work in
/// extended precision.
inline long double to_long_double(const Rational& r) {
  // mpq_get_d truncates; split into integer and fractional parts to keep the
  // extra bits of the 80-bit format where the value allows it.
  BigInt q = r.get_num() / r.get_den();
  Rational frac = r - Rational(q);
  long double hi = static_cast<long double>(q.get_d());
  BigInt q_rest = q - BigInt(q.get_d());
  return hi + static_cast<long double>(q_rest.get_d()) + static_cast<long double>(frac.get_d());
}

inline BigInt factorial(long n) {
  if (n < 0) throw std::domain_error("factorial of a negative integer");
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

inline BigInt binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

/// Rational value of a double, exactly.
inline Rational from_double(double x) {
  Rational r(x);
  r.canonicalize();
  return r;
}

}  // namespace cdbt

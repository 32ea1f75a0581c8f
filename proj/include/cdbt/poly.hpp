#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cdbt/rational.hpp"

namespace cdbt {

/// Univariate polynomial with exact rational coefficients, ascending degree.
/// Trailing zeros are always stripped, so the zero polynomial has no
/// coefficients and degree -1.
class Poly {
 public:
  Poly() = default;

  explicit Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  Poly(std::initializer_list<Rational> coeffs) : c_(coeffs) { trim(); }

  static Poly constant(const Rational& c) { return Poly(std::vector<Rational>{c}); }

  static Poly monomial(const Rational& c, int k) {
    if (k < 0) throw std::invalid_argument("negative monomial degree");
    std::vector<Rational> v(static_cast<std::size_t>(k) + 1, Rational(0));
    v.back() = c;
    return Poly(std::move(v));
  }

  static Poly x() { return monomial(Rational(1), 1); }

  /// a + b z
  static Poly linear(const Rational& a, const Rational& b) { return Poly({a, b}); }

  static Poly from_ints(std::initializer_list<long> ints) {
    std::vector<Rational> v;
    v.reserve(ints.size());
    for (long i : ints) v.emplace_back(i);
    return Poly(std::move(v));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }

  std::span<const Rational> coeffs() const { return c_; }

  Rational coeff(int k) const {
    if (k < 0 || k > degree()) return Rational(0);
    return c_[static_cast<std::size_t>(k)];
  }

  const Rational& lead() const {
    if (c_.empty()) throw std::domain_error("leading coefficient of the zero polynomial");
    return c_.back();
  }

  Rational operator()(const Rational& z) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  /// Horner in extended precision; coefficients are rounded once.
  long double eval(long double z) const {
    long double acc = 0.0L;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + to_long_double(*it);
    return acc;
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
  }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }

  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }

  Poly& operator*=(const Rational& s) {
    if (s == 0) {
      c_.clear();
      return *this;
    }
    for (auto& c : c_) c *= s;
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
  friend Poly operator/(Poly a, const Rational& s) {
    if (s == 0) throw std::domain_error("polynomial divided by zero scalar");
    return a *= Rational(1) / s;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(r));
  }

  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<Rational> c_;
};

inline Poly pow(const Poly& p, int k) {
  if (k < 0) throw std::invalid_argument("negative polynomial power");
  Poly result = Poly::constant(1);
  Poly base = p;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

inline Poly derivative(const Poly& p) {
  if (p.degree() < 1) return Poly();
  std::vector<Rational> r(static_cast<std::size_t>(p.degree()));
  for (int k = 1; k <= p.degree(); ++k) r[static_cast<std::size_t>(k - 1)] = p.coeff(k) * k;
  return Poly(std::move(r));
}

inline Poly derivative(const Poly& p, int order) {
  Poly r = p;
  for (int i = 0; i < order; ++i) r = derivative(r);
  return r;
}

/// Antiderivative F with F' = p and F(lower) = 0.
inline Poly antiderivative(const Poly& p, const Rational& lower) {
  if (p.is_zero()) return Poly();
  std::vector<Rational> r(static_cast<std::size_t>(p.degree()) + 2, Rational(0));
  for (int k = 0; k <= p.degree(); ++k) r[static_cast<std::size_t>(k + 1)] = p.coeff(k) / (k + 1);
  Poly f(std::move(r));
  return f - Poly::constant(f(lower));
}

/// p(a + b z)
inline Poly compose_linear(const Poly& p, const Rational& a, const Rational& b) {
  Poly lin = Poly::linear(a, b);
  Poly acc;
  for (int k = p.degree(); k >= 0; --k) acc = acc * lin + Poly::constant(p.coeff(k));
  return acc;
}

struct PolyDivision {
  Poly quotient;
  Poly remainder;
};

inline PolyDivision divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly(), a};
  std::vector<Rational> rem(a.coeffs().begin(), a.coeffs().end());
  std::vector<Rational> quo(static_cast<std::size_t>(a.degree() - b.degree()) + 1, Rational(0));
  const Rational inv_lead = Rational(1) / b.lead();
  const int db = b.degree();
  for (int k = a.degree(); k >= db; --k) {
    const Rational& top = rem[static_cast<std::size_t>(k)];
    if (top == 0) continue;
    Rational q = top * inv_lead;
    quo[static_cast<std::size_t>(k - db)] = q;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k - db + j)] -= q * b.coeff(j);
  }
  rem.resize(static_cast<std::size_t>(db));
  return {Poly(std::move(quo)), Poly(std::move(rem))};
}

inline Poly monic(const Poly& p) {
  if (p.is_zero()) return p;
  return p / p.lead();
}

/// Monic gcd; gcd(0, 0) = 0.
inline Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = divmod(a, b).remainder;
    a = std::move(b);
    b = monic(r);
  }
  return monic(a);
}

/// Exact quotient; throws if b does not divide a.
inline Poly exact_div(const Poly& a, const Poly& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw std::domain_error("polynomial division is not exact");
  return q;
}

inline Poly square_free_part(const Poly& p) {
  if (p.degree() < 1) return p;
  Poly g = gcd(p, derivative(p));
  return exact_div(p, g);
}

inline std::string to_string(const Poly& p, char var = 'z') {
  if (p.is_zero()) return "0";
  std::string out;
  for (int k = p.degree(); k >= 0; --k) {
    const Rational c = p.coeff(k);
    if (c == 0) continue;
    Rational mag = abs(c);
    if (!out.empty()) out += c < 0 ? " - " : " + ";
    else if (c < 0) out += "-";
    const bool unit = mag == 1 && k > 0;
    if (!unit) out += mag.get_str();
    if (k > 0) {
      if (!unit) out += "*";
      out += var;
      if (k > 1) out += "^" + std::to_string(k);
    }
  }
  return out;
}

}  // namespace cdbt

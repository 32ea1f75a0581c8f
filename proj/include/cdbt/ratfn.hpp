#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "cdbt/poly.hpp"

namespace cdbt {

/// Ratio of two polynomials in canonical form: coprime, monic denominator.
/// Every constructor and arithmetic result is re-canonicalized.
class RationalFn {
 public:
  RationalFn() : num_(), den_(Poly::constant(1)) {}

  RationalFn(Poly num) : num_(std::move(num)), den_(Poly::constant(1)) {}  // NOLINT: implicit lift

  RationalFn(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { canonicalize(); }

  static RationalFn constant(const Rational& c) { return RationalFn(Poly::constant(c)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  Rational operator()(const Rational& z) const {
    Rational d = den_(z);
    if (d == 0) throw std::domain_error("rational function evaluated at a pole");
    return num_(z) / d;
  }

  long double eval(long double z) const { return num_.eval(z) / den_.eval(z); }

  RationalFn operator-() const { return RationalFn(-num_, den_, Canonical{}); }

  friend RationalFn operator+(const RationalFn& a, const RationalFn& b) {
    if (a.den_ == b.den_) return RationalFn(a.num_ + b.num_, a.den_);
    return RationalFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFn operator-(const RationalFn& a, const RationalFn& b) { return a + (-b); }

  friend RationalFn operator*(const RationalFn& a, const RationalFn& b) {
    // Cross-cancel first to keep degrees low.
    Poly g1 = gcd(a.num_, b.den_);
    Poly g2 = gcd(b.num_, a.den_);
    Poly n1 = g1.degree() > 0 ? exact_div(a.num_, g1) : a.num_;
    Poly d2 = g1.degree() > 0 ? exact_div(b.den_, g1) : b.den_;
    Poly n2 = g2.degree() > 0 ? exact_div(b.num_, g2) : b.num_;
    Poly d1 = g2.degree() > 0 ? exact_div(a.den_, g2) : a.den_;
    return RationalFn(n1 * n2, d1 * d2);
  }

  friend RationalFn operator/(const RationalFn& a, const RationalFn& b) {
    if (b.is_zero()) throw std::domain_error("rational function divided by zero");
    return a * RationalFn(b.den_, b.num_);
  }

  friend RationalFn operator*(const RationalFn& a, const Rational& s) {
    return RationalFn(a.num_ * s, a.den_, Canonical{});
  }
  friend RationalFn operator*(const Rational& s, const RationalFn& a) { return a * s; }

  friend bool operator==(const RationalFn& a, const RationalFn& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  struct Canonical {};
  RationalFn(Poly num, Poly den, Canonical) : num_(std::move(num)), den_(std::move(den)) {
    if (num_.is_zero()) den_ = Poly::constant(1);
  }

  void canonicalize() {
    if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = Poly::constant(1);
      return;
    }
    Poly g = gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = exact_div(num_, g);
      den_ = exact_div(den_, g);
    }
    Rational lead = den_.lead();
    if (lead != 1) {
      num_ = num_ / lead;
      den_ = den_ / lead;
    }
  }

  Poly num_;
  Poly den_;
};

inline RationalFn derivative(const RationalFn& f) {
  if (f.is_polynomial()) return RationalFn(derivative(f.num()) / f.den().lead());
  return RationalFn(derivative(f.num()) * f.den() - f.num() * derivative(f.den()), f.den() * f.den());
}

inline std::string to_string(const RationalFn& f) {
  if (f.is_polynomial()) return to_string(f.num());
  return "(" + to_string(f.num()) + ")/(" + to_string(f.den()) + ")";
}

}  // namespace cdbt

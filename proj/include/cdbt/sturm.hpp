#pragma once

// Sturm-sequence real-root counting and isolation over exact rationals.

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cdbt/poly.hpp"

namespace cdbt {

/// An interval of the real line with independently open or closed ends.
/// A missing bound stands for -inf / +inf (always open).
struct RealInterval {
  std::optional<Rational> lo;
  std::optional<Rational> hi;
  bool lo_open = true;
  bool hi_open = true;

  static RealInterval open(Rational a, Rational b) { return {std::move(a), std::move(b), true, true}; }
  static RealInterval closed(Rational a, Rational b) { return {std::move(a), std::move(b), false, false}; }
  static RealInterval whole_line() { return {}; }
  static RealInterval positive_half_line() { return {Rational(0), std::nullopt, true, true}; }
};

struct IsolatingInterval {
  Rational lo;
  Rational hi;
  /// The single root lies in (lo, hi]; when lo == hi the root is exactly lo.
  bool contains(const Rational& x) const { return lo == hi ? x == lo : (lo < x && x <= hi); }
};

struct RootIsolation {
  std::vector<IsolatingInterval> intervals;
  bool multiplicity_free = true;
  std::size_t count() const { return intervals.size(); }
};

class SturmSequence {
 public:
  explicit SturmSequence(const Poly& p) {
    if (p.is_zero()) throw std::invalid_argument("Sturm sequence of the zero polynomial");
    square_free_ = square_free_part(p);
    multiplicity_free_ = square_free_.degree() == p.degree();
    seq_.push_back(square_free_);
    if (square_free_.degree() >= 1) {
      seq_.push_back(derivative(square_free_));
      while (seq_.back().degree() > 0) {
        Poly r = divmod(seq_[seq_.size() - 2], seq_.back()).remainder;
        if (r.is_zero()) break;
        seq_.push_back(-r);
      }
    }
  }

  const Poly& square_free() const { return square_free_; }
  bool multiplicity_free() const { return multiplicity_free_; }

  int sign_changes_at(const Rational& x) const {
    int changes = 0, last = 0;
    for (const auto& s : seq_) {
      int v = sgn(s(x));
      if (v == 0) continue;
      if (last != 0 && v != last) ++changes;
      last = v;
    }
    return changes;
  }

  /// direction = +1 for +inf, -1 for -inf.
  int sign_changes_at_infinity(int direction) const {
    int changes = 0, last = 0;
    for (const auto& s : seq_) {
      int v = sgn(s.lead());
      if (direction < 0 && (s.degree() % 2) == 1) v = -v;
      if (last != 0 && v != last) ++changes;
      last = v;
    }
    return changes;
  }

  /// Number of distinct real roots in the half-open interval (a, b].
  int count_half_open(const Rational& a, const Rational& b) const {
    return sign_changes_at(a) - sign_changes_at(b);
  }

  /// Strict upper bound on the modulus of every root (Cauchy).
  Rational root_bound() const {
    const Poly& p = square_free_;
    Rational m(0);
    for (int k = 0; k < p.degree(); ++k) {
      Rational r = abs(p.coeff(k) / p.lead());
      if (r > m) m = r;
    }
    return m + 1;
  }

 private:
  Poly square_free_;
  bool multiplicity_free_ = true;
  std::vector<Poly> seq_;
};

namespace detail {

inline void isolate(const SturmSequence& s, const Rational& a, const Rational& b, int count,
                    std::vector<IsolatingInterval>& out) {
  if (count <= 0) return;
  if (count == 1) {
    out.push_back({a, b});
    return;
  }
  Rational m = (a + b) / 2;
  int left = s.count_half_open(a, m);
  isolate(s, a, m, left, out);
  isolate(s, m, b, count - left, out);
}

}  // namespace detail

/// Counts and isolates the distinct real roots of p inside the interval.
inline RootIsolation sturm_roots(const Poly& p, const RealInterval& where) {
  SturmSequence s(p);
  RootIsolation result;
  result.multiplicity_free = s.multiplicity_free();
  if (s.square_free().degree() < 1) return result;

  const Rational bound = s.root_bound();
  Rational a = where.lo ? *where.lo : -bound;
  Rational b = where.hi ? *where.hi : bound;
  if (where.lo && where.hi && *where.lo > *where.hi)
    throw std::invalid_argument("empty interval in sturm_roots");

  const Poly& sq = s.square_free();
  if (where.lo && !where.lo_open && sq(a) == 0) result.intervals.push_back({a, a});
  if (a < b) {
    int n = s.count_half_open(a, b);
    std::vector<IsolatingInterval> found;
    detail::isolate(s, a, b, n, found);
    const bool drop_hi = where.hi && where.hi_open && sq(b) == 0;
    for (auto& iv : found) {
      if (drop_hi && iv.hi == b) continue;
      result.intervals.push_back(iv);
    }
  }
  return result;
}

inline int count_real_roots(const Poly& p, const RealInterval& where) {
  return static_cast<int>(sturm_roots(p, where).count());
}

/// Bisects every isolating interval until its width is at most `width`.
inline RootIsolation refine(const Poly& p, RootIsolation iso, const Rational& width) {
  SturmSequence s(p);
  for (auto& iv : iso.intervals) {
    while (iv.hi - iv.lo > width) {
      Rational m = (iv.lo + iv.hi) / 2;
      if (s.count_half_open(iv.lo, m) == 1) iv.hi = m;
      else iv.lo = m;
    }
  }
  return iso;
}

}  // namespace cdbt

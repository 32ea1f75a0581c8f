#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature on finite and
// semi-infinite intervals.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdbt {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-13;
  int max_subdivisions = 4000;
};

struct QuadratureError : std::runtime_error {
  QuadratureResult partial;
  QuadratureError(const std::string& what, QuadratureResult r) : std::runtime_error(what), partial(r) {}
};

namespace detail {

// Abscissae and weights of the 15-point Kronrod rule with its embedded
// 7-point Gauss rule (odd Kronrod nodes 1,3,5,... are the Gauss nodes).
inline constexpr std::array<long double, 8> kXgk = {
    0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
    0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
    0.586087235467691130294144845693013L, 0.405845151377397166906606412076961L,
    0.207784955007898467600689403773245L, 0.000000000000000000000000000000000L};
inline constexpr std::array<long double, 8> kWgk = {
    0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
    0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
    0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
    0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
inline constexpr std::array<long double, 4> kWg = {
    0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
    0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};

struct Segment {
  double a, b;
  double value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
  const long double c = 0.5L * (static_cast<long double>(a) + b);
  const long double h = 0.5L * (static_cast<long double>(b) - a);
  const long double fc = f(static_cast<double>(c));
  long double kron = fc * kWgk[7];
  long double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const long double dx = h * kXgk[j];
    const long double f1 = f(static_cast<double>(c - dx));
    const long double f2 = f(static_cast<double>(c + dx));
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kron *= h;
  gauss *= h;
  double err = static_cast<double>(std::fabs(kron - gauss));
  return {a, b, static_cast<double>(kron), err};
}

}  // namespace detail

/// Integrates f over [a, b]. Throws QuadratureError when the tolerance is not
/// met within the subdivision budget or the integrand is not finite.
template <class F>
QuadratureResult integrate(F f, double a, double b, const QuadratureOptions& opt = {}) {
  if (a == b) return {0.0, 0.0, 0, true};
  if (!(std::isfinite(a) && std::isfinite(b))) throw std::invalid_argument("integrate: use integrate_to_infinity");
  std::priority_queue<detail::Segment> heap;
  heap.push(detail::gk15(f, a, b));
  long double total = heap.top().value;
  long double err = heap.top().error;
  int subdiv = 0;
  auto done = [&] {
    const double tol = std::max(opt.abs_tol, opt.rel_tol * std::fabs(static_cast<double>(total)));
    return static_cast<double>(err) <= tol;
  };
  while (!done()) {
    if (subdiv >= opt.max_subdivisions)
      throw QuadratureError("quadrature did not converge", {static_cast<double>(total), static_cast<double>(err), subdiv, false});
    detail::Segment s = heap.top();
    heap.pop();
    const double m = 0.5 * (s.a + s.b);
    if (!(m > s.a && m < s.b)) {
      // Interval exhausted at double resolution; accept what remains.
      heap.push(s);
      break;
    }
    detail::Segment l = detail::gk15(f, s.a, m);
    detail::Segment r = detail::gk15(f, m, s.b);
    if (!std::isfinite(l.value) || !std::isfinite(r.value))
      throw QuadratureError("non-finite integrand", {static_cast<double>(total), static_cast<double>(err), subdiv, false});
    heap.push(l);
    heap.push(r);
    ++subdiv;
    total += static_cast<long double>(l.value) + r.value - s.value;
    err += static_cast<long double>(l.error) + r.error - s.error;
  }
  total = 0;
  err = 0;
  for (; !heap.empty(); heap.pop()) {
    total += heap.top().value;
    err += heap.top().error;
  }
  return {static_cast<double>(total), static_cast<double>(err), subdiv, done()};
}

/// Integrates f over [a, inf) with x = a + t/(1-t).
template <class F>
QuadratureResult integrate_to_infinity(F f, double a, const QuadratureOptions& opt = {}) {
  auto g = [&](double t) {
    const double s = 1.0 - t;
    const double x = a + t / s;
    if (!std::isfinite(x)) return 0.0;
    const double v = f(x) / (s * s);
    return std::isfinite(v) ? v : 0.0;
  };
  return integrate(g, 0.0, 1.0, opt);
}

}  // namespace cdbt

#pragma once

// Numeric Darboux-Baecklund chains: one-step transformations, the confluent
// two-step extension for a free lambda1, the Matveev double-Wronskian form of
// the same construction, and the m-step hyperconfluent recurrence.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "cdbt/classical.hpp"
#include "cdbt/quadrature.hpp"
#include "cdbt/report.hpp"

namespace cdbt::chains {

using PotentialFn = std::function<double(double)>;

/// Value and first two x-derivatives at a point.
struct Jet {
  double v = 0;
  double d1 = 0;
  double d2 = 0;
};

inline Jet reciprocal(const Jet& f) {
  return {1.0 / f.v, -f.d1 / (f.v * f.v), -f.d2 / (f.v * f.v) + 2.0 * f.d1 * f.d1 / (f.v * f.v * f.v)};
}

/// (log f)''
inline double log_dd(const Jet& f) { return f.d2 / f.v - (f.d1 / f.v) * (f.d1 / f.v); }

struct SeedFunction {
  std::function<Jet(double)> jet;
  double energy = 0;
  double x_lo = 0;  ///< working domain; the isotonic cut-off sits where psi is negligible
  double x_hi = 0;

  double operator()(double x) const { return jet(x).v; }
};

struct ChainIrregular : std::domain_error {
  double where;
  ChainIrregular(const std::string& what, double x) : std::domain_error(what), where(x) {}
};

/// A seed from an exact gauged function; derivatives are taken exactly once.
template <class G>
SeedFunction seed_from_gauged(const GaugedFn<G>& f, double energy, const NumericContext& ctx, double lo, double hi) {
  const GaugedFn<G> f1 = f.d_dx(), f2 = f.d_dx(2);
  auto jet = [f, f1, f2, ctx](double x) {
    return Jet{static_cast<double>(f.eval_x(x, ctx)), static_cast<double>(f1.eval_x(x, ctx)),
               static_cast<double>(f2.eval_x(x, ctx))};
  };
  return {jet, energy, lo, hi};
}

inline SeedFunction tdpt_seed(const classical::TdptParams& p, int n) {
  return seed_from_gauged(classical::eigenstate(p, n), classical::energy(p, n).get_d(), {}, 0.0, std::numbers::pi / 2);
}

/// The cut-off z_max = 25 keeps psi^2 integrals resolved against rounding.
inline SeedFunction isotonic_seed(const classical::IsotonicParams& p, int n, const NumericContext& ctx,
                                  double z_max = 25.0) {
  return seed_from_gauged(classical::eigenstate(p, n), classical::energy(p, n).get_d() * ctx.omega, ctx, 0.0,
                          std::sqrt(2.0 * z_max / ctx.omega));
}

template <class G>
PotentialFn potential_fn(const Potential<G>& V, const NumericContext& ctx = {}) {
  return [V, ctx](double x) { return V(x, ctx); };
}

/// One Darboux step with seed psi: V + 2 w' with w = -psi'/psi, and the
/// transformed eigenfunctions by the operator and Wronskian forms.
struct DbtResult {
  PotentialFn potential;
  std::function<double(double)> eigenfunction;            ///< phi' + w phi
  std::function<double(double)> eigenfunction_wronskian;  ///< W(psi, phi) / psi
};

inline void require_nonvanishing(const std::function<double(double)>& f, double a, double b, const char* what,
                                 int points = 1000) {
  double prev_x = a, prev = f(a);
  for (int i = 1; i <= points; ++i) {
    const double x = a + (b - a) * i / points;
    const double v = f(x);
    if (v == 0 || (prev != 0 && std::signbit(v) != std::signbit(prev))) {
      double lo = prev_x, hi = x;
      for (int it = 0; it < 60; ++it) {
        const double m = 0.5 * (lo + hi);
        if (std::signbit(f(m)) == std::signbit(prev)) lo = m;
        else hi = m;
      }
      throw ChainIrregular(std::string(what) + " vanishes near x = " + std::to_string(0.5 * (lo + hi)), 0.5 * (lo + hi));
    }
    prev_x = x;
    prev = v;
  }
}

inline double interior_margin(const SeedFunction& s) { return 1e-6 * (s.x_hi - s.x_lo); }

inline DbtResult dbt_apply(const SeedFunction& seed, const PotentialFn& V, const SeedFunction& target) {
  if (seed.energy == target.energy) throw std::invalid_argument("dbt_apply: target energy equals the seed energy");
  const double m = interior_margin(seed);
  require_nonvanishing(seed, seed.x_lo + m, seed.x_hi - m, "DBT seed");
  DbtResult r;
  r.potential = [seed, V](double x) {
    const Jet p = seed.jet(x);
    return V(x) - 2.0 * log_dd(p);
  };
  r.eigenfunction = [seed, target](double x) {
    const Jet p = seed.jet(x), f = target.jet(x);
    return f.d1 - p.d1 / p.v * f.v;
  };
  r.eigenfunction_wronskian = [seed, target](double x) {
    const Jet p = seed.jet(x), f = target.jet(x);
    return (p.v * f.d1 - p.d1 * f.v) / p.v;
  };
  return r;
}

/// 1/psi solves the once-transformed equation at the seed energy; its step undoes the first.
inline SeedFunction reciprocal_seed(const SeedFunction& s) {
  auto j = s.jet;
  return {[j](double x) { return reciprocal(j(x)); }, s.energy, s.x_lo, s.x_hi};
}

/// lambda1 + int_{x0}^{x} psi^2 by adaptive quadrature.
inline double confluent_integral(const SeedFunction& seed, double lambda1, double x0, double x,
                                 const QuadratureOptions& opt = {}) {
  if (x == x0) return lambda1;
  auto sq = [&](double t) {
    const double v = seed(t);
    return v * v;
  };
  const QuadratureResult q = x > x0 ? integrate(sq, x0, x, opt) : integrate(sq, x, x0, opt);
  return lambda1 + (x > x0 ? q.value : -q.value);
}

/// Psi = (lambda1 + int_{x0}^x psi^2) / psi, a solution at E_nu of the once-transformed potential.
inline SeedFunction confluent_seed(const SeedFunction& seed, double lambda1, double x0) {
  auto jet = [seed, lambda1, x0](double x) {
    const double I = confluent_integral(seed, lambda1, x0, x);
    const Jet p = seed.jet(x);
    // Psi' = psi - I psi'/psi^2,  Psi'' = I (2 psi'^2 - psi psi'') / psi^3
    return Jet{I / p.v, p.v - I * p.d1 / (p.v * p.v), I * (2 * p.d1 * p.d1 - p.v * p.d2) / (p.v * p.v * p.v)};
  };
  return {jet, seed.energy, seed.x_lo, seed.x_hi};
}

struct ConfluentExtension {
  PotentialFn potential;  ///< V - 2 (psi^2 / I)'
  std::function<double(const SeedFunction&, double)> eigenfunction;
  std::function<double(double)> denominator;  ///< I = lambda1 + int psi^2
};

/// Scans I on a 10^3-point grid with cumulative quadrature and bisects any sign change.
inline void require_regular_denominator(const SeedFunction& seed, double lambda1, double x0, double a, double b,
                                        int points = 1000) {
  auto sq = [&](double t) {
    const double v = seed(t);
    return v * v;
  };
  std::vector<double> xs(static_cast<std::size_t>(points) + 1);
  for (int i = 0; i <= points; ++i) xs[static_cast<std::size_t>(i)] = a + (b - a) * i / points;
  double I_a = confluent_integral(seed, lambda1, x0, a);
  double prev = I_a;
  for (int i = 1; i <= points; ++i) {
    const double lo = xs[static_cast<std::size_t>(i - 1)], hi = xs[static_cast<std::size_t>(i)];
    const double I = prev + integrate(sq, lo, hi).value;
    if (I == 0 || std::signbit(I) != std::signbit(prev)) {
      double l = lo, h = hi;
      for (int it = 0; it < 60; ++it) {
        const double m = 0.5 * (l + h);
        const double Im = prev + integrate(sq, lo, m).value;
        if (std::signbit(Im) == std::signbit(prev)) l = m;
        else h = m;
      }
      throw ChainIrregular("lambda1 + int psi^2 vanishes near x = " + std::to_string(0.5 * (l + h)), 0.5 * (l + h));
    }
    prev = I;
  }
}

inline ConfluentExtension confluent_two_step(const PotentialFn& V, const SeedFunction& seed, double lambda1, double x0,
                                             bool check_regular = true) {
  if (check_regular) {
    const double m = interior_margin(seed);
    require_regular_denominator(seed, lambda1, x0, seed.x_lo + m, seed.x_hi - m);
  }
  ConfluentExtension c;
  c.denominator = [seed, lambda1, x0](double x) { return confluent_integral(seed, lambda1, x0, x); };
  c.potential = [seed, V, lambda1, x0](double x) {
    const double I = confluent_integral(seed, lambda1, x0, x);
    const Jet p = seed.jet(x);
    const double p2 = p.v * p.v;
    return V(x) - 2.0 * (2.0 * p.v * p.d1 * I - p2 * p2) / (I * I);
  };
  c.eigenfunction = [seed, lambda1, x0](const SeedFunction& target, double x) {
    const double I = confluent_integral(seed, lambda1, x0, x);
    const Jet p = seed.jet(x), f = target.jet(x);
    return (seed.energy - target.energy) * f.v - (p.v * f.d1 - p.d1 * f.v) * p.v / I;
  };
  return c;
}

namespace detail {

namespace odeint = boost::numeric::odeint;

/// Solutions at E - h, E, E + h sharing initial data (psi, psi') at x0,
/// integrated as one system so that step control is shared.
struct EnergyFamily {
  PotentialFn V;
  std::array<double, 3> E;
  std::array<double, 6> y0;
  double x0;
  double tol = 1e-13;

  std::array<double, 6> at(double x) const {
    using State = std::array<double, 6>;
    State y = y0;
    if (x == x0) return y;
    auto rhs = [this](const State& s, State& d, double t) {
      const double v = V(t);
      for (int i = 0; i < 3; ++i) {
        d[2 * i] = s[2 * i + 1];
        d[2 * i + 1] = (v - E[static_cast<std::size_t>(i)]) * s[2 * i];
      }
    };
    const double dx = (x > x0 ? 1.0 : -1.0) * 1e-3;
    odeint::integrate_adaptive(odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(tol, tol), rhs, y, x0, x, dx);
    return y;
  }
};

}  // namespace detail

/// V - 2 (log W(psi, d psi/dE))'' from the energy family, with the E-derivative
/// as a central difference of step 1e-5 (1 + |E|).
struct MatveevPotential {
  detail::EnergyFamily family;
  double h;

  struct Parts {
    double W, dW, ddW, potential, dw_dE;
  };

  Parts at(double x) const {
    const auto y = family.at(x);
    const double v = family.V(x);
    const double step = 1e-5 * (1 + std::fabs(x));
    const double dv = (family.V(x + step) - family.V(x - step)) / (2 * step);
    double psi[3], d1[3], d2[3], d3[3];
    for (int i = 0; i < 3; ++i) {
      const double e = family.E[static_cast<std::size_t>(i)];
      psi[i] = y[static_cast<std::size_t>(2 * i)];
      d1[i] = y[static_cast<std::size_t>(2 * i + 1)];
      d2[i] = (v - e) * psi[i];
      d3[i] = dv * psi[i] + (v - e) * d1[i];
    }
    auto dE = [this](const double* a) { return (a[2] - a[0]) / (2 * h); };
    const double f0 = dE(psi), f1 = dE(d1), f2 = dE(d2), f3 = dE(d3);
    Parts p{};
    p.W = psi[1] * f1 - d1[1] * f0;
    p.dW = psi[1] * f2 - d2[1] * f0;
    p.ddW = d1[1] * f2 + psi[1] * f3 - d3[1] * f0 - d2[1] * f1;
    p.potential = v - 2.0 * (p.ddW / p.W - (p.dW / p.W) * (p.dW / p.W));
    p.dw_dE = -(psi[1] * f1 - d1[1] * f0) / (psi[1] * psi[1]);
    return p;
  }
};

inline MatveevPotential matveev_potential(const PotentialFn& V, const SeedFunction& seed, double x0) {
  const Jet j = seed.jet(x0);
  const double h = 1e-5 * (1 + std::fabs(seed.energy));
  return {{V, {seed.energy - h, seed.energy, seed.energy + h}, {j.v, j.d1, j.v, j.d1, j.v, j.d1}, x0}, h};
}

/// Matveev form against confluent_two_step at lambda1 = 0 (W0 = 0), plus
/// dw/dE = psi^{-2} int_{x0}^x psi^2.
inline VerifyReport matveev_cross_check(const PotentialFn& V, const SeedFunction& seed, double x0,
                                        const std::vector<double>& points, double tol = 1e-6) {
  json spec{{"x0", x0}, {"energy", seed.energy}, {"points", points}, {"tolerance", tol}};
  return timed_report("chains.matveev", spec, [&](VerifyReport& r) {
    const MatveevPotential mat = matveev_potential(V, seed, x0);
    const ConfluentExtension conf = confluent_two_step(V, seed, 0.0, x0, false);
    double worst_v = 0, worst_w = 0;
    json rows = json::array();
    for (double x : points) {
      if (x == x0) throw std::invalid_argument("comparison point coincides with x0, where W vanishes");
      const auto p = mat.at(x);
      const double vc = conf.potential(x);
      const double ev = std::fabs(p.potential - vc) / std::max(1.0, std::fabs(vc));
      const double psi = seed(x);
      const double dw_direct = confluent_integral(seed, 0.0, x0, x) / (psi * psi);
      const double ew = std::fabs(p.dw_dE - dw_direct) / std::max(1.0, std::fabs(dw_direct));
      worst_v = std::max(worst_v, ev);
      worst_w = std::max(worst_w, ew);
      rows.push_back(json{{"x", x}, {"matveev", p.potential}, {"confluent", vc}, {"rel_error", ev},
                          {"dw_dE", p.dw_dE}, {"dw_dE_quadrature", dw_direct}});
    }
    r.witness["rows"] = rows;
    r.witness["max_rel_error_potential"] = worst_v;
    r.witness["max_rel_error_dw_dE"] = worst_w;
    r.witness["energy_step"] = mat.h;
    r.status = status_of(worst_v < tol && worst_w < tol);
  });
}

/// m-step hyperconfluent chain. Psi^(0) = psi and
/// Psi^(k) = (lambda_k + int_{x0}^x (Psi^(k-1))^2) / Psi^(k-1); the integrals
/// I_k are carried as one ODE system I_k' = (Psi^(k-1))^2 started at x0.
struct ChainSample {
  double x = 0;
  double potential = 0;          ///< V - 2 sum_k (log Psi^(k))''
  double potential_grouped = 0;  ///< product regrouped into psi^{m mod 2} prod I_j
  std::vector<double> I;
  std::vector<double> Psi;
};

namespace detail {

inline std::vector<Jet> chain_jets(const Jet& psi, const std::vector<double>& I) {
  std::vector<Jet> P{psi};
  for (std::size_t k = 0; k < I.size(); ++k) {
    const Jet& p = P.back();
    const double Ik = I[k];
    P.push_back({Ik / p.v, p.v - Ik * p.d1 / (p.v * p.v), Ik * (2 * p.d1 * p.d1 - p.v * p.d2) / (p.v * p.v * p.v)});
  }
  return P;
}

}  // namespace detail

inline std::vector<ChainSample> hyperconfluent_chain(const PotentialFn& V, const SeedFunction& seed,
                                                     const std::vector<double>& lambdas, double x0,
                                                     const std::vector<double>& xs, int scan_points = 1000) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<double>;
  const std::size_t m1 = lambdas.size();  // m - 1
  const int m = static_cast<int>(m1) + 1;
  if (xs.empty()) return {};
  if (m1 == 0) {
    std::vector<ChainSample> out;
    for (double x : xs) {
      const Jet p = seed.jet(x);
      const double v = V(x) - 2.0 * log_dd(p);
      out.push_back({x, v, v, {}, {p.v}});
    }
    return out;
  }
  auto rhs = [&](const State& s, State& d, double t) {
    const auto P = detail::chain_jets(seed.jet(t), s);
    for (std::size_t k = 0; k < m1; ++k) d[k] = P[k].v * P[k].v;
  };
  auto sample = [&](double x, const State& I) {
    ChainSample c;
    c.x = x;
    c.I = I;
    const auto P = detail::chain_jets(seed.jet(x), I);
    double sum = 0;
    for (std::size_t k = 0; k < m1 + 1; ++k) {
      sum += log_dd(P[k]);
      c.Psi.push_back(P[k].v);
    }
    c.potential = V(x) - 2.0 * sum;
    // psi^{m mod 2} times I_j over j = m-1, m-3, ...
    double grouped = (m % 2 == 1) ? log_dd(P[0]) : 0.0;
    for (int j = m - 1; j >= 1; j -= 2) {
      const Jet& p = P[static_cast<std::size_t>(j - 1)];
      const Jet Ij{I[static_cast<std::size_t>(j - 1)], p.v * p.v, 2 * p.v * p.d1};
      grouped += log_dd(Ij);
    }
    c.potential_grouped = V(x) - 2.0 * grouped;
    return c;
  };

  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) order[i] = i;
  std::vector<ChainSample> out(xs.size());
  const double lo = std::min(x0, *std::min_element(xs.begin(), xs.end()));
  const double hi = std::max(x0, *std::max_element(xs.begin(), xs.end()));

  // March outward from x0 on each side, through a fine scan grid merged with the requested points.
  for (int dir : {+1, -1}) {
    const double end = dir > 0 ? hi : lo;
    if (end == x0) continue;
    std::vector<double> ts;
    for (int i = 0; i <= scan_points; ++i) ts.push_back(x0 + (end - x0) * i / scan_points);
    for (double x : xs)
      if ((x - x0) * dir > 0) ts.push_back(x);
    std::sort(ts.begin(), ts.end(), [dir](double a, double b) { return dir > 0 ? a < b : a > b; });
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    State I(lambdas.begin(), lambdas.end());
    double t = x0;
    std::vector<double> prev_sign;
    auto signs_at = [&](double x, const State& s) {
      const auto P = detail::chain_jets(seed.jet(x), s);
      std::vector<double> sg;
      for (std::size_t k = 0; k < m1; ++k) sg.push_back(s[k]);
      if (m >= 3)
        for (std::size_t k = 0; k + 1 < m1 + 1; ++k) sg.push_back(P[k].v);
      return sg;
    };
    prev_sign = signs_at(x0, I);
    for (double x : ts) {
      if (x != t) {
        const State before = I;
        const double t_before = t;
        odeint::integrate_adaptive(odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(1e-13, 1e-13), rhs, I,
                                   t, x, dir * 1e-3 * std::fabs(end - x0));
        t = x;
        const auto sg = signs_at(x, I);
        for (std::size_t k = 0; k < sg.size(); ++k)
          if (sg[k] == 0 || std::signbit(sg[k]) != std::signbit(prev_sign[k])) {
            double a = t_before, b = x;
            for (int it = 0; it < 50; ++it) {
              const double mid = 0.5 * (a + b);
              State Im = before;
              odeint::integrate_adaptive(odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(1e-13, 1e-13),
                                         rhs, Im, t_before, mid, dir * 1e-3 * std::fabs(end - x0));
              if (std::signbit(signs_at(mid, Im)[k]) == std::signbit(prev_sign[k])) a = mid;
              else b = mid;
            }
            const std::string what = k < m1 ? "I_" + std::to_string(k + 1) : "Psi^(" + std::to_string(k - m1) + ")";
            throw ChainIrregular(what + " vanishes near x = " + std::to_string(0.5 * (a + b)), 0.5 * (a + b));
          }
        prev_sign = sg;
      }
      for (std::size_t i = 0; i < xs.size(); ++i)
        if (xs[i] == x) out[i] = sample(x, I);
    }
  }
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] == x0) out[i] = sample(x0, State(lambdas.begin(), lambdas.end()));
  return out;
}

}  // namespace cdbt::chains

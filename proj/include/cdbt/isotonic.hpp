#pragma once

// Two-step confluent rational extensions of the isotonic oscillator with
// lambda1 = -||psi_n||^2. These are state-deleting: level n is removed.

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdbt/classical.hpp"
#include "cdbt/report.hpp"
#include "cdbt/sturm.hpp"
#include "cdbt/verify.hpp"

namespace cdbt::isotonic {

using classical::IsotonicParams;

struct ExtensionSpec {
  int n = 0;
  int N = 1;
  Rational omega = 1;  ///< only bound by numeric evaluation

  IsotonicParams params() const { return {N}; }

  void validate() const {
    if (n < 0) throw std::invalid_argument("isotonic seed level must be non-negative");
    params().validate();
    if (omega <= 0) throw std::invalid_argument("omega must be positive");
  }

  NumericContext context() const { return {omega.get_d()}; }

  /// lambda1 = -||psi_n||^2, stored as the coefficient of 1/sqrt(2 omega).
  Rational lambda1_coefficient() const { return -classical::isotonic_norm2(n, N); }

  json to_json() const { return json{{"n", n}, {"N", N}, {"omega", to_string(omega)}}; }
};

struct IsotonicQ {
  Poly poly;
  Rational value_at_0;
};

/// z^N (L_n^N)^2
inline Poly weighted_square(int n, int N) {
  const Poly L = classical::laguerre(n, N);
  return Poly::monomial(1, N) * L * L;
}

/// Q_n^N = -sum_j d^j/dz^j ( z^N (L_n^N)^2 )
inline Poly q_poly(int n, int N) {
  IsotonicParams{N}.validate();
  if (n < 0) throw std::invalid_argument("q_poly: n must be non-negative");
  Poly term = weighted_square(n, N);
  Poly sum;
  while (!term.is_zero()) {
    sum += term;
    term = derivative(term);
  }
  return -sum;
}

/// Independent route: solve Q' - Q = z^N L^2 from the top coefficient down.
inline Poly q_poly_backsubstitution(int n, int N) {
  IsotonicParams{N}.validate();
  const Poly f = weighted_square(n, N);
  const int d = f.degree();
  std::vector<Rational> q(static_cast<std::size_t>(d) + 1);
  Rational above = 0;
  for (int i = d; i >= 0; --i) {
    q[static_cast<std::size_t>(i)] = Rational(i + 1) * above - f.coeff(i);
    above = q[static_cast<std::size_t>(i)];
  }
  return Poly(std::move(q));
}

/// Q(0) = -(n+N)!/n!
inline Rational q_at_zero(int n, int N) { return -make_rational(factorial(n + N), factorial(n)); }

inline IsotonicQ q_isotonic(int n, int N) {
  Poly q = q_poly(n, N);
  Rational at0 = q(Rational(0));
  return {std::move(q), at0};
}

/// Both constructions agree and satisfy (e^{-z} Q)' = e^{-z} z^N L^2.
inline bool q_crosscheck(int n, int N) {
  const Poly a = q_poly(n, N);
  const Poly b = q_poly_backsubstitution(n, N);
  return a == b && derivative(a) - a == weighted_square(n, N);
}

inline RootIsolation q_roots(int n, int N) { return sturm_roots(q_poly(n, N), RealInterval::positive_half_line()); }

/// V^ / omega = V / omega - 4 z^N [ (N+1/2) R + z R' ],  R = L_n^2 / Q
inline RationalFn correction(const ExtensionSpec& s) {
  const Poly L = classical::laguerre(s.n, s.N);
  const RationalFn R(L * L, q_poly(s.n, s.N));
  const RationalFn zN(Poly::monomial(1, s.N));
  return zN * (R * (Rational(s.N) + make_rational(1, 2)) + RationalFn(Poly::x()) * derivative(R)) * Rational(-4);
}

inline Potential<IsotonicGauge> extended_potential(const ExtensionSpec& s) {
  s.validate();
  const Potential<IsotonicGauge> base = classical::base_potential(s.params());
  return base.with_z_form(base.z_form + correction(s), base.z_form);
}

/// Same potential as V + 2 omega - 2 (log Q)'', in units of omega.
inline RationalFn extended_potential_log_route(const ExtensionSpec& s) {
  s.validate();
  const GaugedFn<IsotonicGauge> q{IsotonicGauge::trivial(), RationalFn(q_poly(s.n, s.N))};
  return classical::base_potential(s.params()).z_form + RationalFn::constant(2) -
         in_energy_units(log_second_derivative(q)) * Rational(2);
}

/// L_{n,k}^N = L_{n-1}^{N+1} L_k^N - L_n^N L_{k-1}^{N+1}
inline Poly l_nk(int n, int k, int N) {
  using classical::laguerre;
  return laguerre(n - 1, N + 1) * laguerre(k, N) - laguerre(n, N) * laguerre(k - 1, N + 1);
}

struct DeletedLevel : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// L~_{k,N}^{(n^2)} = (n-k) L_k^N Q_n^N - z^{N+1} L_{n,k}^N L_n^N, k != n.
inline Poly exceptional_polynomial(const ExtensionSpec& s, int k) {
  s.validate();
  if (k < 0) throw std::invalid_argument("exceptional_polynomial: k must be non-negative");
  if (k == s.n)
    throw DeletedLevel("level k = n = " + std::to_string(k) + " is deleted by the extension (not normalizable)");
  using classical::laguerre;
  return laguerre(k, s.N) * q_poly(s.n, s.N) * Rational(s.n - k) -
         Poly::monomial(1, s.N + 1) * l_nk(s.n, k, s.N) * laguerre(s.n, s.N);
}

struct ExceptionalFamily {
  ExtensionSpec spec;
  std::map<int, Poly> polys;  ///< k != n
  RationalFn measure;         ///< z^N / Q^2, to be multiplied by e^{-z}
};

inline RationalFn measure(const ExtensionSpec& s) {
  const Poly q = q_poly(s.n, s.N);
  return RationalFn(Poly::monomial(1, s.N), q * q);
}

inline ExceptionalFamily exceptional_family(const ExtensionSpec& s, int kmax) {
  s.validate();
  if (kmax < 0) throw std::invalid_argument("exceptional_family: kmax must be non-negative");
  ExceptionalFamily fam{s, {}, measure(s)};
  for (int k = 0; k <= kmax; ++k)
    if (k != s.n) fam.polys.emplace(k, exceptional_polynomial(s, k));
  return fam;
}

/// psi~_k = 2 omega z^{(N+1/2)/2} e^{-z/2} L~_k / Q
inline GaugedFn<IsotonicGauge> eigenfunction(const ExtensionSpec& s, int k) {
  const Poly p = exceptional_polynomial(s, k);
  return {{Exponent::quarters(2 * s.N + 1), -1, 2}, RationalFn(p, q_poly(s.n, s.N))};
}

/// Psi = (2 omega)^{-1/2} z^{-(N+1/2)/2} e^{-z/2} Q / L_n
inline GaugedFn<IsotonicGauge> confluent_seed(const ExtensionSpec& s) {
  s.validate();
  return {{Exponent::quarters(-(2 * s.N + 1)), -1, -1},
          RationalFn(q_poly(s.n, s.N), classical::laguerre(s.n, s.N))};
}

/// 1/Psi: the formal solution at E_n, growing like e^{z/2}.
inline GaugedFn<IsotonicGauge> deleted_level_function(const ExtensionSpec& s) {
  return GaugedFn<IsotonicGauge>::scalar(1) / confluent_seed(s);
}

/// (E_n - E_k) psi_k - W(psi_n, psi_k) / Psi
inline GaugedFn<IsotonicGauge> eigenfunction_crum(const ExtensionSpec& s, int k) {
  if (k == s.n) throw DeletedLevel("level k = n is deleted by the extension");
  const IsotonicParams p = s.params();
  const auto psi_n = classical::eigenstate(p, s.n);
  const auto psi_k = classical::eigenstate(p, k);
  const Rational dE = classical::energy(p, s.n) - classical::energy(p, k);
  return GaugedFn<IsotonicGauge>::energy_unit() * psi_k * dE - wronskian({psi_n, psi_k}) / confluent_seed(s);
}

/// Position of level k in the deleted spectrum (its node count).
inline int level_index(int n, int k) { return k < n ? k : k - 1; }

/// e^{+z/2} growth of the deleted level against decay of the kept ones, and
/// node counts of L~_k on (0, inf).
inline VerifyReport deleted_level_witness(const ExtensionSpec& s, int kmax = -1) {
  if (kmax < 0) kmax = s.n + 2;
  json spec = s.to_json();
  spec["kmax"] = kmax;
  return timed_report("isotonic.deleted-level", spec, [&](VerifyReport& r) {
    const NumericContext ctx = s.context();
    constexpr long double z_near = 5, z_far = 50, growth = 1e6L;
    const auto del = deleted_level_function(s);
    const long double g = std::fabs(del.eval_z(z_far, ctx)) / std::fabs(del.eval_z(z_near, ctx));
    bool ok = g > growth;
    json kept = json::array();
    for (int k = 0; k <= kmax; ++k) {
      if (k == s.n) continue;
      const auto f = eigenfunction(s, k);
      const long double ratio = std::fabs(f.eval_z(z_far, ctx)) / std::fabs(f.eval_z(z_near, ctx));
      const int nodes = count_real_roots(exceptional_polynomial(s, k), RealInterval::positive_half_line());
      const bool good = ratio < 1 && nodes == level_index(s.n, k);
      ok = ok && good;
      kept.push_back(json{{"k", k}, {"far_over_near", static_cast<double>(ratio)}, {"nodes", nodes},
                          {"expected_nodes", level_index(s.n, k)}});
    }
    r.witness["z_near"] = static_cast<double>(z_near);
    r.witness["z_far"] = static_cast<double>(z_far);
    r.witness["deleted_growth"] = static_cast<double>(g);
    r.witness["growth_threshold"] = static_cast<double>(growth);
    r.witness["kept_levels"] = kept;
    r.status = status_of(ok);
  });
}

/// c with a = c b, if one exists (b nonzero).
inline std::optional<Rational> scalar_ratio(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::invalid_argument("scalar_ratio: zero reference polynomial");
  const int d = std::max(a.degree(), b.degree());
  std::optional<Rational> c;
  for (int i = 0; i <= d; ++i) {
    const Rational ai = a.coeff(i), bi = b.coeff(i);
    if (bi == 0) {
      if (ai != 0) return std::nullopt;
      continue;
    }
    const Rational q = ai / bi;
    if (c && *c != q) return std::nullopt;
    c = q;
  }
  return c;
}

/// The set of distinct coefficient ratios a_i / b_i; a support mismatch
/// counts as an extra "infinite" ratio.
inline json coefficient_ratios(const Poly& a, const Poly& b) {
  std::set<std::string> seen;
  for (int i = 0; i <= std::max(a.degree(), b.degree()); ++i) {
    const Rational ai = a.coeff(i), bi = b.coeff(i);
    if (bi == 0 && ai == 0) continue;
    seen.insert(bi == 0 ? std::string("inf") : to_string(ai / bi));
  }
  return json(std::vector<std::string>(seen.begin(), seen.end()));
}

/// Q_0^N = -N! (-1)^N L_N^{-N-1}, and V^(0)(N) = V_II(N+1) + 2 omega where
/// V_II is the one-step extension by z^{-(N+1/2)/2} e^{-z/2} L_N^{-N-1}.
inline VerifyReport n0_type2_equivalence(int N, const NumericContext& ctx = {2.0}) {
  return timed_report("isotonic.n0-type2", json{{"N", N}, {"omega", ctx.omega}}, [&](VerifyReport& r) {
    IsotonicParams{N}.validate();
    const Poly q0 = q_poly(0, N);
    const Poly seed = classical::laguerre(N, -N - 1);
    const Rational expected = -Rational(factorial(N)) * (N % 2 ? -1 : 1);
    const auto ratio = scalar_ratio(q0, seed);
    const ExtensionSpec s{0, N, from_double(ctx.omega)};
    const Potential<IsotonicGauge> V0 = extended_potential(s);
    const GaugedFn<IsotonicGauge> phi{{Exponent::quarters(-(2 * N + 1)), -1, 0}, RationalFn(seed)};
    const Potential<IsotonicGauge> base_up = classical::base_potential(IsotonicParams{N + 1});
    const Potential<IsotonicGauge> V2 = base_up.with_z_form(
        base_up.z_form - in_energy_units(log_second_derivative(phi)) * Rational(2), base_up.z_form);
    const RationalFn exact_diff = V0.z_form - V2.z_form - RationalFn::constant(2);
    double worst = 0.0;
    for (int i = 1; i <= 10; ++i) {
      const double x = 0.35 * i / std::sqrt(ctx.omega);
      const double a = V0(x, ctx), b = V2(x, ctx) + 2 * ctx.omega;
      worst = std::max(worst, std::fabs(a - b) / std::max(1.0, std::fabs(a)));
    }
    constexpr double tol = 1e-12;
    r.witness["Q0"] = to_json(q0);
    r.witness["L_N^{-N-1}"] = to_json(seed);
    r.witness["ratio"] = ratio ? json(to_string(*ratio)) : json(nullptr);
    r.witness["expected_ratio"] = to_string(expected);
    r.witness["potential_difference"] = to_json(exact_diff);
    r.witness["sampled_max_rel_diff"] = worst;
    r.witness["tolerance"] = tol;
    r.status = status_of(ratio && *ratio == expected && exact_diff.is_zero() && worst < tol);
  });
}

/// Q_n^N - C Q_{n-1}^{N+1} - z^{N+1} L_n^N L_{n-1}^{N+1} / n == 0 with C = 1/n.
inline VerifyReport shape_invariance_check(int n, int N, const std::optional<Rational>& C_override = std::nullopt) {
  json spec{{"n", n}, {"N", N}};
  if (C_override) spec["C"] = to_string(*C_override);
  return timed_report("isotonic.shape", spec, [&](VerifyReport& r) {
    if (n < 1) throw std::invalid_argument("shape invariance needs n >= 1; n = 0 is the negative case");
    const Rational C = C_override ? *C_override : make_rational(1, n);
    const Poly A = q_poly(n, N) - q_poly(n - 1, N + 1) * C;
    const Poly B = Poly::monomial(make_rational(1, n), N + 1) * classical::laguerre(n, N) *
                   classical::laguerre(n - 1, N + 1);
    const Poly diff = A - B;
    r.witness["C"] = to_string(C);
    r.witness["A"] = to_json(A);
    r.witness["B"] = to_json(B);
    r.witness["A_minus_B"] = to_json(diff);
    r.status = status_of(diff.is_zero());
  });
}

/// V^ - 2 (log psi~_0)'' = V^((n-1)^2)(N+1) + E_1, exactly.
inline VerifyReport shape_invariance_partner_check(const ExtensionSpec& s) {
  return timed_report("isotonic.shape-partner", s.to_json(), [&](VerifyReport& r) {
    if (s.n < 1) throw std::invalid_argument("partner identity needs n >= 1");
    const ExtensionSpec sp{s.n - 1, s.N + 1, s.omega};
    const RationalFn lhs =
        extended_potential(s).z_form - in_energy_units(log_second_derivative(eigenfunction(s, 0))) * Rational(2);
    const RationalFn rhs = extended_potential(sp).z_form + RationalFn::constant(classical::energy(s.params(), 1));
    const RationalFn diff = lhs - rhs;
    r.witness["residual"] = to_json(diff);
    r.status = status_of(diff.is_zero());
  });
}

/// For n = 0 no C makes L_1^N Q_0^N - z^{N+1} = C Q_0^{N+1}; checked for N = 1..Nmax.
inline VerifyReport n0_no_shape_invariance(int Nmax = 4) {
  return timed_report("isotonic.n0-negative", json{{"Nmax", Nmax}}, [&](VerifyReport& r) {
    bool ok = true;
    json cases = json::array();
    for (int N = 1; N <= Nmax; ++N) {
      const Poly lhs = classical::laguerre(1, N) * q_poly(0, N) - Poly::monomial(1, N + 1);
      const Poly rhs = q_poly(0, N + 1);
      const json ratios = coefficient_ratios(lhs, rhs);
      const bool none = !scalar_ratio(lhs, rhs).has_value() && ratios.size() >= 2;
      ok = ok && none;
      cases.push_back(json{{"N", N}, {"lhs", to_json(lhs)}, {"Q0_N+1", to_json(rhs)}, {"ratios", ratios}});
    }
    r.witness["cases"] = cases;
    r.status = status_of(ok);
  });
}

struct SpectrumSettings {
  double epsilon_scale = 1e-3;  ///< epsilon = scale * sqrt(2 / omega)
  double margin = 40.0;         ///< omega X^2 / 4 >= E_max + margin
  int grid_n = 8000;
  double rel_tol = 1e-5;  ///< relative to max(1, |E|)
};

/// Dirichlet spectrum of the extension equals {2 k omega : k <= klevels, k != n}.
inline VerifyReport quasi_isospectrality_witness(const ExtensionSpec& s, int klevels, const SpectrumSettings& cfg = {}) {
  json spec = s.to_json();
  spec["klevels"] = klevels;
  spec["grid_n"] = cfg.grid_n;
  return timed_report("isotonic.spectrum", spec, [&](VerifyReport& r) {
    const NumericContext ctx = s.context();
    const Potential<IsotonicGauge> V = extended_potential(s);
    std::vector<double> expected;
    for (int k = 0; k <= klevels; ++k)
      if (k != s.n) expected.push_back(2.0 * k * ctx.omega);
    if (expected.empty()) throw std::invalid_argument("no levels requested");
    const double eps = cfg.epsilon_scale * std::sqrt(2.0 / ctx.omega);
    const double X = std::sqrt(4.0 * (expected.back() + cfg.margin) / ctx.omega);
    const auto res = dirichlet_spectrum([&](double x) { return V(x, ctx); }, eps, X,
                                        static_cast<int>(expected.size()), cfg.grid_n);
    bool ok = true;
    json levels = json::array();
    for (std::size_t i = 0; i < expected.size(); ++i) {
      const double got = res.eigenvalues[i];
      const double rel = std::fabs(got - expected[i]) / std::max(1.0, std::fabs(expected[i]));
      ok = ok && rel < cfg.rel_tol && res.node_counts[i] == static_cast<int>(i);
      levels.push_back(json{{"expected", expected[i]}, {"eigenvalue", got}, {"rel_error", rel},
                            {"nodes", res.node_counts[i]}});
    }
    const double deleted = 2.0 * s.n * ctx.omega;
    bool absent = true;
    for (double e : res.eigenvalues)
      if (std::fabs(e - deleted) / std::max(1.0, deleted) < cfg.rel_tol) absent = false;
    r.witness["levels"] = levels;
    r.witness["deleted_energy"] = deleted;
    r.witness["deleted_absent"] = absent;
    r.witness["interval"] = json{eps, X};
    r.witness["tolerance"] = cfg.rel_tol;
    r.status = status_of(ok && absent);
  });
}

}  // namespace cdbt::isotonic

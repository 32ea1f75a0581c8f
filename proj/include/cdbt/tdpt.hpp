#pragma once

// Two-step confluent rational extensions of the trigonometric
// Darboux-Poeschl-Teller potential.

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdbt/classical.hpp"
#include "cdbt/report.hpp"
#include "cdbt/sturm.hpp"
#include "cdbt/verify.hpp"

namespace cdbt::tdpt {

using classical::TdptParams;

struct IrregularSpec : std::domain_error {
  using std::domain_error::domain_error;
};

struct ExtensionSpec {
  int n = 0;
  int N = 1;
  int M = 1;
  Rational lambda1 = 1;

  TdptParams params() const { return {N, M}; }

  void validate() const {
    if (n < 0) throw std::invalid_argument("tdpt seed level must be non-negative");
    params().validate();
  }

  json to_json() const { return json{{"n", n}, {"N", N}, {"M", M}, {"lambda1", to_string(lambda1)}}; }
};

struct TdptQ {
  Poly poly;
  Rational value_at_1;
};

/// (1-z)^N (1+z)^M
inline Poly jacobi_weight(int N, int M) { return pow(Poly::linear(1, -1), N) * pow(Poly::linear(1, 1), M); }

/// Q_n^{(N,M)}(z) = -1/2 int_{-1}^{z} (1-t)^N (1+t)^M P_n(t)^2 dt
inline Poly q_poly(int n, int N, int M) {
  TdptParams{N, M}.validate();
  if (n < 0) throw std::invalid_argument("q_poly: n must be non-negative");
  const Poly P = classical::jacobi(n, N, M);
  return antiderivative(jacobi_weight(N, M) * P * P * make_rational(-1, 2), -1);
}

/// Closed form of Q_n^{(N,M)}(1) from factorials.
inline Rational q_at_one(int n, int N, int M) {
  BigInt two_pow = 1;
  two_pow <<= static_cast<mp_bitcnt_t>(N + M);
  Rational r = make_rational(two_pow * factorial(n + N) * factorial(n + M),
                             BigInt(2 * n + N + M + 1) * factorial(n) * factorial(n + N + M));
  return -r;
}

inline TdptQ q_tdpt(int n, int N, int M) {
  Poly q = q_poly(n, N, M);
  Rational at1 = q(Rational(1));
  return {std::move(q), at1};
}

/// Q_{n-1}^{(N+1,M+1)}(1) = 4n/(n+N+M+1) Q_n^{(N,M)}(1), on the constructed polynomials.
inline bool q_recurrence_check(int n, int N, int M) {
  if (n < 1) throw std::invalid_argument("q_recurrence_check needs n >= 1");
  const Rational lhs = q_poly(n - 1, N + 1, M + 1)(Rational(1));
  const Rational rhs = make_rational(4 * n, n + N + M + 1) * q_poly(n, N, M)(Rational(1));
  return lhs == rhs;
}

/// -Q_n^{(N,M)}(1) > 0: lambda1 in (0, threshold] makes the extension singular.
inline Rational regularity_threshold(int n, int N, int M) { return -q_at_one(n, N, M); }

/// Regular iff lambda1 <= 0 or lambda1 > -Q(1).
inline bool is_regular(int n, int N, int M, const Rational& lambda1) {
  return lambda1 <= 0 || lambda1 > regularity_threshold(n, N, M);
}

inline bool is_regular(const ExtensionSpec& s) { return is_regular(s.n, s.N, s.M, s.lambda1); }

inline Poly denominator(const ExtensionSpec& s) { return q_poly(s.n, s.N, s.M) + Poly::constant(s.lambda1); }

/// Roots of lambda1 + Q on (-1, 1]. A zero at z = 1 (x = 0) counts; a zero at
/// z = -1 (x = pi/2, the point where Q is anchored) does not.
inline RootIsolation denominator_roots(const ExtensionSpec& s) {
  return sturm_roots(denominator(s), RealInterval{Rational(-1), Rational(1), true, false});
}

inline bool certified_regular(const ExtensionSpec& s) { return denominator_roots(s).count() == 0; }

inline void require_regular(const ExtensionSpec& s) {
  s.validate();
  if (!is_regular(s))
    throw IrregularSpec("lambda1 = " + to_string(s.lambda1) + " lies in the singular window (0, " +
                        to_string(regularity_threshold(s.n, s.N, s.M)) + "]");
}

/// 4 (1-z)^N (1+z)^M [((M-N) - (N+M+1) z) R + (1 - z^2) R'],  R = P_n^2 / (lambda1 + Q)
inline RationalFn correction(const ExtensionSpec& s) {
  const Poly P = classical::jacobi(s.n, s.N, s.M);
  const RationalFn R(P * P, denominator(s));
  const RationalFn lin(Poly::linear(Rational(s.M - s.N), Rational(-(s.N + s.M + 1))));
  const RationalFn one_minus_sq(Poly::from_ints({1, 0, -1}));
  return RationalFn(jacobi_weight(s.N, s.M) * Rational(4)) * (lin * R + one_minus_sq * derivative(R));
}

inline Potential<TdptGauge> extended_potential(const ExtensionSpec& s) {
  require_regular(s);
  const Potential<TdptGauge> base = classical::base_potential(s.params());
  return base.with_z_form(base.z_form + correction(s), base.z_form);
}

/// Same potential by the independent route V - 2 [log(lambda1 + Q)]''.
inline RationalFn extended_potential_log_route(const ExtensionSpec& s) {
  s.validate();
  const GaugedFn<TdptGauge> f{TdptGauge::trivial(), RationalFn(denominator(s))};
  return classical::base_potential(s.params()).z_form - in_energy_units(log_second_derivative(f)) * Rational(2);
}

/// P_{n,k}^{(N,M)} = (k+N+M+1) P_n P_{k-1}^{(N+1,M+1)} - (n+N+M+1) P_{n-1}^{(N+1,M+1)} P_k
inline Poly p_nk(int n, int k, int N, int M) {
  using classical::jacobi;
  return jacobi(n, N, M) * jacobi(k - 1, N + 1, M + 1) * Rational(k + N + M + 1) -
         jacobi(n - 1, N + 1, M + 1) * jacobi(k, N, M) * Rational(n + N + M + 1);
}

/// P~_{N,M,k}^{(n^2)}(z; lambda1); the k = n member is P_n^{(N,M)} itself.
inline Poly exceptional_polynomial(const ExtensionSpec& s, int k) {
  s.validate();
  if (k < 0) throw std::invalid_argument("exceptional_polynomial: k must be non-negative");
  const Poly Pn = classical::jacobi(s.n, s.N, s.M);
  if (k == s.n) return Pn;
  const Rational c(4 * (s.n - k) * (s.n + k + s.N + s.M + 1));
  return classical::jacobi(k, s.N, s.M) * denominator(s) * c +
         pow(Poly::linear(1, -1), s.N + 1) * pow(Poly::linear(1, 1), s.M + 1) * p_nk(s.n, k, s.N, s.M) * Pn;
}

struct ExceptionalFamily {
  ExtensionSpec spec;
  std::map<int, Poly> polys;
  RationalFn measure;  ///< 1/2 (1-z)^N (1+z)^M / (lambda1 + Q)^2
};

inline RationalFn measure(const ExtensionSpec& s) {
  const Poly d = denominator(s);
  return RationalFn(jacobi_weight(s.N, s.M) * make_rational(1, 2), d * d);
}

inline ExceptionalFamily exceptional_family(const ExtensionSpec& s, int kmax) {
  require_regular(s);
  if (kmax < 0) throw std::invalid_argument("exceptional_family: kmax must be non-negative");
  ExceptionalFamily fam{s, {}, measure(s)};
  for (int k = 0; k <= kmax; ++k) fam.polys.emplace(k, exceptional_polynomial(s, k));
  return fam;
}

/// psi~_k = (1-z)^{(N+1/2)/2} (1+z)^{(M+1/2)/2} P~_k / (lambda1 + Q)
inline GaugedFn<TdptGauge> eigenfunction(const ExtensionSpec& s, int k) {
  require_regular(s);
  return {classical::ground_gauge(s.params()), RationalFn(exceptional_polynomial(s, k), denominator(s))};
}

/// Psi_n^{(n)} = (lambda1 + Q) / psi_n, the general solution at E_n of the
/// once-transformed potential.
inline GaugedFn<TdptGauge> confluent_seed(const ExtensionSpec& s) {
  s.validate();
  const TdptGauge g = classical::ground_gauge(s.params());
  return {TdptGauge::trivial() / g, RationalFn(denominator(s), classical::jacobi(s.n, s.N, s.M))};
}

/// Eigenfunction by the Darboux-Crum quotient (E_n - E_k) psi_k - W(psi_n, psi_k)/Psi,
/// and 1/Psi for k = n.
inline GaugedFn<TdptGauge> eigenfunction_crum(const ExtensionSpec& s, int k) {
  s.validate();
  const GaugedFn<TdptGauge> Psi = confluent_seed(s);
  if (k == s.n) return GaugedFn<TdptGauge>::scalar(1) / Psi;
  const TdptParams p = s.params();
  const auto psi_n = classical::eigenstate(p, s.n);
  const auto psi_k = classical::eigenstate(p, k);
  const Rational dE = classical::energy(p, s.n) - classical::energy(p, k);
  return psi_k * dE - wronskian({psi_n, psi_k}) / Psi;
}

inline json spec_json(int n, int N, int M) { return json{{"n", n}, {"N", N}, {"M", M}}; }

/// lambda1 + Q_n^{(N,M)} - psi_n psi_{n-1}^{(N+1,M+1)}/(4n) = C (lambda1' + Q_{n-1}^{(N+1,M+1)})
/// as an exact polynomial identity, affine in lambda1. `C_override` replaces
/// C = (N+M+n+1)/(4n) for negative controls.
inline VerifyReport shape_invariance_check(int n, int N, int M, const Rational& lambda1,
                                           const std::optional<Rational>& C_override = std::nullopt) {
  json spec = spec_json(n, N, M);
  spec["lambda1"] = to_string(lambda1);
  if (C_override) spec["C"] = to_string(*C_override);
  return timed_report("tdpt.shape", spec, [&](VerifyReport& r) {
    if (n < 1) throw std::invalid_argument("shape invariance needs n >= 1");
    const TdptParams p{N, M}, pp{N + 1, M + 1};
    const Rational C = C_override ? *C_override : make_rational(N + M + n + 1, 4 * n);
    const Rational lambda_coeff = make_rational(4 * n, N + M + n + 1);  // lambda1' / lambda1
    const Poly A = q_poly(n, N, M) - q_poly(n - 1, N + 1, M + 1) * C;
    // B from the gauged eigenstates, collapsed to a polynomial.
    const auto prod = classical::eigenstate(p, n) * classical::eigenstate(pp, n - 1) * make_rational(1, 4 * n);
    const RationalFn B = prod.to_rational();
    if (!B.is_polynomial()) throw std::logic_error("psi_n psi_{n-1}^+ is not polynomial in z");
    const Poly B_poly = B.num() / B.den().lead();
    // residual(lambda1) = (A - B) - (C lambda1' - lambda1) = constant part + lambda1 * slope
    const Poly constant_part = A - B_poly;
    const Rational slope = -(C * lambda_coeff - 1);
    const Poly at_lambda = constant_part - Poly::constant(C * lambda_coeff * lambda1 - lambda1);
    r.witness["C"] = to_string(C);
    r.witness["lambda1_prime"] = to_string(lambda_coeff * lambda1);
    r.witness["A_minus_B"] = to_json(constant_part);
    r.witness["lambda_slope"] = to_string(slope);
    r.witness["residual_at_lambda1"] = to_json(at_lambda);
    r.status = status_of(constant_part.is_zero() && slope == 0 && at_lambda.is_zero());
  });
}

/// The partner of the extension, V~ - 2 (log psi~_0)'', equals the extension at
/// (n-1, N+1, M+1, lambda1') shifted by E_1, as exact rational functions.
inline VerifyReport shape_invariance_partner_check(const ExtensionSpec& s) {
  return timed_report("tdpt.shape-partner", s.to_json(), [&](VerifyReport& r) {
    if (s.n < 1) throw std::invalid_argument("partner identity needs n >= 1");
    require_regular(s);
    const ExtensionSpec sp{s.n - 1, s.N + 1, s.M + 1, make_rational(4 * s.n, s.N + s.M + s.n + 1) * s.lambda1};
    const RationalFn lhs = extended_potential(s).z_form - in_energy_units(log_second_derivative(eigenfunction(s, 0))) * Rational(2);
    const RationalFn rhs = extended_potential(sp).z_form + RationalFn::constant(classical::energy(s.params(), 1));
    const RationalFn diff = lhs - rhs;
    r.witness["lambda1_prime"] = to_string(sp.lambda1);
    r.witness["residual"] = to_json(diff);
    r.status = status_of(diff.is_zero());
  });
}

/// Fixed numeric settings of the Dirichlet oracle on (0, pi/2).
struct SpectrumSettings {
  double epsilon = 1e-4;
  int grid_n = 8000;
  double rel_tol = 1e-6;  ///< relative to max(1, |E_k|)
};

inline VerifyReport isospectrality_witness(const ExtensionSpec& s, int klevels, const SpectrumSettings& cfg = {}) {
  json spec = s.to_json();
  spec["klevels"] = klevels;
  spec["grid_n"] = cfg.grid_n;
  return timed_report("tdpt.spectrum", spec, [&](VerifyReport& r) {
    const Potential<TdptGauge> V = extended_potential(s);
    const auto res = dirichlet_spectrum([&](double x) { return V(x); }, cfg.epsilon,
                                        std::numbers::pi / 2 - cfg.epsilon, klevels + 1, cfg.grid_n);
    bool ok = true;
    json levels = json::array();
    for (int k = 0; k <= klevels; ++k) {
      const double exact = classical::energy(s.params(), k).get_d();
      const double got = res.eigenvalues[static_cast<std::size_t>(k)];
      const double rel = std::fabs(got - exact) / std::max(1.0, std::fabs(exact));
      ok = ok && rel < cfg.rel_tol && res.node_counts[static_cast<std::size_t>(k)] == k;
      levels.push_back(json{{"k", k}, {"expected", exact}, {"eigenvalue", got}, {"rel_error", rel},
                            {"nodes", res.node_counts[static_cast<std::size_t>(k)]}});
    }
    r.witness["levels"] = levels;
    r.witness["tolerance"] = cfg.rel_tol;
    r.status = status_of(ok);
  });
}

}  // namespace cdbt::tdpt

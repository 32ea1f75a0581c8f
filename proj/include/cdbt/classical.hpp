#pragma once

// Classical Jacobi and Laguerre polynomials, the two base potentials with a
// zero ground-state energy, their spectra and gauged eigenstates.

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "cdbt/gauge.hpp"

namespace cdbt {

/// A potential held exactly as a rational function of z, in the family's
/// energy unit (1 for tdpt, omega for isotonic). When a closed-form base is
/// attached, numeric evaluation uses it for the endpoint-singular part and the
/// rational z-form only for the (regular) correction.
template <class G>
struct Potential {
  RationalFn z_form;
  std::function<double(double, const NumericContext&)> base_x;
  RationalFn correction;  ///< z_form minus the base z-form, when base_x is set

  double operator()(double x, const NumericContext& ctx = {}) const {
    if (!(x > G::x_lo && x < G::x_hi))
      throw std::domain_error(std::string(G::name) + " potential evaluated outside its domain");
    const long double z = G::z_of_x(x, ctx);
    if (base_x) return base_x(x, ctx) + static_cast<double>(correction.eval(z) * G::unit_value(ctx));
    return static_cast<double>(z_form.eval(z) * G::unit_value(ctx));
  }

  /// The potential as a gauged multiplier (energy unit times z_form).
  GaugedFn<G> as_gauged() const { return GaugedFn<G>::energy_unit() * z_form; }

  /// Same numeric base, new exact form.
  Potential with_z_form(RationalFn f, const RationalFn& base_z) const {
    Potential p{std::move(f), base_x, {}};
    if (base_x) p.correction = p.z_form - base_z;
    return p;
  }
};

namespace classical {

struct JacobiParams {
  int n = 0;
  int N = 1;
  int M = 1;

  void validate() const {
    if (n < 0) throw std::invalid_argument("Jacobi degree must be non-negative");
    if (N < 1 || M < 1) throw std::invalid_argument("Jacobi parameters must be integers >= 1");
  }
};

struct LaguerreParams {
  int n = 0;
  int N = 1;  ///< may be negative (type-II seeds)

  void validate() const {
    if (n < 0) throw std::invalid_argument("Laguerre degree must be non-negative");
  }
};

struct TdptParams {
  int N = 1;
  int M = 1;

  void validate() const {
    if (N < 1 || M < 1) throw std::invalid_argument("tdpt parameters must be integers >= 1");
  }
};

struct IsotonicParams {
  int N = 1;

  void validate() const {
    if (N < 1) throw std::invalid_argument("isotonic parameter must be an integer >= 1");
  }
};

/// P_n^{(alpha,beta)} from the explicit Gamma-function sum in powers of (1+z).
/// Returns the zero polynomial for n < 0.
inline Poly jacobi(int n, int alpha, int beta) {
  if (n < 0) return Poly();
  if (alpha < 0 || beta < 0) throw std::invalid_argument("jacobi: integer parameters must be >= 0");
  const long ab = alpha + beta;
  Rational pref = make_rational(factorial(n + beta), factorial(n) * factorial(n + ab));
  if (n % 2) pref = -pref;
  Poly sum;
  Poly one_plus_z_pow = Poly::constant(1);
  const Poly one_plus_z = Poly::linear(1, 1);
  BigInt two_k = 1;
  for (int k = 0; k <= n; ++k) {
    Rational c = make_rational(binomial(n, k) * factorial(n + ab + k), two_k * factorial(beta + k));
    if (k % 2) c = -c;
    sum += one_plus_z_pow * c;
    one_plus_z_pow *= one_plus_z;
    two_k *= 2;
  }
  return sum * pref;
}

inline Poly jacobi(const JacobiParams& p) {
  p.validate();
  return jacobi(p.n, p.N, p.M);
}

/// L_n^alpha(z) = sum_k (-1)^k / k! * (n+alpha)...(k+1+alpha) / (n-k)! z^k, any integer alpha.
inline Poly laguerre(int n, int alpha) {
  if (n < 0) return Poly();
  std::vector<Rational> c(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    BigInt prod = 1;
    for (int j = k + 1; j <= n; ++j) prod *= (j + alpha);
    Rational v = make_rational(prod, factorial(k) * factorial(n - k));
    c[static_cast<std::size_t>(k)] = (k % 2) ? Rational(-v) : v;
  }
  return Poly(std::move(c));
}

inline Poly laguerre(const LaguerreParams& p) {
  p.validate();
  return laguerre(p.n, p.N);
}

/// E_n = 4n(N+M+1+n)
inline Rational energy(const TdptParams& p, int n) { return Rational(4 * n * (p.N + p.M + 1 + n)); }

/// E_n = 2n, in units of omega.
inline Rational energy(const IsotonicParams&, int n) { return Rational(2 * n); }

/// V = (N^2-1/4)/sin^2 x + (M^2-1/4)/cos^2 x - (N+M+1)^2 with sin^2 x = (1-z)/2.
inline Potential<TdptGauge> base_potential(const TdptParams& p) {
  p.validate();
  const Rational a = Rational(2) * (Rational(p.N * p.N) - make_rational(1, 4));
  const Rational b = Rational(2) * (Rational(p.M * p.M) - make_rational(1, 4));
  RationalFn v = RationalFn(Poly::constant(a), Poly::linear(1, -1)) +
                 RationalFn(Poly::constant(b), Poly::linear(1, 1)) +
                 RationalFn::constant(-Rational((p.N + p.M + 1) * (p.N + p.M + 1)));
  const double cn = p.N * p.N - 0.25, cm = p.M * p.M - 0.25, c0 = (p.N + p.M + 1.0) * (p.N + p.M + 1.0);
  auto trig = [cn, cm, c0](double x, const NumericContext&) {
    const double s = std::sin(x), c = std::cos(x);
    return cn / (s * s) + cm / (c * c) - c0;
  };
  return {v, trig, RationalFn()};
}

/// V / omega = z/2 + (N^2-1/4)/(2z) - (N+1) with z = omega x^2 / 2.
inline Potential<IsotonicGauge> base_potential(const IsotonicParams& p) {
  p.validate();
  const Rational c = (Rational(p.N * p.N) - make_rational(1, 4)) / 2;
  Poly num({c, Rational(-(p.N + 1)), make_rational(1, 2)});
  const double cn = p.N * p.N - 0.25;
  const int N = p.N;
  auto direct = [cn, N](double x, const NumericContext& ctx) {
    const double w = ctx.omega;
    return w * w * x * x / 4.0 + cn / (x * x) - w * (N + 1);
  };
  return {RationalFn(num, Poly::x()), direct, RationalFn()};
}

inline TdptGauge ground_gauge(const TdptParams& p) {
  return {Exponent::quarters(2 * p.N + 1), Exponent::quarters(2 * p.M + 1)};
}

inline IsotonicGauge ground_gauge(const IsotonicParams& p) {
  return {Exponent::quarters(2 * p.N + 1), -1, 0};
}

/// psi_n = (1-z)^{(N+1/2)/2} (1+z)^{(M+1/2)/2} P_n^{(N,M)}(z)
inline GaugedFn<TdptGauge> eigenstate(const TdptParams& p, int n) {
  p.validate();
  if (n < 0) throw std::invalid_argument("eigenstate index must be non-negative");
  return {ground_gauge(p), RationalFn(jacobi(n, p.N, p.M))};
}

/// psi_n = z^{(N+1/2)/2} e^{-z/2} L_n^N(z)
inline GaugedFn<IsotonicGauge> eigenstate(const IsotonicParams& p, int n) {
  p.validate();
  if (n < 0) throw std::invalid_argument("eigenstate index must be non-negative");
  return {ground_gauge(p), RationalFn(laguerre(n, p.N))};
}

/// ||psi_n||^2 for the isotonic family, as the coefficient of 1/sqrt(2 omega).
inline Rational isotonic_norm2(int n, int N) {
  if (N < 1 || n < 0) throw std::invalid_argument("isotonic_norm2 needs n >= 0, N >= 1");
  return make_rational(factorial(n + N), factorial(n));
}

template <class Params>
struct BaseSpectrum {
  Params params;
  std::map<int, Rational> level_energies;  ///< isotonic values are in units of omega
};

template <class Params>
BaseSpectrum<Params> base_spectrum(const Params& p, int nmax) {
  BaseSpectrum<Params> s{p, {}};
  for (int n = 0; n <= nmax; ++n) s.level_energies.emplace(n, energy(p, n));
  return s;
}

}  // namespace classical
}  // namespace cdbt

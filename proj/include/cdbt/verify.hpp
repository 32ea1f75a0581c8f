#pragma once

// Verification engines: exact Schroedinger residuals of gauged functions and
// quadrature Gram matrices.

#include <cmath>
#include <functional>
#include <vector>

#include "cdbt/classical.hpp"
#include "cdbt/quadrature.hpp"
#include "cdbt/spectrum.hpp"

namespace cdbt {

/// psi'' + (E - V) psi with V and E measured in the family's energy unit,
/// divided by the gauge of psi times the energy unit. Zero iff psi is an exact
/// eigenfunction of V at E.
template <class G>
RationalFn exact_ode_residual(const Potential<G>& V, const GaugedFn<G>& psi, const Rational& E) {
  const GaugedFn<G> unit = GaugedFn<G>::energy_unit();
  const GaugedFn<G> lhs = psi.d_dx(2) + unit * (RationalFn::constant(E) - V.z_form) * psi;
  if (lhs.is_zero()) return RationalFn();
  const GaugedFn<G> ref{psi.gauge() * unit.gauge(), RationalFn::constant(1)};
  return (lhs / ref).to_rational();
}

/// (log f)'' = f''/f - (f'/f)^2, exactly.
template <class G>
GaugedFn<G> log_second_derivative(const GaugedFn<G>& f) {
  const GaugedFn<G> d1 = f.d_dx() / f;
  return f.d_dx(2) / f - d1 * d1;
}

/// A potential-like gauged quantity as a rational function of z in energy units.
template <class G>
RationalFn in_energy_units(const GaugedFn<G>& g) {
  if (g.is_zero()) return RationalFn();
  return (g / GaugedFn<G>::energy_unit()).to_rational();
}

struct GramMatrix {
  std::vector<std::vector<QuadratureResult>> entries;

  /// max over j != k of |G_jk| / sqrt(G_jj G_kk)
  double max_relative_off_diagonal() const {
    double worst = 0.0;
    for (std::size_t j = 0; j < entries.size(); ++j)
      for (std::size_t k = 0; k < entries.size(); ++k) {
        if (j == k) continue;
        const double scale = std::sqrt(entries[j][j].value * entries[k][k].value);
        worst = std::max(worst, std::fabs(entries[j][k].value) / scale);
      }
    return worst;
  }

  bool diagonal_positive() const {
    for (std::size_t j = 0; j < entries.size(); ++j)
      if (!(entries[j][j].value > 0)) return false;
    return true;
  }
};

/// Integration domain for gram_matrix; hi = +inf selects the semi-infinite map.
struct GramDomain {
  double lo = -1.0;
  double hi = 1.0;
};

inline GramMatrix gram_matrix(const std::vector<std::function<double(double)>>& fs,
                              const std::function<double(double)>& weight, const GramDomain& dom,
                              const QuadratureOptions& opt = {}) {
  const std::size_t m = fs.size();
  GramMatrix g;
  g.entries.assign(m, std::vector<QuadratureResult>(m));
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = j; k < m; ++k) {
      auto f = [&](double z) { return fs[j](z) * fs[k](z) * weight(z); };
      QuadratureResult r = std::isinf(dom.hi) ? integrate_to_infinity(f, dom.lo, opt) : integrate(f, dom.lo, dom.hi, opt);
      g.entries[j][k] = r;
      g.entries[k][j] = r;
    }
  return g;
}

/// Polynomial evaluated in extended precision, as a plain callable.
inline std::function<double(double)> as_function(const Poly& p) {
  return [p](double z) { return static_cast<double>(p.eval(z)); };
}

inline std::function<double(double)> as_function(const RationalFn& f) {
  return [f](double z) { return static_cast<double>(f.eval(z)); };
}

}  // namespace cdbt

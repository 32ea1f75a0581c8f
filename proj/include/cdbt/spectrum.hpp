#pragma once

// Lowest Dirichlet eigenvalues of -d^2/dx^2 + V on [a, b] from the 3-point
// finite-difference matrix: Sturm-count bisection for the eigenvalues, inverse
// iteration for the eigenvectors (node counts), Richardson over grids n, 2n.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdbt {

struct SpectrumGrid {
  double a = 0.0;
  double b = 0.0;
  int n_points = 0;
};

struct SpectrumResult {
  std::vector<double> eigenvalues;        ///< Richardson-extrapolated
  std::vector<double> coarse;             ///< grid n
  std::vector<double> fine;               ///< grid 2n
  std::vector<double> error_estimates;    ///< |fine - coarse| / 3
  std::vector<int> node_counts;           ///< from the fine-grid eigenvectors
  SpectrumGrid grid;
};

struct SpectrumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

struct Tridiagonal {
  std::vector<long double> diag;
  long double off = 0;  ///< constant off-diagonal
};

inline Tridiagonal assemble(const std::function<double(double)>& V, double a, double b, int n) {
  if (n < 4) throw std::invalid_argument("spectrum grid too small");
  const long double h = (static_cast<long double>(b) - a) / n;
  Tridiagonal t;
  t.diag.resize(static_cast<std::size_t>(n - 1));
  t.off = -1.0L / (h * h);
  for (int i = 1; i < n; ++i) {
    const double x = static_cast<double>(a + i * h);
    const double v = V(x);
    if (!std::isfinite(v)) throw SpectrumError("potential not finite on the grid at x = " + std::to_string(x));
    t.diag[static_cast<std::size_t>(i - 1)] = 2.0L / (h * h) + v;
  }
  return t;
}

/// Number of eigenvalues strictly below lambda.
inline int sturm_count(const Tridiagonal& t, long double lambda) {
  const long double e2 = t.off * t.off;
  int count = 0;
  long double q = 1;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    q = t.diag[i] - lambda - (i == 0 ? 0.0L : e2 / q);
    if (q == 0) q = -1e-300L;
    if (q < 0) ++count;
  }
  return count;
}

inline long double kth_eigenvalue(const Tridiagonal& t, int k) {
  long double lo = t.diag[0], hi = t.diag[0];
  for (long double d : t.diag) {
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  lo -= 2 * std::fabs(t.off);
  hi += 2 * std::fabs(t.off);
  for (int it = 0; it < 400; ++it) {
    const long double mid = 0.5L * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (sturm_count(t, mid) > k) hi = mid;
    else lo = mid;
  }
  return 0.5L * (lo + hi);
}

/// Sign changes of the eigenvector for lambda, by inverse iteration.
inline int node_count(const Tridiagonal& t, long double lambda) {
  const std::size_t n = t.diag.size();
  const long double shift = lambda + 1e-12L * (1 + std::fabs(lambda));
  std::vector<long double> y(n, 1.0L), c(n), d(n);
  for (int iter = 0; iter < 3; ++iter) {
    // Thomas algorithm on (T - shift) y_new = y.
    long double piv = t.diag[0] - shift;
    if (piv == 0) piv = 1e-300L;
    c[0] = t.off / piv;
    d[0] = y[0] / piv;
    for (std::size_t i = 1; i < n; ++i) {
      piv = t.diag[i] - shift - t.off * c[i - 1];
      if (piv == 0) piv = 1e-300L;
      c[i] = t.off / piv;
      d[i] = (y[i] - t.off * d[i - 1]) / piv;
    }
    y[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) y[i] = d[i] - c[i] * y[i + 1];
    long double m = 0;
    for (long double v : y) m = std::max(m, std::fabs(v));
    if (!(m > 0) || !std::isfinite(static_cast<double>(m))) throw SpectrumError("inverse iteration failed");
    for (auto& v : y) v /= m;
  }
  // Ignore the numerically flat tails near the Dirichlet ends.
  int changes = 0, last = 0;
  for (long double v : y) {
    if (std::fabs(v) < 1e-9L) continue;
    const int s = v > 0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace detail

/// Eigenvalues of the grid-n discretization only (no extrapolation).
inline std::vector<double> dirichlet_eigenvalues(const std::function<double(double)>& V, double a, double b,
                                                 int n_levels, int grid_n) {
  auto t = detail::assemble(V, a, b, grid_n);
  std::vector<double> out;
  for (int k = 0; k < n_levels; ++k) out.push_back(static_cast<double>(detail::kth_eigenvalue(t, k)));
  return out;
}

inline SpectrumResult dirichlet_spectrum(const std::function<double(double)>& V, double a, double b, int n_levels,
                                         int grid_n) {
  if (!(a < b)) throw std::invalid_argument("dirichlet_spectrum: empty domain");
  if (n_levels < 1) throw std::invalid_argument("dirichlet_spectrum: need at least one level");
  SpectrumResult r;
  r.grid = {a, b, grid_n};
  auto coarse = detail::assemble(V, a, b, grid_n);
  auto fine = detail::assemble(V, a, b, 2 * grid_n);
  for (int k = 0; k < n_levels; ++k) {
    const long double ec = detail::kth_eigenvalue(coarse, k);
    const long double ef = detail::kth_eigenvalue(fine, k);
    r.coarse.push_back(static_cast<double>(ec));
    r.fine.push_back(static_cast<double>(ef));
    r.eigenvalues.push_back(static_cast<double>((4 * ef - ec) / 3));
    r.error_estimates.push_back(static_cast<double>(std::fabs(ef - ec) / 3));
    r.node_counts.push_back(detail::node_count(fine, ef));
  }
  for (int k = 0; k < n_levels; ++k)
    if (r.node_counts[static_cast<std::size_t>(k)] != k)
      throw SpectrumError("node-count anomaly at level " + std::to_string(k) + ": " +
                          std::to_string(r.node_counts[static_cast<std::size_t>(k)]) + " nodes");
  return r;
}

}  // namespace cdbt

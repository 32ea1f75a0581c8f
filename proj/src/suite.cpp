#include "cdbt/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <thread>

#include "cdbt/chains.hpp"
#include "cdbt/isotonic.hpp"
#include "cdbt/tdpt.hpp"
#include "cdbt/verify.hpp"

namespace cdbt::suite {
namespace {

constexpr double kPi = std::numbers::pi;

using CheckFn = std::function<void(VerifyReport&, const json&)>;

int param_int(const json& p, const char* key, int fallback) {
  if (!p.contains(key)) return fallback;
  if (!p[key].is_number_integer()) throw std::invalid_argument(std::string("parameter ") + key + " must be an integer");
  return p[key].get<int>();
}

Rational param_rational(const json& p, const char* key, const Rational& fallback) {
  return p.contains(key) ? rational_from_json(p[key]) : fallback;
}

bool has_any(const json& p, std::initializer_list<const char*> keys) {
  for (const char* k : keys)
    if (p.contains(k)) return true;
  return false;
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

/// Accumulates per-case results; only failing cases are kept in the witness.
struct Cases {
  int checked = 0;
  json failures = json::array();

  void add(bool ok, json detail) {
    ++checked;
    if (!ok) failures.push_back(std::move(detail));
  }

  void finish(VerifyReport& r) const {
    r.witness["cases_checked"] = checked;
    r.witness["failures"] = failures;
    r.status = status_of(checked > 0 && failures.empty());
  }
};

Poly random_poly(std::mt19937& rng, int degree, int range = 9) {
  std::uniform_int_distribution<int> num(-range, range), den(1, 7);
  std::vector<Rational> c;
  for (int k = 0; k <= degree; ++k) c.push_back(make_rational(num(rng), den(rng)));
  if (c.back() == 0) c.back() = 1;
  return Poly(std::move(c));
}

int dense_sign_changes(const Poly& p, const Rational& a, const Rational& b, int points) {
  int count = 0, last = 0;
  for (int i = 1; i <= points; ++i) {
    const int v = sgn(p(a + (b - a) * make_rational(i, points)));
    if (v == 0) {
      ++count;
      last = 0;
      continue;
    }
    if (last != 0 && v != last) ++count;
    last = v;
  }
  return count;
}

std::vector<double> interior_points(double a, double b, int count) {
  std::vector<double> xs;
  for (int i = 0; i < count; ++i) xs.push_back(a + (b - a) * (i + 0.5) / count);
  return xs;
}

chains::PotentialFn tdpt_base(int N, int M) {
  return chains::potential_fn(classical::base_potential(classical::TdptParams{N, M}));
}

std::vector<tdpt::ExtensionSpec> tdpt_specs(const json& p, std::vector<tdpt::ExtensionSpec> defaults) {
  if (!has_any(p, {"n", "N", "M", "lambda1"})) return defaults;
  return {{param_int(p, "n", 0), param_int(p, "N", 1), param_int(p, "M", 1), param_rational(p, "lambda1", 1)}};
}

std::vector<isotonic::ExtensionSpec> isotonic_specs(const json& p, std::vector<isotonic::ExtensionSpec> defaults) {
  if (!has_any(p, {"n", "N", "omega"})) return defaults;
  return {{param_int(p, "n", 1), param_int(p, "N", 1), param_rational(p, "omega", 1)}};
}

void absorb(VerifyReport& r, const VerifyReport& inner, Cases& cases) {
  json d = inner.spec;
  d["witness"] = inner.witness;
  cases.add(inner.passed(), d);
  (void)r;
}

// ---- exactalg ------------------------------------------------------------

void exactalg_antiderivative(VerifyReport& r, const json&) {
  std::mt19937 rng(11);
  Cases cases;
  for (int deg = 0; deg <= 12; ++deg)
    for (int i = 0; i < 4; ++i) {
      const Poly p = random_poly(rng, deg);
      const Rational a = make_rational(static_cast<long>(rng() % 11) - 5, 3);
      const Poly P = antiderivative(p, a);
      cases.add(derivative(P) == p && P(a) == 0, json{{"p", to_json(p)}, {"lower", to_json(a)}});
    }
  cases.finish(r);
}

void exactalg_sturm_dense(VerifyReport& r, const json&) {
  std::mt19937 rng(5);
  Cases cases;
  const Rational a(-2), b(2);
  for (int i = 0; i < 30; ++i) {
    // distinct rational roots on a 1/7 grid, an irrational pair, and a rootless factor
    std::vector<int> grid(27);
    for (int j = 0; j < 27; ++j) grid[static_cast<std::size_t>(j)] = j - 13;
    std::shuffle(grid.begin(), grid.end(), rng);
    const int roots = static_cast<int>(rng() % 7);
    Poly p = Poly::constant(make_rational(static_cast<long>(rng() % 5) + 1, 2));
    for (int j = 0; j < roots; ++j) p = p * Poly::linear(make_rational(-grid[static_cast<std::size_t>(j)], 7), 1);
    if (i % 3 == 0) p = p * Poly::from_ints({-2, 0, 1});
    if (i % 2 == 0) p = p * Poly::from_ints({3, 1, 1});
    if (p.degree() > 12) continue;
    const int sturm = count_real_roots(p, RealInterval{a, b, true, false});
    const int dense = dense_sign_changes(p, a, b, 8000);
    cases.add(sturm == dense, json{{"p", to_json(p)}, {"sturm", sturm}, {"dense", dense}});
  }
  cases.finish(r);
}

bool canonical(const RationalFn& f) { return gcd(f.num(), f.den()).degree() == 0; }

void exactalg_ratfn_canonical(VerifyReport& r, const json&) {
  std::mt19937 rng(3);
  Cases cases;
  const Poly shared = Poly::from_ints({-1, 0, 1});
  for (int i = 0; i < 25; ++i) {
    const RationalFn f(random_poly(rng, 3) * shared, random_poly(rng, 2) * shared);
    const RationalFn g(random_poly(rng, 2) * Poly::linear(1, 1), random_poly(rng, 3) * Poly::linear(-1, 1));
    const std::vector<std::pair<const char*, RationalFn>> ops = {
        {"f", f}, {"f+g", f + g}, {"f-g", f - g}, {"f*g", f * g}, {"f/g", f / g}, {"f'", derivative(f)}};
    for (const auto& [name, h] : ops) cases.add(canonical(h), json{{"op", name}, {"result", to_json(h)}});
  }
  cases.finish(r);
}

void exactalg_wronskian_swap(VerifyReport& r, const json&) {
  Cases cases;
  for (int N = 1; N <= 2; ++N)
    for (int M = 1; M <= 2; ++M)
      for (int j = 0; j <= 3; ++j)
        for (int k = 0; k <= 3; ++k) {
          const classical::TdptParams p{N, M};
          const auto a = classical::eigenstate(p, j), b = classical::eigenstate(p, k);
          cases.add(equivalent(wronskian({a, b}), -wronskian({b, a})), json{{"N", N}, {"M", M}, {"j", j}, {"k", k}});
        }
  const classical::IsotonicParams ip{2};
  const auto f0 = classical::eigenstate(ip, 0), f1 = classical::eigenstate(ip, 1), f2 = classical::eigenstate(ip, 2);
  cases.add(equivalent(wronskian({f0, f1, f2}), -wronskian({f1, f0, f2})), json{{"isotonic", "3x3 row swap"}});
  cases.finish(r);
}

// ---- classical -----------------------------------------------------------

void classical_jacobi_ode(VerifyReport& r, const json&) {
  Cases cases;
  for (int n = 0; n <= 8; ++n)
    for (int N = 1; N <= 4; ++N)
      for (int M = 1; M <= 4; ++M) {
        const Poly P = classical::jacobi(n, N, M);
        const Poly res = Poly::from_ints({1, 0, -1}) * derivative(P, 2) +
                         Poly::linear(M - N, -(N + M + 2)) * derivative(P) + P * Rational(n * (n + N + M + 1));
        cases.add(res.is_zero(), json{{"n", n}, {"N", N}, {"M", M}, {"residual", to_json(res)}});
      }
  cases.finish(r);
}

void classical_laguerre_ode(VerifyReport& r, const json&) {
  Cases cases;
  for (int n = 0; n <= 8; ++n)
    for (int N = -4; N <= 4; ++N) {
      const Poly L = classical::laguerre(n, N);
      const Poly res = Poly::x() * derivative(L, 2) + Poly::linear(N + 1, -1) * derivative(L) + L * Rational(n);
      cases.add(res.is_zero(), json{{"n", n}, {"N", N}, {"residual", to_json(res)}});
    }
  cases.finish(r);
}

void classical_derivative_identities(VerifyReport& r, const json&) {
  Cases cases;
  for (int n = 0; n <= 8; ++n)
    for (int N = 1; N <= 4; ++N) {
      for (int M = 1; M <= 4; ++M) {
        const Poly d = derivative(classical::jacobi(n, N, M)) -
                       classical::jacobi(n - 1, N + 1, M + 1) * make_rational(n + N + M + 1, 2);
        cases.add(d.is_zero(), json{{"family", "jacobi"}, {"n", n}, {"N", N}, {"M", M}});
      }
      const Poly d = derivative(classical::laguerre(n, N)) + classical::laguerre(n - 1, N + 1);
      cases.add(d.is_zero(), json{{"family", "laguerre"}, {"n", n}, {"N", N}});
    }
  cases.finish(r);
}

void classical_orthogonality(VerifyReport& r, const json&) {
  const double tol = 1e-12;
  std::vector<std::function<double(double)>> jac, lag;
  for (int k = 0; k <= 6; ++k) {
    jac.push_back(as_function(classical::jacobi(k, 1, 1)));
    lag.push_back(as_function(classical::laguerre(k, 1)));
  }
  const auto gj = gram_matrix(jac, as_function(tdpt::jacobi_weight(1, 1)), {-1.0, 1.0});
  const auto gl = gram_matrix(lag, [](double z) { return z * std::exp(-z); }, {0.0, INFINITY});
  r.witness["jacobi_max_rel_off_diagonal"] = gj.max_relative_off_diagonal();
  r.witness["laguerre_max_rel_off_diagonal"] = gl.max_relative_off_diagonal();
  r.witness["tolerance"] = tol;
  r.status = status_of(gj.max_relative_off_diagonal() < tol && gl.max_relative_off_diagonal() < tol);
}

// ---- tdpt ----------------------------------------------------------------

Poly zp1() { return Poly::linear(1, 1); }

void tdpt_q_closed_forms(VerifyReport& r, const json&) {
  Cases cases;
  const std::vector<std::tuple<int, int, Poly>> forms = {
      {1, 1, pow(zp1(), 2) * (Poly::constant(1) - zp1() * make_rational(1, 3)) * make_rational(-1, 2)},
      {2, 1, -(pow(zp1(), 2) * (Poly::constant(1) - zp1() * make_rational(2, 3) + pow(zp1(), 2) * make_rational(1, 8)))},
      {1, 2, -(pow(zp1(), 3) * (Poly::constant(make_rational(1, 3)) - zp1() * make_rational(1, 8)))},
  };
  for (const auto& [N, M, expect] : forms) {
    const Poly q = tdpt::q_tdpt(0, N, M).poly;
    cases.add(q == expect, json{{"N", N}, {"M", M}, {"Q", to_json(q)}, {"expected", to_json(expect)}});
  }
  cases.finish(r);
}

void tdpt_q_monotone(VerifyReport& r, const json&) {
  Cases cases;
  for (int n = 0; n <= 4; ++n)
    for (int N = 1; N <= 3; ++N)
      for (int M = 1; M <= 3; ++M) {
        const Poly P = classical::jacobi(n, N, M);
        const Poly dq = derivative(tdpt::q_poly(n, N, M));
        bool ok = dq == tdpt::jacobi_weight(N, M) * P * P * make_rational(-1, 2);
        for (int i = -19; i <= 19 && ok; ++i) ok = dq(make_rational(i, 20)) <= 0;
        cases.add(ok, json{{"n", n}, {"N", N}, {"M", M}});
      }
  cases.finish(r);
}

void tdpt_q_endpoints(VerifyReport& r, const json&) {
  Cases cases;
  for (int n = 0; n <= 5; ++n)
    for (int N = 1; N <= 4; ++N)
      for (int M = 1; M <= 4; ++M) {
        const auto q = tdpt::q_tdpt(n, N, M);
        const Rational closed = tdpt::q_at_one(n, N, M);
        cases.add(q.poly(Rational(-1)) == 0 && q.value_at_1 == closed,
                  json{{"n", n}, {"N", N}, {"M", M}, {"Q(1)", to_json(q.value_at_1)}, {"closed_form", to_json(closed)}});
      }
  cases.finish(r);
}

void tdpt_regularity(VerifyReport& r, const json& p) {
  const int n = param_int(p, "n", 0), N = param_int(p, "N", 1), M = param_int(p, "M", 1);
  const int samples = param_int(p, "samples", 50);
  const Rational threshold = tdpt::regularity_threshold(n, N, M);
  std::mt19937 rng(2024);
  // half the draws inside (0, 2 threshold], so the singular window is well sampled
  std::uniform_int_distribution<int> num(-600, 600), den(1, 97);
  Cases cases;
  int regular = 0;
  for (int i = 0; i < samples; ++i) {
    Rational l = make_rational(num(rng), den(rng) * 100);
    if (i % 2) l = threshold * make_rational(static_cast<long>(rng() % 2000) + 1, 1000);
    const tdpt::ExtensionSpec s{n, N, M, l};
    const bool predicate = tdpt::is_regular(s), sturm = tdpt::certified_regular(s);
    regular += sturm;
    cases.add(predicate == sturm, json{{"lambda1", to_string(l)}, {"predicate", predicate}, {"sturm", sturm}});
  }
  r.witness["threshold"] = to_string(threshold);
  r.witness["regular_count"] = regular;
  cases.finish(r);
}

void tdpt_window(VerifyReport& r, const json&) {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> num(-500, 500), den(1, 60);
  Cases cases;
  for (int n = 1; n <= 3; ++n)
    for (int N = 1; N <= 3; ++N)
      for (int M = 1; M <= 3; ++M)
        for (int i = 0; i < 10; ++i) {
          const Rational l = make_rational(num(rng), den(rng) * 10);
          const Rational lp = make_rational(4 * n, N + M + n + 1) * l;
          cases.add(tdpt::certified_regular({n, N, M, l}) == tdpt::certified_regular({n - 1, N + 1, M + 1, lp}),
                    json{{"n", n}, {"N", N}, {"M", M}, {"lambda1", to_string(l)}});
        }
  cases.finish(r);
}

const std::vector<tdpt::ExtensionSpec> kTdptOdeSpecs = {{0, 1, 1, 1}, {0, 2, 1, 1}, {1, 1, 1, -1}};

void tdpt_log_route(VerifyReport& r, const json& p) {
  Cases cases;
  for (const auto& s : tdpt_specs(p, {{0, 1, 1, 1}, {0, 2, 1, 1}, {1, 1, 1, -1}, {2, 1, 2, make_rational(-1, 3)}}))
    cases.add(tdpt::extended_potential(s).z_form == tdpt::extended_potential_log_route(s), s.to_json());
  cases.finish(r);
}

void tdpt_ode(VerifyReport& r, const json& p) {
  const int kmax = param_int(p, "kmax", 4);
  Cases cases;
  for (const auto& s : tdpt_specs(p, kTdptOdeSpecs)) {
    const auto V = tdpt::extended_potential(s);
    for (int k = 0; k <= kmax; ++k) {
      const Rational E = classical::energy(s.params(), k);
      const RationalFn res = exact_ode_residual(V, tdpt::eigenfunction(s, k), E);
      const bool control = !exact_ode_residual(V, tdpt::eigenfunction(s, k), E + 1).is_zero();
      json d = s.to_json();
      d["k"] = k;
      d["residual"] = to_json(res);
      d["shifted_energy_detected"] = control;
      cases.add(res.is_zero() && control, d);
    }
  }
  cases.finish(r);
}

void tdpt_crum(VerifyReport& r, const json& p) {
  Cases cases;
  for (const auto& s : tdpt_specs(p, {{0, 1, 1, 1}, {1, 2, 1, -1}, {2, 1, 1, 3}}))
    for (int k = 0; k <= 4; ++k) {
      json d = s.to_json();
      d["k"] = k;
      cases.add(equivalent(tdpt::eigenfunction(s, k), tdpt::eigenfunction_crum(s, k)), d);
    }
  cases.finish(r);
}

GramMatrix tdpt_gram(const tdpt::ExtensionSpec& s, int kmax) {
  const auto fam = tdpt::exceptional_family(s, kmax);
  std::vector<std::function<double(double)>> fs;
  for (const auto& [k, poly] : fam.polys) fs.push_back(as_function(poly));
  return gram_matrix(fs, as_function(fam.measure), {-1.0, 1.0});
}

GramMatrix isotonic_gram(const isotonic::ExtensionSpec& s, int kmax) {
  const auto fam = isotonic::exceptional_family(s, kmax);
  std::vector<std::function<double(double)>> fs;
  for (const auto& [k, poly] : fam.polys) fs.push_back(as_function(poly));
  const auto mu = as_function(fam.measure);
  return gram_matrix(fs, [mu](double z) { return mu(z) * std::exp(-z); }, {0.0, INFINITY});
}

void tdpt_orthogonality(VerifyReport& r, const json& p) {
  const int kmax = param_int(p, "kmax", 6);
  const double tol = 1e-10;
  Cases cases;
  for (const auto& s : tdpt_specs(p, {{0, 1, 1, 1}})) {
    const auto g = tdpt_gram(s, kmax);
    json d = s.to_json();
    d["max_rel_off_diagonal"] = g.max_relative_off_diagonal();
    cases.add(g.diagonal_positive() && g.max_relative_off_diagonal() < tol, d);
    r.witness["max_rel_off_diagonal"] = g.max_relative_off_diagonal();
  }
  r.witness["tolerance"] = tol;
  cases.finish(r);
}

void tdpt_shape(VerifyReport& r, const json& p) {
  if (has_any(p, {"n", "N", "M", "lambda1", "C"})) {
    std::optional<Rational> C;
    if (p.contains("C")) C = rational_from_json(p["C"]);
    const auto inner = tdpt::shape_invariance_check(param_int(p, "n", 1), param_int(p, "N", 1), param_int(p, "M", 1),
                                                    param_rational(p, "lambda1", 1), C);
    r.witness = inner.witness;
    r.status = inner.status;
    return;
  }
  Cases cases;
  for (int n = 1; n <= 3; ++n)
    for (int N = 1; N <= 3; ++N)
      for (int M = 1; M <= 3; ++M)
        for (const Rational& l : {Rational(-1), make_rational(7, 3), Rational(0)})
          absorb(r, tdpt::shape_invariance_check(n, N, M, l), cases);
  cases.finish(r);
}

void tdpt_shape_partner(VerifyReport& r, const json& p) {
  Cases cases;
  for (const auto& s : tdpt_specs(p, {{1, 1, 1, 2}, {1, 2, 1, -1}, {2, 1, 2, make_rational(-5, 2)}, {3, 1, 1, 1}}))
    absorb(r, tdpt::shape_invariance_partner_check(s), cases);
  cases.finish(r);
}

void tdpt_spectrum(VerifyReport& r, const json& p) {
  const auto s = tdpt_specs(p, {{0, 1, 1, 1}}).front();
  const auto inner = tdpt::isospectrality_witness(s, param_int(p, "klevels", 3));
  r.witness = inner.witness;
  r.status = inner.status;
}

// ---- isotonic ------------------------------------------------------------

void isotonic_q_closed_forms(VerifyReport& r, const json&) {
  Cases cases;
  for (int N = 1; N <= 6; ++N) {
    std::vector<Rational> c;
    for (int l = 0; l <= N; ++l) c.push_back(-make_rational(factorial(N), factorial(l)));
    const Poly expect(std::move(c));
    const Poly q = isotonic::q_isotonic(0, N).poly;
    cases.add(q == expect, json{{"n", 0}, {"N", N}, {"Q", to_json(q)}});
  }
  const Poly q11 = isotonic::q_isotonic(1, 1).poly;
  cases.add(q11 == Poly::from_ints({-2, -2, 1, -1}), json{{"n", 1}, {"N", 1}, {"Q", to_json(q11)}});
  cases.finish(r);
}

void isotonic_q_derivative(VerifyReport& r, const json&) {
  Cases cases;
  for (int n = 0; n <= 5; ++n)
    for (int N = 1; N <= 4; ++N) cases.add(isotonic::q_crosscheck(n, N), json{{"n", n}, {"N", N}});
  cases.finish(r);
}

void isotonic_q_endpoint(VerifyReport& r, const json&) {
  Cases cases;
  for (int n = 0; n <= 5; ++n)
    for (int N = 1; N <= 4; ++N) {
      const auto q = isotonic::q_isotonic(n, N);
      cases.add(q.value_at_0 == isotonic::q_at_zero(n, N) &&
                    q.value_at_0 == isotonic::ExtensionSpec{n, N}.lambda1_coefficient(),
                json{{"n", n}, {"N", N}, {"Q(0)", to_json(q.value_at_0)}});
    }
  cases.finish(r);
}

void isotonic_rootless(VerifyReport& r, const json&) {
  Cases cases;
  for (int n = 0; n <= 5; ++n)
    for (int N = 1; N <= 4; ++N) {
      const auto iso = isotonic::q_roots(n, N);
      const bool negative = isotonic::q_at_zero(n, N) < 0;
      cases.add(iso.count() == 0 && negative, json{{"n", n}, {"N", N}, {"roots", to_json(iso)}});
    }
  cases.finish(r);
}

const std::vector<isotonic::ExtensionSpec> kIsotonicOdeSpecs = {{0, 1}, {1, 1}, {1, 2}};

void isotonic_log_route(VerifyReport& r, const json& p) {
  Cases cases;
  for (const auto& s : isotonic_specs(p, {{0, 1}, {1, 1}, {1, 2}, {2, 3}}))
    cases.add(isotonic::extended_potential(s).z_form == isotonic::extended_potential_log_route(s), s.to_json());
  cases.finish(r);
}

void isotonic_ode(VerifyReport& r, const json& p) {
  const int kmax = param_int(p, "kmax", 4);
  Cases cases;
  for (const auto& s : isotonic_specs(p, kIsotonicOdeSpecs)) {
    const auto V = isotonic::extended_potential(s);
    for (int k = 0; k <= kmax; ++k) {
      if (k == s.n) continue;
      const Rational E = classical::energy(s.params(), k);
      const RationalFn res = exact_ode_residual(V, isotonic::eigenfunction(s, k), E);
      const bool control = !exact_ode_residual(V, isotonic::eigenfunction(s, k), E + 1).is_zero();
      json d = s.to_json();
      d["k"] = k;
      d["residual"] = to_json(res);
      d["shifted_energy_detected"] = control;
      cases.add(res.is_zero() && control, d);
    }
    const RationalFn del = exact_ode_residual(V, isotonic::deleted_level_function(s), classical::energy(s.params(), s.n));
    json d = s.to_json();
    d["deleted_level_residual"] = to_json(del);
    cases.add(del.is_zero(), d);
  }
  cases.finish(r);
}

void isotonic_crum(VerifyReport& r, const json& p) {
  Cases cases;
  for (const auto& s : isotonic_specs(p, {{1, 1}, {0, 2}, {2, 1}}))
    for (int k = 0; k <= 4; ++k) {
      if (k == s.n) continue;
      json d = s.to_json();
      d["k"] = k;
      cases.add(equivalent(isotonic::eigenfunction(s, k), isotonic::eigenfunction_crum(s, k)), d);
    }
  cases.finish(r);
}

void isotonic_orthogonality(VerifyReport& r, const json& p) {
  const int kmax = param_int(p, "kmax", 5);
  const double tol = 1e-10;
  Cases cases;
  for (const auto& s : isotonic_specs(p, {{1, 1}})) {
    const auto g = isotonic_gram(s, kmax);
    json d = s.to_json();
    d["max_rel_off_diagonal"] = g.max_relative_off_diagonal();
    cases.add(g.diagonal_positive() && g.max_relative_off_diagonal() < tol, d);
    r.witness["max_rel_off_diagonal"] = g.max_relative_off_diagonal();
  }
  r.witness["tolerance"] = tol;
  cases.finish(r);
}

void isotonic_origin_decay(VerifyReport& r, const json& p) {
  Cases cases;
  for (const auto& s : isotonic_specs(p, {{1, 1}, {0, 2}, {2, 3}}))
    for (int k = 0; k <= 4; ++k) {
      if (k == s.n) continue;
      const auto f = isotonic::eigenfunction(s, k);
      const long double a = std::fabs(f.eval_z(1e-4L)), b = std::fabs(f.eval_z(1e-8L));
      // z^{(N+1/2)/2}: four decades in z
      const double expect = std::pow(10.0, -(s.N + 0.5) * 2.0);
      const double ratio = static_cast<double>(b / a);
      json d = s.to_json();
      d["k"] = k;
      d["ratio"] = ratio;
      d["expected"] = expect;
      cases.add(std::fabs(ratio / expect - 1.0) < 1e-2, d);
    }
  cases.finish(r);
}

void isotonic_deleted_level(VerifyReport& r, const json& p) {
  Cases cases;
  for (const auto& s : isotonic_specs(p, {{1, 1}, {2, 1}, {1, 3}}))
    absorb(r, isotonic::deleted_level_witness(s), cases);
  const Poly L21 = isotonic::exceptional_polynomial({1, 1}, 2);
  const auto iso = refine(L21, sturm_roots(L21, RealInterval::positive_half_line()), make_rational(1, 1000000));
  const bool sqrt2 = iso.count() == 1 && iso.intervals[0].lo * iso.intervals[0].lo < 2 &&
                     iso.intervals[0].hi * iso.intervals[0].hi >= 2;
  cases.add(sqrt2, json{{"L~_2 (n=1, N=1) positive roots", to_json(iso)}});
  cases.finish(r);
}

void isotonic_n0_type2(VerifyReport& r, const json& p) {
  Cases cases;
  const int Nmax = param_int(p, "Nmax", 8);
  for (int N = param_int(p, "N", 1); N <= (p.contains("N") ? param_int(p, "N", 1) : Nmax); ++N)
    absorb(r, isotonic::n0_type2_equivalence(N), cases);
  cases.finish(r);
}

void isotonic_shape(VerifyReport& r, const json& p) {
  if (has_any(p, {"n", "N", "C"})) {
    std::optional<Rational> C;
    if (p.contains("C")) C = rational_from_json(p["C"]);
    const auto inner = isotonic::shape_invariance_check(param_int(p, "n", 1), param_int(p, "N", 1), C);
    r.witness = inner.witness;
    r.status = inner.status;
    return;
  }
  Cases cases;
  for (int n = 1; n <= 3; ++n)
    for (int N = 1; N <= 3; ++N) absorb(r, isotonic::shape_invariance_check(n, N), cases);
  cases.finish(r);
}

void isotonic_shape_partner(VerifyReport& r, const json& p) {
  Cases cases;
  for (const auto& s : isotonic_specs(p, {{1, 1}, {2, 1}, {1, 3}, {3, 2}}))
    absorb(r, isotonic::shape_invariance_partner_check(s), cases);
  cases.finish(r);
}

void isotonic_n0_negative(VerifyReport& r, const json& p) {
  const auto inner = isotonic::n0_no_shape_invariance(param_int(p, "Nmax", 4));
  r.witness = inner.witness;
  r.status = inner.status;
}

void isotonic_spectrum(VerifyReport& r, const json& p) {
  const auto s = isotonic_specs(p, {{1, 1, 2}}).front();
  const auto inner = isotonic::quasi_isospectrality_witness(s, param_int(p, "klevels", 4));
  r.witness = inner.witness;
  r.status = inner.status;
}

// ---- chains --------------------------------------------------------------

void chains_dbt_shape(VerifyReport& r, const json&) {
  Cases cases;
  for (auto [N, M] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{1, 3}}) {
    const classical::TdptParams p{N, M};
    const auto d = chains::dbt_apply(chains::tdpt_seed(p, 0), tdpt_base(N, M), chains::tdpt_seed(p, 1));
    const auto up = tdpt_base(N + 1, M + 1);
    const double E1 = classical::energy(p, 1).get_d();
    double worst = 0;
    for (double x : interior_points(0.03, kPi / 2 - 0.03, 10)) worst = std::max(worst, rel(d.potential(x), up(x) + E1));
    cases.add(worst < 1e-10, json{{"family", "tdpt"}, {"N", N}, {"M", M}, {"max_rel_error", worst}});
  }
  const NumericContext ctx{2.0};
  for (int N = 1; N <= 3; ++N) {
    const classical::IsotonicParams p{N};
    const auto V = chains::potential_fn(classical::base_potential(p), ctx);
    const auto up = chains::potential_fn(classical::base_potential(classical::IsotonicParams{N + 1}), ctx);
    const auto d = chains::dbt_apply(chains::isotonic_seed(p, 0, ctx), V, chains::isotonic_seed(p, 1, ctx));
    double worst = 0;
    for (int i = 1; i <= 10; ++i) worst = std::max(worst, rel(d.potential(0.3 * i), up(0.3 * i) + 2 * ctx.omega));
    cases.add(worst < 1e-10, json{{"family", "isotonic"}, {"N", N}, {"max_rel_error", worst}});
  }
  cases.finish(r);
}

void chains_degenerate(VerifyReport& r, const json&) {
  Cases cases;
  for (auto [N, M] : {std::pair{1, 1}, std::pair{2, 3}}) {
    const classical::TdptParams p{N, M};
    const auto s0 = chains::tdpt_seed(p, 0);
    const auto V = tdpt_base(N, M);
    const auto once = chains::dbt_apply(s0, V, chains::tdpt_seed(p, 1));
    const auto back = chains::dbt_apply(chains::reciprocal_seed(s0), once.potential, chains::tdpt_seed(p, 2));
    double worst = 0;
    for (double x : interior_points(0.03, kPi / 2 - 0.03, 50)) worst = std::max(worst, rel(back.potential(x), V(x)));
    cases.add(worst < 1e-9, json{{"N", N}, {"M", M}, {"max_rel_error", worst}});
  }
  cases.finish(r);
}

void chains_factorization_energy(VerifyReport& r, const json&) {
  Cases cases;
  const classical::TdptParams p{1, 1};
  for (int k : {1, 2, 3}) {
    const auto d = chains::dbt_apply(chains::tdpt_seed(p, 0), tdpt_base(1, 1), chains::tdpt_seed(p, k));
    const double E = classical::energy(p, k).get_d(), h = 1e-3;
    double worst = 0;
    for (double x : interior_points(0.1, kPi / 2 - 0.1, 10)) {
      const auto& f = d.eigenfunction;
      const double d2 = (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
      const double Vx = d.potential(x), fx = f(x);
      const double scale = std::max({std::fabs(Vx * fx), std::fabs(E * fx), 1e-3});
      worst = std::max(worst, std::fabs(-d2 + (Vx - E) * fx) / scale);
    }
    double form = 0;
    for (double x : interior_points(0.03, kPi / 2 - 0.03, 25))
      form = std::max(form, rel(d.eigenfunction(x), d.eigenfunction_wronskian(x)));
    cases.add(worst < 1e-6 && form < 1e-10, json{{"k", k}, {"fd_residual", worst}, {"operator_vs_wronskian", form}});
  }
  cases.finish(r);
}

void chains_seed_scaling(VerifyReport& r, const json&) {
  const auto psi = chains::tdpt_seed({1, 2}, 1);
  const double c = 3.5;
  auto j = psi.jet;
  const chains::SeedFunction scaled{[j, c](double x) {
                                      const chains::Jet v = j(x);
                                      return chains::Jet{c * v.v, c * v.d1, c * v.d2};
                                    },
                                    psi.energy, psi.x_lo, psi.x_hi};
  const auto a = chains::confluent_two_step(tdpt_base(1, 2), psi, -0.5, kPi / 2);
  const auto b = chains::confluent_two_step(tdpt_base(1, 2), scaled, -0.5 * c * c, kPi / 2);
  double worst = 0;
  for (double x : interior_points(0.03, kPi / 2 - 0.03, 15)) worst = std::max(worst, rel(a.potential(x), b.potential(x)));
  const tdpt::ExtensionSpec s{1, 1, 2, make_rational(-1, 2)};
  const GaugedFn<TdptGauge> d{TdptGauge::trivial(), RationalFn(tdpt::denominator(s))};
  const GaugedFn<TdptGauge> dc{TdptGauge::trivial(), RationalFn(tdpt::denominator(s) * make_rational(49, 4))};
  const bool exact = in_energy_units(log_second_derivative(d)) == in_energy_units(log_second_derivative(dc));
  r.witness["numeric_max_rel_error"] = worst;
  r.witness["exact_log_derivative_equal"] = exact;
  r.status = status_of(worst < 1e-12 && exact);
}

void chains_two_step(VerifyReport& r, const json&) {
  const double tol = 1e-9;
  Cases cases;
  for (const auto& s : kTdptOdeSpecs) {
    const auto exact = tdpt::extended_potential(s);
    const auto c = chains::confluent_two_step(tdpt_base(s.N, s.M), chains::tdpt_seed(s.params(), s.n), s.lambda1.get_d(),
                                              kPi / 2);
    double worst = 0;
    for (double x : interior_points(0.01, kPi / 2 - 0.01, 20)) worst = std::max(worst, rel(c.potential(x), exact(x)));
    json d = s.to_json();
    d["max_rel_error"] = worst;
    cases.add(worst < tol, d);
  }
  for (auto s : kIsotonicOdeSpecs) {
    s.omega = 2;
    const NumericContext ctx = s.context();
    const auto exact = isotonic::extended_potential(s);
    const double lambda1 = s.lambda1_coefficient().get_d() / std::sqrt(2 * ctx.omega);
    const auto c = chains::confluent_two_step(chains::potential_fn(classical::base_potential(s.params()), ctx),
                                              chains::isotonic_seed(s.params(), s.n, ctx), lambda1, 0.0);
    double worst = 0;
    for (int i = 1; i <= 20; ++i) worst = std::max(worst, rel(c.potential(0.15 * i), exact(0.15 * i, ctx)));
    json d = s.to_json();
    d["max_rel_error"] = worst;
    cases.add(worst < tol, d);
  }
  r.witness["tolerance"] = tol;
  cases.finish(r);
}

void chains_matveev(VerifyReport& r, const json&) {
  Cases cases;
  absorb(r,
         chains::matveev_cross_check(tdpt_base(1, 1), chains::tdpt_seed({1, 1}, 0), 0.5,
                                     {0.15, 0.25, 0.35, 0.65, 0.75, 0.9, 1.05, 1.2, 1.35, 1.45}),
         cases);
  // psi_1^{(2,1)} has its node near x = 0.886
  absorb(r,
         chains::matveev_cross_check(tdpt_base(2, 1), chains::tdpt_seed({2, 1}, 1), 0.5,
                                     {0.15, 0.25, 0.35, 0.65, 0.75, 1.05, 1.15, 1.25, 1.35, 1.45}),
         cases);
  cases.finish(r);
}

void chains_hyperconfluent(VerifyReport& r, const json&) {
  const classical::TdptParams p{1, 1};
  const auto V = tdpt_base(1, 1);
  const auto seed = chains::tdpt_seed(p, 0);
  Cases cases;
  {
    const auto xs = interior_points(0.03, kPi / 2 - 0.03, 20);
    const auto chain = chains::hyperconfluent_chain(V, seed, {1.0}, 1.0, xs);
    const auto c = chains::confluent_two_step(V, seed, 1.0, 1.0);
    double worst = 0, grouping = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      worst = std::max(worst, rel(chain[i].potential, c.potential(xs[i])));
      grouping = std::max(grouping, rel(chain[i].potential_grouped, chain[i].potential));
    }
    cases.add(worst < 1e-9 && grouping < 1e-9, json{{"m", 2}, {"vs_confluent", worst}, {"grouping", grouping}});
  }
  {
    const double x0 = kPi / 4;
    const auto xs = interior_points(x0, kPi / 2 - 0.02, 200);
    const auto chain = chains::hyperconfluent_chain(V, seed, {1.0, 1.0}, x0, xs);
    double grouping = 0;
    bool finite = true;
    for (const auto& c : chain) {
      finite = finite && std::isfinite(c.potential);
      grouping = std::max(grouping, rel(c.potential_grouped, c.potential));
    }
    cases.add(finite && grouping < 1e-8, json{{"m", 3}, {"grouping", grouping}, {"finite", finite}});
  }
  cases.finish(r);
}

// ---- verify --------------------------------------------------------------

void verify_residual_linearity(VerifyReport& r, const json&) {
  std::mt19937 rng(17);
  Cases cases;
  for (int i = 0; i < 6; ++i) {
    const tdpt::ExtensionSpec s{i % 2, 1 + i % 3, 1 + (i / 2) % 2, Rational(-1 - i)};
    const auto V = tdpt::extended_potential(s);
    const TdptGauge g = classical::ground_gauge(s.params());
    const RationalFn a(random_poly(rng, 4), tdpt::denominator(s)), b(random_poly(rng, 3), tdpt::denominator(s));
    const Rational E = make_rational(static_cast<long>(rng() % 50), 3);
    const auto lhs = exact_ode_residual(V, GaugedFn<TdptGauge>{g, a + b}, E);
    const auto rhs = exact_ode_residual(V, GaugedFn<TdptGauge>{g, a}, E) + exact_ode_residual(V, GaugedFn<TdptGauge>{g, b}, E);
    cases.add(lhs == rhs, json{{"family", "tdpt"}, {"spec", s.to_json()}});
  }
  for (int i = 0; i < 6; ++i) {
    const isotonic::ExtensionSpec s{i % 3, 1 + i % 2};
    const auto V = isotonic::extended_potential(s);
    const IsotonicGauge g{Exponent::quarters(2 * s.N + 1), -1, 2};
    const Poly q = isotonic::q_poly(s.n, s.N);
    const RationalFn a(random_poly(rng, 4), q), b(random_poly(rng, 5), q);
    const Rational E(static_cast<long>(rng() % 9));
    const auto lhs = exact_ode_residual(V, GaugedFn<IsotonicGauge>{g, a + b}, E);
    const auto rhs =
        exact_ode_residual(V, GaugedFn<IsotonicGauge>{g, a}, E) + exact_ode_residual(V, GaugedFn<IsotonicGauge>{g, b}, E);
    cases.add(lhs == rhs, json{{"family", "isotonic"}, {"spec", s.to_json()}});
  }
  cases.finish(r);
}

void verify_spectrum_convergence(VerifyReport& r, const json& p) {
  const int grid = param_int(p, "grid_n", 500);
  Cases cases;
  const auto check = [&](const char* family, const std::function<double(double)>& V, double a, double b,
                         const std::vector<double>& exact) {
    const auto coarse = dirichlet_eigenvalues(V, a, b, static_cast<int>(exact.size()), grid);
    const auto fine = dirichlet_eigenvalues(V, a, b, static_cast<int>(exact.size()), 2 * grid);
    for (std::size_t k = 0; k < exact.size(); ++k) {
      if (exact[k] == 0) continue;  // both errors sit at rounding level for a zero-energy ground state
      const double ratio = (coarse[k] - exact[k]) / (fine[k] - exact[k]);
      cases.add(ratio >= 3.6 && ratio <= 4.4,
                json{{"family", family}, {"k", k}, {"coarse", coarse[k]}, {"fine", fine[k]}, {"ratio", ratio}});
    }
  };
  const auto Vt = classical::base_potential(classical::TdptParams{1, 1});
  check("tdpt (1,1)", [&](double x) { return Vt(x); }, 1e-4, kPi / 2 - 1e-4, {0.0, 16.0, 40.0, 72.0});
  const NumericContext ctx{2.0};
  const auto Vi = classical::base_potential(classical::IsotonicParams{1});
  check("isotonic (N=1, omega=2)", [&](double x) { return Vi(x, ctx); }, 1e-4, 6.0, {0.0, 4.0, 8.0, 12.0});
  r.witness["grid_n"] = grid;
  cases.finish(r);
}

void verify_gram_diagonal(VerifyReport& r, const json&) {
  Cases cases;
  std::vector<std::function<double(double)>> jac;
  for (int k = 0; k <= 6; ++k) jac.push_back(as_function(classical::jacobi(k, 2, 1)));
  cases.add(gram_matrix(jac, as_function(tdpt::jacobi_weight(2, 1)), {-1.0, 1.0}).diagonal_positive(),
            json{{"family", "jacobi (2,1)"}});
  cases.add(tdpt_gram({1, 2, 1, -2}, 5).diagonal_positive(), json{{"family", "tdpt (1,2,1,-2)"}});
  cases.add(isotonic_gram({2, 1}, 4).diagonal_positive(), json{{"family", "isotonic (2,1)"}});
  cases.finish(r);
}

void verify_gauge_operator(VerifyReport& r, const json&) {
  std::mt19937 rng(23);
  Cases cases;
  for (int i = 0; i < 8; ++i) {
    const GaugedFn<TdptGauge> f{{Exponent::quarters(1 + 2 * (i % 4)), Exponent::quarters(3 + 2 * (i % 3))},
                                RationalFn(random_poly(rng, 4), random_poly(rng, 2))};
    const GaugedFn<TdptGauge> fz = f.d_dz();
    const GaugedFn<TdptGauge> rhs =
        RationalFn(Poly::from_ints({4, 0, -4})) * fz.d_dz() - RationalFn(Poly::from_ints({0, 4})) * fz;
    cases.add(equivalent(f.d_dx(2), rhs), json{{"family", "tdpt"}, {"f", f.to_string()}});
  }
  for (int i = 0; i < 8; ++i) {
    const GaugedFn<IsotonicGauge> f{{Exponent::quarters(1 + 2 * (i % 5)), -1, i % 3},
                                    RationalFn(random_poly(rng, 4), random_poly(rng, 1))};
    const GaugedFn<IsotonicGauge> fz = f.d_dz();
    const GaugedFn<IsotonicGauge> rhs =
        GaugedFn<IsotonicGauge>::energy_unit() * (RationalFn(Poly::from_ints({0, 2})) * fz.d_dz() + fz);
    cases.add(equivalent(f.d_dx(2), rhs), json{{"family", "isotonic"}, {"f", f.to_string()}});
  }
  cases.finish(r);
}

// ---- cli -----------------------------------------------------------------

void cli_determinism(VerifyReport& r, const json&) {
  const std::vector<std::string_view> ids = {"exactalg.sturm-dense", "tdpt.regularity", "tdpt.shape",
                                             "isotonic.shape", "isotonic.n0-type2", "verify.gauge-operator"};
  std::string first, second;
  for (int pass = 0; pass < 2; ++pass) {
    json reports = json::array();
    for (auto id : ids) reports.push_back(run_check(id).to_json_stable());
    (pass == 0 ? first : second) = reports.dump();
  }
  r.witness["checks"] = ids;
  r.witness["bytes"] = first.size();
  r.witness["identical"] = first == second;
  r.status = status_of(first == second);
}

void cli_manifest_complete(VerifyReport& r, const json&) {
  json missing = json::array();
  for (auto inv : kInvariants)
    if (!in_manifest(inv)) missing.push_back(inv);
  r.witness["invariants"] = kInvariants.size();
  r.witness["manifest_entries"] = kManifest.size();
  r.witness["missing"] = missing;
  r.status = status_of(missing.empty() && manifest_complete());
}

const std::map<std::string_view, CheckFn>& registry() {
  static const std::map<std::string_view, CheckFn> table = {
      {"exactalg.antiderivative-round-trip", exactalg_antiderivative},
      {"exactalg.sturm-dense", exactalg_sturm_dense},
      {"exactalg.ratfn-canonical", exactalg_ratfn_canonical},
      {"exactalg.wronskian-swap", exactalg_wronskian_swap},
      {"classical.jacobi-ode", classical_jacobi_ode},
      {"classical.laguerre-ode", classical_laguerre_ode},
      {"classical.derivative-identities", classical_derivative_identities},
      {"classical.orthogonality", classical_orthogonality},
      {"tdpt.q-closed-forms", tdpt_q_closed_forms},
      {"tdpt.q-monotone", tdpt_q_monotone},
      {"tdpt.q-endpoints", tdpt_q_endpoints},
      {"tdpt.regularity", tdpt_regularity},
      {"tdpt.window", tdpt_window},
      {"tdpt.log-route", tdpt_log_route},
      {"tdpt.ode", tdpt_ode},
      {"tdpt.crum", tdpt_crum},
      {"tdpt.orthogonality", tdpt_orthogonality},
      {"tdpt.shape", tdpt_shape},
      {"tdpt.shape-partner", tdpt_shape_partner},
      {"tdpt.spectrum", tdpt_spectrum},
      {"isotonic.q-closed-forms", isotonic_q_closed_forms},
      {"isotonic.q-derivative", isotonic_q_derivative},
      {"isotonic.q-endpoint", isotonic_q_endpoint},
      {"isotonic.rootless", isotonic_rootless},
      {"isotonic.log-route", isotonic_log_route},
      {"isotonic.ode", isotonic_ode},
      {"isotonic.crum", isotonic_crum},
      {"isotonic.orthogonality", isotonic_orthogonality},
      {"isotonic.origin-decay", isotonic_origin_decay},
      {"isotonic.deleted-level", isotonic_deleted_level},
      {"isotonic.n0-type2", isotonic_n0_type2},
      {"isotonic.shape", isotonic_shape},
      {"isotonic.shape-partner", isotonic_shape_partner},
      {"isotonic.n0-negative", isotonic_n0_negative},
      {"isotonic.spectrum", isotonic_spectrum},
      {"chains.dbt-shape", chains_dbt_shape},
      {"chains.degenerate", chains_degenerate},
      {"chains.factorization-energy", chains_factorization_energy},
      {"chains.seed-scaling", chains_seed_scaling},
      {"chains.two-step", chains_two_step},
      {"chains.matveev", chains_matveev},
      {"chains.hyperconfluent", chains_hyperconfluent},
      {"verify.residual-linearity", verify_residual_linearity},
      {"verify.spectrum-convergence", verify_spectrum_convergence},
      {"verify.gram-diagonal", verify_gram_diagonal},
      {"verify.gauge-operator", verify_gauge_operator},
      {"cli.determinism", cli_determinism},
      {"cli.manifest-complete", cli_manifest_complete},
  };
  return table;
}

}  // namespace

VerifyReport run_check(std::string_view check_id, const json& params) {
  const auto& reg = registry();
  const auto it = reg.find(check_id);
  if (it == reg.end()) throw UnknownSelector("unknown check id: " + std::string(check_id));
  if (!params.is_object()) throw std::invalid_argument("check parameters must be a JSON object");
  const CheckFn& fn = it->second;
  return timed_report(std::string(check_id), params, [&](VerifyReport& r) { fn(r, params); });
}

std::vector<std::string_view> select(std::string_view selector) {
  std::vector<std::string_view> ids;
  for (const auto& e : kManifest)
    if (selector == "all" || selector == e.module || selector == e.check_id) ids.push_back(e.check_id);
  if (ids.empty()) throw UnknownSelector("unknown selector: " + std::string(selector));
  return ids;
}

unsigned thread_cap() {
  if (const char* env = std::getenv("CONFLUENT_DBT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
    throw std::invalid_argument("CONFLUENT_DBT_THREADS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<VerifyReport> run_suite(std::string_view selector, const json& params_by_check,
                                    std::optional<unsigned> threads) {
  return run_checks(select(selector), params_by_check, threads);
}

std::vector<VerifyReport> run_checks(const std::vector<std::string_view>& ids, const json& params_by_check,
                                     std::optional<unsigned> threads) {
  if (!params_by_check.is_object()) throw std::invalid_argument("params file must hold a JSON object");
  for (auto id : ids)
    if (!in_manifest(id)) throw UnknownSelector("unknown check id: " + std::string(id));
  for (const auto& [key, value] : params_by_check.items()) {
    if (!in_manifest(key)) throw std::invalid_argument("params file names an unknown check: " + key);
    if (!value.is_object()) throw std::invalid_argument("params for " + key + " must be an object");
  }
  std::vector<VerifyReport> out(ids.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ids.size(); i = next++) {
      const std::string key(ids[i]);
      out[i] = run_check(ids[i], params_by_check.contains(key) ? params_by_check[key] : json::object());
    }
  };
  if (ids.empty()) return out;
  const unsigned n = std::min<unsigned>(threads.value_or(thread_cap()), static_cast<unsigned>(ids.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

json suite_json(std::string_view selector, const std::vector<VerifyReport>& reports, bool stable) {
  int passed = 0;
  json list = json::array();
  for (const auto& r : reports) {
    passed += r.passed();
    list.push_back(stable ? r.to_json_stable() : r.to_json());
  }
  return json{{"schema", 1},
              {"selector", selector},
              {"passed", passed},
              {"failed", static_cast<int>(reports.size()) - passed},
              {"reports", list}};
}

}  // namespace cdbt::suite

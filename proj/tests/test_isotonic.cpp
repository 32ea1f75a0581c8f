#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cdbt/isotonic.hpp"

using namespace cdbt;
using isotonic::ExtensionSpec;

namespace {

/// sum_{j=0}^{m} z^j / j!
Poly exp_partial(int m) {
  Poly p;
  for (int j = 0; j <= m; ++j) p += Poly::monomial(make_rational(BigInt(1), factorial(j)), j);
  return p;
}

}  // namespace

TEST(IsotonicQ, SeedLevelZeroIsTruncatedExponential) {
  for (int N = 1; N <= 5; ++N) EXPECT_EQ(isotonic::q_poly(0, N), exp_partial(N) * -Rational(factorial(N)));
}

TEST(IsotonicQ, SeedLevelOneDisplay) {
  for (int N = 1; N <= 5; ++N) {
    const Poly expect = Poly::monomial(-1, N + 2) + Poly::monomial(N, N + 1) - exp_partial(N) * Rational(factorial(N + 1));
    EXPECT_EQ(isotonic::q_poly(1, N), expect);
  }
  EXPECT_EQ(isotonic::q_poly(1, 1), Poly::from_ints({-2, -2, 1, -1}));
}

TEST(IsotonicQ, RoutesAgreeAndDerivativeIdentity) {
  for (int n = 0; n <= 5; ++n)
    for (int N = 1; N <= 4; ++N) {
      EXPECT_TRUE(isotonic::q_crosscheck(n, N)) << n << " " << N;
      const auto q = isotonic::q_isotonic(n, N);
      EXPECT_EQ(q.poly.degree(), N + 2 * n);
      EXPECT_EQ(q.value_at_0, isotonic::q_at_zero(n, N));
      EXPECT_EQ(q.value_at_0, -Rational(factorial(n + N)) / Rational(factorial(n)));
    }
}

TEST(IsotonicQ, NegativeAndRootlessOnHalfLine) {
  for (int n = 0; n <= 5; ++n)
    for (int N = 1; N <= 4; ++N) {
      EXPECT_EQ(isotonic::q_roots(n, N).count(), 0u);
      const Poly q = isotonic::q_poly(n, N);
      EXPECT_EQ(count_real_roots(q, RealInterval{Rational(0), std::nullopt, false, true}), 0);
      EXPECT_LT(q(Rational(0)), 0);
      for (int i = 1; i <= 40; ++i) EXPECT_LT(q(make_rational(i * i, 4)), 0);
    }
}

TEST(IsotonicQ, ValueAtZeroIsNormSquared) {
  for (int n = 0; n <= 4; ++n)
    for (int N = 1; N <= 3; ++N) EXPECT_EQ(isotonic::q_at_zero(n, N), (ExtensionSpec{n, N}.lambda1_coefficient()));
}

TEST(IsotonicPotential, SeedLevelOneDisplayNOne) {
  const Poly D = Poly::from_ints({2, 2, -1, 1});
  const RationalFn expect = classical::base_potential(classical::IsotonicParams{1}).z_form +
                            RationalFn(Poly::from_ints({-4, 0, 1}) * Rational(6), D) -
                            RationalFn(Poly::from_ints({-2, -4, 5}) * Rational(20), D * D) + RationalFn::constant(2);
  EXPECT_EQ(isotonic::extended_potential({1, 1}).z_form, expect);
}

TEST(IsotonicPotential, SeedLevelOneGeneralDisplay) {
  for (int N = 1; N <= 4; ++N) {
    const Poly Q = isotonic::q_poly(1, N);
    const Poly lin = Poly::linear(N + 1, -1);
    const Poly bracket = Poly::linear((Rational(N) + make_rational(1, 2)) * (N + 1), -(Rational(N) + make_rational(5, 2)));
    const Poly tail = Poly::monomial(N + 2, N + 1) - Poly::monomial(N * (N + 1), N) +
                      (N >= 1 ? exp_partial(N - 1) * Rational(factorial(N + 1)) : Poly());
    const RationalFn expect = classical::base_potential(classical::IsotonicParams{N}).z_form -
                              RationalFn(Poly::monomial(4, N) * lin * bracket, Q) -
                              RationalFn(Poly::monomial(4, N + 1) * lin * lin * tail, Q * Q);
    EXPECT_EQ(isotonic::extended_potential({1, N}).z_form, expect) << N;
  }
}

TEST(IsotonicPotential, SeedLevelZeroDisplayAtRationalPoints) {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> num(1, 400), den(1, 37);
  const auto V = isotonic::extended_potential({0, 1});
  for (int i = 0; i < 20; ++i) {
    const Rational omega = make_rational(num(rng), den(rng));
    const Rational x = make_rational(num(rng), den(rng));
    const Rational x2 = x * x;
    const Rational d = omega * x2 + 2;
    const Rational direct = omega * omega * x2 / 4 + make_rational(3, 4) / x2 + 4 * omega / d - 16 * omega / (d * d);
    EXPECT_EQ(omega * V.z_form(omega * x2 / 2), direct);
  }
}

TEST(IsotonicPotential, SeedLevelOneXDisplay) {
  const auto V = isotonic::extended_potential({1, 1});
  for (double omega : {2.0, 0.75}) {
    for (double x : {0.3, 1.1, 2.4}) {
      const double x2 = x * x, x4 = x2 * x2, x6 = x4 * x2;
      const double D = omega * omega * omega * x6 - 2 * omega * omega * x4 + 8 * omega * x2 + 16;
      const double oracle = omega * omega * x2 / 4 + 3 / (4 * x2) + 12 * omega * (omega * omega * x4 - 16) / D -
                            320 * omega * (5 * omega * omega * x4 - 8 * omega * x2 - 8) / (D * D);
      EXPECT_NEAR(V(x, {omega}), oracle, 1e-12 * std::max(1.0, std::fabs(oracle)));
    }
  }
}

TEST(IsotonicPotential, AgreesWithLogRoute) {
  for (int n = 0; n <= 3; ++n)
    for (int N = 1; N <= 3; ++N)
      EXPECT_EQ(isotonic::extended_potential({n, N}).z_form, isotonic::extended_potential_log_route({n, N}));
}

TEST(IsotonicPotential, AsymptoticallyShiftedIsotonic) {
  // V^ - V -> 2 omega; the remaining rational terms decay like 1/z.
  const ExtensionSpec s{1, 1};
  const RationalFn rest = isotonic::correction(s) - RationalFn::constant(2);
  EXPECT_LT(std::fabs(static_cast<double>(rest.eval(1e3L))), 1e-2);
  EXPECT_LT(std::fabs(static_cast<double>(rest.eval(1e6L))), 1e-5);
}

TEST(IsotonicFamily, Goldens) {
  EXPECT_EQ(isotonic::exceptional_polynomial({1, 1}, 0), Poly::from_ints({-2, -2, -1}));
  EXPECT_EQ(isotonic::exceptional_polynomial({1, 1}, 2), Poly::from_ints({-12, 0, 4, 0, 1}) * make_rational(-1, 2));
  for (int k = 1; k <= 6; ++k) {
    const Poly expect = classical::laguerre(k, 1) * Poly::from_ints({1, 1}) * Rational(k) +
                        Poly::monomial(1, 2) * classical::laguerre(k - 1, 2);
    EXPECT_EQ(isotonic::exceptional_polynomial({0, 1}, k), expect);
  }
}

TEST(IsotonicFamily, SeedLevelOneGeneralForm) {
  for (int N = 1; N <= 3; ++N)
    for (int k = 0; k <= 5; ++k) {
      if (k == 1) continue;
      const Poly lin = Poly::linear(N + 1, -1);
      const Poly coeff = Poly::monomial(k, N + 2) - Poly::monomial(N * k + 1, N + 1) +
                         exp_partial(N) * (Rational(k - 1) * Rational(factorial(N + 1)));
      const Poly expect = Poly::monomial(1, N + 1) * lin * lin * classical::laguerre(k - 1, N + 1) +
                          coeff * classical::laguerre(k, N);
      EXPECT_EQ(isotonic::exceptional_polynomial({1, N}, k), expect) << N << " " << k;
    }
}

TEST(IsotonicFamily, DeletedLevelIsRejected) {
  EXPECT_THROW(isotonic::exceptional_polynomial({1, 1}, 1), isotonic::DeletedLevel);
  EXPECT_THROW(isotonic::eigenfunction_crum({2, 1}, 2), isotonic::DeletedLevel);
  const auto fam = isotonic::exceptional_family({1, 1}, 5);
  EXPECT_EQ(fam.polys.count(1), 0u);
  EXPECT_EQ(fam.polys.size(), 5u);
}

TEST(IsotonicFamily, DegreesAfterLeadingCancellation) {
  // the z^{k+N+2n} terms of the two products cancel
  for (int n = 0; n <= 3; ++n)
    for (int N = 1; N <= 3; ++N)
      for (int k = 0; k <= 5; ++k) {
        if (k == n) continue;
        EXPECT_EQ(isotonic::exceptional_polynomial({n, N}, k).degree(), k + N + 2 * n - 1) << n << N << k;
      }
}

TEST(IsotonicEigen, ExactResidualsVanish) {
  for (const ExtensionSpec& s : {ExtensionSpec{1, 1}, ExtensionSpec{0, 1}, ExtensionSpec{2, 2}, ExtensionSpec{1, 3}}) {
    const auto V = isotonic::extended_potential(s);
    for (int k = 0; k <= 4; ++k) {
      if (k == s.n) continue;
      const Rational E = classical::energy(s.params(), k);
      EXPECT_TRUE(exact_ode_residual(V, isotonic::eigenfunction(s, k), E).is_zero()) << k;
      EXPECT_FALSE(exact_ode_residual(V, isotonic::eigenfunction(s, k), E + 1).is_zero()) << k;
    }
    // the deleted level solves the equation but is not normalizable
    const Rational En = classical::energy(s.params(), s.n);
    EXPECT_TRUE(exact_ode_residual(V, isotonic::deleted_level_function(s), En).is_zero());
  }
}

TEST(IsotonicEigen, CrumQuotientAgrees) {
  for (const ExtensionSpec& s : {ExtensionSpec{1, 1}, ExtensionSpec{0, 2}, ExtensionSpec{2, 1}})
    for (int k = 0; k <= 4; ++k) {
      if (k == s.n) continue;
      EXPECT_TRUE(equivalent(isotonic::eigenfunction(s, k), isotonic::eigenfunction_crum(s, k))) << k;
    }
}

TEST(IsotonicEigen, VanishAtOrigin) {
  const ExtensionSpec s{1, 1};
  for (int k : {0, 2, 3}) {
    const auto f = isotonic::eigenfunction(s, k);
    const long double a = std::fabs(f.eval_z(1e-4L)), b = std::fabs(f.eval_z(1e-8L));
    // z^{3/4}: four decades in z give three in psi
    EXPECT_NEAR(static_cast<double>(b / a), 1e-3, 1e-5);
  }
}

TEST(IsotonicOrthogonality, GramMatrix) {
  const auto fam = isotonic::exceptional_family({1, 1}, 5);
  std::vector<std::function<double(double)>> fs;
  for (const auto& [k, p] : fam.polys) fs.push_back(as_function(p));
  const auto mu = as_function(fam.measure);
  const auto g = gram_matrix(fs, [&](double z) { return mu(z) * std::exp(-z); }, {0.0, INFINITY});
  EXPECT_TRUE(g.diagonal_positive());
  EXPECT_LT(g.max_relative_off_diagonal(), 1e-10);
}

TEST(IsotonicDeleted, GrowthAndNodes) {
  const auto r = isotonic::deleted_level_witness({1, 1}, 3);
  EXPECT_TRUE(r.passed()) << r.witness.dump(2);
  const Poly L2 = isotonic::exceptional_polynomial({1, 1}, 2);
  auto iso = refine(L2, sturm_roots(L2, RealInterval::positive_half_line()), make_rational(1, 1000000));
  ASSERT_EQ(iso.count(), 1u);
  EXPECT_NEAR(iso.intervals[0].hi.get_d(), std::sqrt(2.0), 1e-6);
}

TEST(IsotonicType2, SeedLevelZeroEquivalence) {
  for (int N = 1; N <= 4; ++N) EXPECT_TRUE(isotonic::n0_type2_equivalence(N).passed()) << N;
  EXPECT_EQ(isotonic::n0_type2_equivalence(1).witness["ratio"], "1");
  EXPECT_EQ(isotonic::n0_type2_equivalence(2).witness["ratio"], "-2");
  EXPECT_EQ(classical::laguerre(2, -3), Poly({Rational(1), Rational(1), make_rational(1, 2)}));
}

TEST(IsotonicShape, IdentityHolds) {
  for (int n = 1; n <= 4; ++n)
    for (int N = 1; N <= 4; ++N) EXPECT_TRUE(isotonic::shape_invariance_check(n, N).passed()) << n << N;
  const auto r = isotonic::shape_invariance_check(1, 1);
  EXPECT_EQ(poly_from_json(r.witness["A"]), Poly::from_ints({0, 0, 2, -1}));
  EXPECT_EQ(poly_from_json(r.witness["B"]), Poly::from_ints({0, 0, 2, -1}));
  EXPECT_EQ(isotonic::shape_invariance_check(2, 1).witness["C"], "1/2");
  EXPECT_EQ(isotonic::shape_invariance_check(3, 2).witness["C"], "1/3");
}

TEST(IsotonicShape, WrongConstantAndZeroLevelFail) {
  EXPECT_FALSE(isotonic::shape_invariance_check(2, 1, make_rational(1, 3)).passed());
  const auto r = isotonic::shape_invariance_check(0, 1);
  EXPECT_FALSE(r.passed());
  EXPECT_TRUE(r.witness.contains("exception"));
}

TEST(IsotonicShape, PartnerPotential) {
  for (const ExtensionSpec& s : {ExtensionSpec{1, 1}, ExtensionSpec{2, 1}, ExtensionSpec{1, 2}, ExtensionSpec{3, 2}})
    EXPECT_TRUE(isotonic::shape_invariance_partner_check(s).passed()) << s.n << s.N;
}

TEST(IsotonicShape, NoConstantForSeedLevelZero) {
  const auto r = isotonic::n0_no_shape_invariance(4);
  EXPECT_TRUE(r.passed()) << r.witness.dump(2);
  for (const auto& c : r.witness["cases"]) EXPECT_GE(c["ratios"].size(), 2u);
  // positive control for the ratio test
  for (int N = 1; N <= 4; ++N) {
    const Poly q = isotonic::q_poly(0, N + 1);
    const auto c = isotonic::scalar_ratio(q * Rational(3), q);
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(*c, 3);
    EXPECT_EQ(isotonic::coefficient_ratios(q * Rational(3), q).size(), 1u);
  }
}

TEST(IsotonicSpectrum, QuasiIsospectral) {
  const auto r1 = isotonic::quasi_isospectrality_witness({1, 1, 2}, 4);
  EXPECT_TRUE(r1.passed()) << r1.witness.dump(2);
  ASSERT_EQ(r1.witness["levels"].size(), 4u);
  const double expect1[] = {0, 8, 12, 16};
  for (int i = 0; i < 4; ++i) EXPECT_EQ(r1.witness["levels"][i]["expected"].get<double>(), expect1[i]);
  const auto r0 = isotonic::quasi_isospectrality_witness({0, 1, 2}, 3);
  EXPECT_TRUE(r0.passed()) << r0.witness.dump(2);
  EXPECT_EQ(r0.witness["levels"][0]["expected"].get<double>(), 4.0);
}

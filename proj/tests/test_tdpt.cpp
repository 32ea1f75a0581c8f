#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cdbt/tdpt.hpp"

using namespace cdbt;
using tdpt::ExtensionSpec;

namespace {

Poly zp1() { return Poly::from_ints({1, 1}); }

// lambda1 + Q sampled at many rational points of (-1, 1]; counts sign changes
// and exact zeros.
int sampled_denominator_roots(const ExtensionSpec& s, int points) {
  const Poly d = tdpt::denominator(s);
  int count = 0, last = 0;
  for (int i = 1; i <= points; ++i) {
    const Rational z = Rational(-1) + make_rational(2L * i, points);
    const int v = sgn(d(z));
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

}  // namespace

TEST(TdptQ, ClosedFormsForSeedLevelZero) {
  // -1/2 (z+1)^2 (1 - (z+1)/3)
  EXPECT_EQ(tdpt::q_poly(0, 1, 1),
            pow(zp1(), 2) * (Poly::constant(1) - zp1() * make_rational(1, 3)) * make_rational(-1, 2));
  // -(z+1)^2 (1 - 2/3 (z+1) + 1/8 (z+1)^2)
  EXPECT_EQ(tdpt::q_poly(0, 2, 1),
            -(pow(zp1(), 2) * (Poly::constant(1) - zp1() * make_rational(2, 3) + pow(zp1(), 2) * make_rational(1, 8))));
  // -(z+1)^3 (1/3 - 1/8 (z+1))
  EXPECT_EQ(tdpt::q_poly(0, 1, 2), -(pow(zp1(), 3) * (Poly::constant(make_rational(1, 3)) - zp1() * make_rational(1, 8))));
}

TEST(TdptQ, GeneralSeedLevelZeroSum) {
  // -(z+1)^{M+1} sum_k 2^{N-k-1} (-1)^k / (M+k+1) C(N,k) (z+1)^k
  for (int N = 1; N <= 4; ++N)
    for (int M = 1; M <= 4; ++M) {
      Poly sum;
      for (int k = 0; k <= N; ++k) {
        Rational c = make_rational(binomial(N, k), BigInt(M + k + 1));
        c *= (N - k - 1 >= 0) ? Rational(BigInt(1) << static_cast<mp_bitcnt_t>(N - k - 1)) : make_rational(1, 2);
        if (k % 2) c = -c;
        sum += pow(zp1(), k) * c;
      }
      EXPECT_EQ(tdpt::q_poly(0, N, M), -(pow(zp1(), M + 1) * sum));
    }
}

TEST(TdptQ, DegreeAnchorAndEndpointValue) {
  for (int n = 0; n <= 5; ++n)
    for (int N = 1; N <= 4; ++N)
      for (int M = 1; M <= 4; ++M) {
        const auto q = tdpt::q_tdpt(n, N, M);
        EXPECT_EQ(q.poly.degree(), N + M + 2 * n + 1);
        EXPECT_EQ(q.poly(Rational(-1)), 0);
        EXPECT_EQ(q.value_at_1, tdpt::q_at_one(n, N, M));
      }
}

TEST(TdptQ, MonotoneDecreasing) {
  for (int n = 0; n <= 4; ++n)
    for (int N = 1; N <= 3; ++N)
      for (int M = 1; M <= 3; ++M) {
        const Poly P = classical::jacobi(n, N, M);
        const Poly dq = derivative(tdpt::q_poly(n, N, M));
        EXPECT_EQ(dq, tdpt::jacobi_weight(N, M) * P * P * make_rational(-1, 2));
        for (int i = -9; i <= 9; ++i) EXPECT_LE(dq(make_rational(i, 10)), 0);
      }
}

TEST(TdptQ, RecurrenceOfEndpointValues) {
  EXPECT_TRUE(tdpt::q_recurrence_check(1, 1, 1));
  EXPECT_TRUE(tdpt::q_recurrence_check(2, 1, 2));
  EXPECT_TRUE(tdpt::q_recurrence_check(3, 4, 2));
  // oracle: factorial closed form on both sides
  EXPECT_EQ(tdpt::q_at_one(2, 5, 3), make_rational(4 * 3, 3 + 4 + 2 + 1) * tdpt::q_at_one(3, 4, 2));
  EXPECT_THROW(tdpt::q_recurrence_check(0, 1, 1), std::invalid_argument);
}

TEST(TdptRegularity, Thresholds) {
  EXPECT_EQ(tdpt::regularity_threshold(0, 1, 1), make_rational(2, 3));
  EXPECT_EQ(tdpt::regularity_threshold(0, 2, 1), make_rational(2, 3));
  EXPECT_EQ(tdpt::regularity_threshold(0, 1, 2), make_rational(2, 3));
  EXPECT_TRUE(tdpt::is_regular(0, 1, 1, 0));
  EXPECT_FALSE(tdpt::is_regular(0, 1, 1, make_rational(2, 3)));
  EXPECT_TRUE(tdpt::is_regular(0, 1, 1, make_rational(2, 3) + make_rational(1, 1000000)));
}

TEST(TdptRegularity, IrregularLambdaHasOneRoot) {
  const ExtensionSpec s{0, 1, 1, make_rational(1, 3)};
  EXPECT_FALSE(tdpt::is_regular(s));
  EXPECT_EQ(tdpt::denominator_roots(s).count(), 1u);
  EXPECT_EQ(sampled_denominator_roots(s, 10000), 1);
  EXPECT_THROW(tdpt::extended_potential(s), tdpt::IrregularSpec);
}

TEST(TdptRegularity, LambdaOneIsRootless) {
  const ExtensionSpec s{0, 1, 1, 1};
  EXPECT_EQ(count_real_roots(tdpt::denominator(s), RealInterval::open(-1, 1)), 0);
  EXPECT_EQ(sampled_denominator_roots(s, 10000), 0);
}

TEST(TdptRegularity, PredicateAgreesWithSturm) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> num(-300, 300), den(1, 97);
  for (int n = 0; n <= 2; ++n)
    for (int N = 1; N <= 2; ++N)
      for (int M = 1; M <= 2; ++M)
        for (int i = 0; i < 25; ++i) {
          const ExtensionSpec s{n, N, M, make_rational(num(rng), den(rng) * 50)};
          EXPECT_EQ(tdpt::is_regular(s), tdpt::certified_regular(s)) << to_string(s.lambda1);
        }
}

TEST(TdptRegularity, WindowMapsUnderShapeInvariance) {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> num(-500, 500), den(1, 60);
  for (int n = 1; n <= 3; ++n)
    for (int N = 1; N <= 3; ++N)
      for (int M = 1; M <= 3; ++M)
        for (int i = 0; i < 10; ++i) {
          const Rational l = make_rational(num(rng), den(rng) * 10);
          const Rational lp = make_rational(4 * n, N + M + n + 1) * l;
          EXPECT_EQ(tdpt::is_regular(n, N, M, l), tdpt::is_regular(n - 1, N + 1, M + 1, lp));
        }
}

TEST(TdptPotential, MatchesDisplayedFormNmEqualOne) {
  for (const Rational& l : {Rational(1), Rational(-3), make_rational(7, 4)}) {
    const ExtensionSpec s{0, 1, 1, l};
    const RationalFn D(Poly::constant(l) - pow(zp1(), 2) * make_rational(1, 2) + pow(zp1(), 3) * make_rational(1, 6));
    const RationalFn one_minus_sq(Poly::from_ints({1, 0, -1}));
    const RationalFn expect = classical::base_potential(s.params()).z_form -
                              RationalFn(Poly::x() * Rational(12)) * one_minus_sq / D +
                              RationalFn(pow(Poly::from_ints({1, 0, -1}), 3) * Rational(2)) / (D * D);
    EXPECT_EQ(tdpt::extended_potential(s).z_form, expect);
  }
}

TEST(TdptPotential, AgreesWithLogRoute) {
  for (int n = 0; n <= 2; ++n)
    for (int N = 1; N <= 2; ++N)
      for (int M = 1; M <= 2; ++M) {
        const ExtensionSpec s{n, N, M, -2};
        EXPECT_EQ(tdpt::extended_potential(s).z_form, tdpt::extended_potential_log_route(s));
      }
}

TEST(TdptPotential, TrigonometricDisplayNTwoMOne) {
  const ExtensionSpec s{0, 2, 1, 1};
  const auto V = tdpt::extended_potential(s);
  const double x = std::numbers::pi / 3, l = 1.0;
  const double sn = std::sin(x), cs = std::cos(x);
  const double D = l - 4 * std::pow(cs, 4) + 16.0 / 3 * std::pow(cs, 6) - 2 * std::pow(cs, 8);
  const double oracle = 15 / (4 * sn * sn) + 3 / (4 * cs * cs) - 16 -
                        32 * (1 + 4 * std::cos(2 * x)) * std::pow(sn, 4) * cs * cs / D +
                        512 * std::pow(sn, 10) * std::pow(cs, 6) / (D * D);
  EXPECT_NEAR(V(x), oracle, 1e-12 * std::fabs(oracle));
}

TEST(TdptPotential, TrigonometricDisplayNOneMTwo) {
  const ExtensionSpec s{0, 1, 2, 1};
  const auto V = tdpt::extended_potential(s);
  for (double x : {0.3, std::numbers::pi / 3, 1.2}) {
    const double sn = std::sin(x), cs = std::cos(x);
    const double D = 1.0 - 8.0 / 3 * std::pow(cs, 6) + 2 * std::pow(cs, 8);
    const double oracle = 3 / (4 * sn * sn) + 15 / (4 * cs * cs) - 16 +
                          32 * (1 - 4 * std::cos(2 * x)) * sn * sn * std::pow(cs, 4) / D +
                          512 * std::pow(sn, 6) * std::pow(cs, 10) / (D * D);
    EXPECT_NEAR(V(x), oracle, 1e-12 * std::fabs(oracle));
  }
}

TEST(TdptPotential, MirrorSwapsIndices) {
  // x -> pi/2 - x exchanges N and M, and lambda1 + Q(z) becomes -(lambda1' + Q(-z))
  // with lambda1' = -lambda1 - Q(1).
  const ExtensionSpec a{0, 2, 1, -1};
  const ExtensionSpec b{0, 1, 2, 1 - tdpt::q_at_one(0, 1, 2)};
  const auto Va = tdpt::extended_potential(a);
  const auto Vb = tdpt::extended_potential(b);
  for (double x : {0.2, 0.5, 0.9, 1.3}) EXPECT_NEAR(Va(x), Vb(std::numbers::pi / 2 - x), 1e-10 * std::fabs(Va(x)));
}

TEST(TdptPotential, LargeLambdaRecoversBase) {
  const ExtensionSpec s{1, 1, 2, Rational(BigInt(10) * BigInt("1000000000000"))};
  const auto V = tdpt::extended_potential(s);
  const auto V0 = classical::base_potential(s.params());
  for (double x : {0.2, 0.7, 1.3}) EXPECT_NEAR(V(x), V0(x), 1e-9);
}

TEST(TdptFamily, SeedLevelZeroGroundMemberIsOne) {
  for (int N = 1; N <= 3; ++N)
    for (int M = 1; M <= 3; ++M) EXPECT_EQ(tdpt::exceptional_polynomial({0, N, M, 5}, 0), Poly::constant(1));
}

TEST(TdptFamily, DisplayedFormNmEqualOne) {
  const Rational l = make_rational(5, 2);
  const Poly D = Poly::constant(l) - pow(zp1(), 2) * make_rational(1, 2) + pow(zp1(), 3) * make_rational(1, 6);
  for (int k = 1; k <= 6; ++k) {
    const Poly expect = classical::jacobi(k, 1, 1) * D * Rational(-4 * k * (k + 3)) +
                        pow(Poly::from_ints({1, 0, -1}), 2) * classical::jacobi(k - 1, 2, 2) * Rational(k + 3);
    EXPECT_EQ(tdpt::exceptional_polynomial({0, 1, 1, l}, k), expect);
  }
}

TEST(TdptFamily, DegreesWithoutCancellation) {
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> num(-90, 90), den(1, 13);
  for (int i = 0; i < 20; ++i) {
    Rational l = make_rational(num(rng), den(rng));
    for (int n = 0; n <= 2; ++n) {
      const ExtensionSpec s{n, 1 + i % 3, 1 + (i / 3) % 3, l};
      for (int k = 0; k <= 5; ++k) {
        const int deg = tdpt::exceptional_polynomial(s, k).degree();
        EXPECT_EQ(deg, k == n ? n : k + s.N + s.M + 2 * n + 1) << "k=" << k << " n=" << n;
      }
    }
  }
}

TEST(TdptFamily, KEqualsNIsClassical) {
  const ExtensionSpec s{2, 2, 1, -1};
  EXPECT_EQ(tdpt::exceptional_polynomial(s, 2), classical::jacobi(2, 2, 1));
}

TEST(TdptEigen, WronskianOfEigenstates) {
  for (int N = 1; N <= 2; ++N)
    for (int M = 1; M <= 2; ++M)
      for (int n = 0; n <= 3; ++n)
        for (int k = 0; k <= 3; ++k) {
          const classical::TdptParams p{N, M};
          const auto W = wronskian({classical::eigenstate(p, n), classical::eigenstate(p, k)});
          const GaugedFn<TdptGauge> expect{{Exponent::integer(N + 1), Exponent::integer(M + 1)},
                                           RationalFn(-tdpt::p_nk(n, k, N, M))};
          EXPECT_TRUE(equivalent(W, expect)) << n << k;
        }
}

TEST(TdptEigen, ExactResidualsVanish) {
  for (const ExtensionSpec& s : {ExtensionSpec{0, 1, 1, 1}, ExtensionSpec{0, 2, 1, 1}, ExtensionSpec{1, 1, 1, -1},
                                 ExtensionSpec{2, 1, 2, make_rational(-1, 3)}}) {
    const auto V = tdpt::extended_potential(s);
    for (int k = 0; k <= 4; ++k) {
      const Rational E = classical::energy(s.params(), k);
      EXPECT_TRUE(exact_ode_residual(V, tdpt::eigenfunction(s, k), E).is_zero()) << k;
      EXPECT_FALSE(exact_ode_residual(V, tdpt::eigenfunction(s, k), E + 1).is_zero()) << k;
    }
  }
}

TEST(TdptEigen, CrumQuotientAgrees) {
  for (const ExtensionSpec& s : {ExtensionSpec{0, 1, 1, 1}, ExtensionSpec{1, 2, 1, -1}, ExtensionSpec{2, 1, 1, 3}})
    for (int k = 0; k <= 4; ++k) EXPECT_TRUE(equivalent(tdpt::eigenfunction(s, k), tdpt::eigenfunction_crum(s, k))) << k;
}

TEST(TdptEigen, VanishAtBothEndpoints) {
  const ExtensionSpec s{0, 1, 1, 1};
  for (int k = 0; k <= 4; ++k) {
    const auto f = tdpt::eigenfunction(s, k);
    const double a3 = std::fabs(static_cast<double>(f.eval_x(1e-3))), a4 = std::fabs(static_cast<double>(f.eval_x(1e-4)));
    const double b3 = std::fabs(static_cast<double>(f.eval_x(std::numbers::pi / 2 - 1e-3)));
    const double b4 = std::fabs(static_cast<double>(f.eval_x(std::numbers::pi / 2 - 1e-4)));
    // x^{3/2} at both ends: a tenfold step in x shrinks psi by 10^{-3/2}
    EXPECT_NEAR(a4 / a3, std::pow(10.0, -1.5), 1e-3);
    EXPECT_NEAR(b4 / b3, std::pow(10.0, -1.5), 1e-3);
  }
}

TEST(TdptOrthogonality, GramMatrices) {
  for (const ExtensionSpec& s : {ExtensionSpec{0, 1, 1, 1}, ExtensionSpec{1, 2, 1, -2}}) {
    const auto fam = tdpt::exceptional_family(s, 6);
    std::vector<std::function<double(double)>> fs;
    for (const auto& [k, p] : fam.polys) fs.push_back(as_function(p));
    const auto g = gram_matrix(fs, as_function(fam.measure), {-1.0, 1.0});
    EXPECT_TRUE(g.diagonal_positive());
    EXPECT_LT(g.max_relative_off_diagonal(), 1e-10);
  }
}

TEST(TdptShape, IdentityHoldsOnGrid) {
  for (int n = 1; n <= 3; ++n)
    for (int N = 1; N <= 3; ++N)
      for (int M = 1; M <= 3; ++M)
        for (const Rational& l : {Rational(-1), make_rational(7, 3), Rational(0)})
          EXPECT_TRUE(tdpt::shape_invariance_check(n, N, M, l).passed()) << n << N << M;
}

TEST(TdptShape, FirstLevelWitness) {
  // A(z) = B(z) = 1/2 z (1 - z^2)^2 with C = 1
  const auto r = tdpt::shape_invariance_check(1, 1, 1, 2);
  EXPECT_EQ(r.witness["C"], "1");
  EXPECT_EQ(r.witness["lambda1_prime"], "2");
  const Poly A = tdpt::q_poly(1, 1, 1) - tdpt::q_poly(0, 2, 2);
  EXPECT_EQ(A, Poly::x() * pow(Poly::from_ints({1, 0, -1}), 2) * make_rational(1, 2));
}

TEST(TdptShape, SecondLevelConstants) {
  const auto r = tdpt::shape_invariance_check(2, 1, 1, 6);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.witness["C"], "5/8");
  EXPECT_EQ(r.witness["lambda1_prime"], "48/5");
}

TEST(TdptShape, WrongConstantFails) {
  for (int n = 1; n <= 3; ++n) {
    const Rational C = make_rational(1 + 1 + n + 1, 4 * n);
    const auto r = tdpt::shape_invariance_check(n, 1, 1, 1, C + 1);
    EXPECT_FALSE(r.passed());
    EXPECT_FALSE(poly_from_json(r.witness["A_minus_B"]).is_zero());
  }
}

TEST(TdptShape, PartnerPotentialIdentity) {
  for (const ExtensionSpec& s : {ExtensionSpec{1, 1, 1, -1}, ExtensionSpec{1, 2, 1, 3}, ExtensionSpec{2, 1, 1, -2}})
    EXPECT_TRUE(tdpt::shape_invariance_partner_check(s).passed()) << s.to_json().dump();
}

TEST(TdptSpectrum, StrictIsospectrality) {
  for (const ExtensionSpec& s : {ExtensionSpec{0, 1, 1, 1}, ExtensionSpec{1, 1, 1, -1}}) {
    const auto r = tdpt::isospectrality_witness(s, 3);
    EXPECT_TRUE(r.passed()) << r.witness.dump(2);
  }
}

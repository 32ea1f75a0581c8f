#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cdbt/chains.hpp"
#include "cdbt/isotonic.hpp"
#include "cdbt/tdpt.hpp"

using namespace cdbt;
using namespace cdbt::chains;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

std::vector<double> tdpt_points(int count, double margin = 0.03) {
  std::vector<double> xs;
  for (int i = 0; i < count; ++i) xs.push_back(margin + (kPi / 2 - 2 * margin) * (i + 0.5) / count);
  return xs;
}

PotentialFn tdpt_base(int N, int M) { return potential_fn(classical::base_potential(classical::TdptParams{N, M})); }

}  // namespace

TEST(ChainsDbt, TdptGroundSeedRaisesParameters) {
  for (auto [N, M] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{1, 3}}) {
    const classical::TdptParams p{N, M};
    const auto r = dbt_apply(tdpt_seed(p, 0), tdpt_base(N, M), tdpt_seed(p, 1));
    const PotentialFn up = tdpt_base(N + 1, M + 1);
    const double E1 = classical::energy(p, 1).get_d();
    for (double x : tdpt_points(10)) EXPECT_LT(rel(r.potential(x), up(x) + E1), 1e-10) << x;
  }
}

TEST(ChainsDbt, IsotonicGroundSeedRaisesParameter) {
  const NumericContext ctx{2.0};
  for (int N = 1; N <= 3; ++N) {
    const classical::IsotonicParams p{N};
    const PotentialFn V = potential_fn(classical::base_potential(p), ctx);
    const PotentialFn up = potential_fn(classical::base_potential(classical::IsotonicParams{N + 1}), ctx);
    const auto r = dbt_apply(isotonic_seed(p, 0, ctx), V, isotonic_seed(p, 1, ctx));
    for (int i = 1; i <= 10; ++i) {
      const double x = 0.3 * i;
      EXPECT_LT(rel(r.potential(x), up(x) + 2 * ctx.omega), 1e-10) << x;
    }
  }
}

TEST(ChainsDbt, OperatorAndWronskianFormsAgree) {
  const classical::TdptParams p{1, 2};
  const auto r = dbt_apply(tdpt_seed(p, 0), tdpt_base(1, 2), tdpt_seed(p, 3));
  for (double x : tdpt_points(25)) EXPECT_LT(rel(r.eigenfunction(x), r.eigenfunction_wronskian(x)), 1e-10);
}

TEST(ChainsDbt, SecondStepWithReciprocalSeedRestoresPotential) {
  const classical::TdptParams p{1, 1};
  const SeedFunction s0 = tdpt_seed(p, 0);
  const PotentialFn V = tdpt_base(1, 1);
  const auto once = dbt_apply(s0, V, tdpt_seed(p, 1));
  SeedFunction dummy = tdpt_seed(p, 2);
  const auto back = dbt_apply(reciprocal_seed(s0), once.potential, dummy);
  for (double x : tdpt_points(50)) EXPECT_LT(rel(back.potential(x), V(x)), 1e-9) << x;
}

TEST(ChainsDbt, TransformedStateKeepsItsEnergy) {
  const classical::TdptParams p{1, 1};
  const auto r = dbt_apply(tdpt_seed(p, 0), tdpt_base(1, 1), tdpt_seed(p, 2));
  const double E = classical::energy(p, 2).get_d(), h = 1e-3;
  for (double x : tdpt_points(10, 0.1)) {
    const auto& f = r.eigenfunction;
    const double d2 = (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
    const double Vx = r.potential(x), fx = f(x);
    const double scale = std::max({std::fabs(Vx * fx), std::fabs(E * fx), 1e-3});
    EXPECT_LT(std::fabs(-d2 + (Vx - E) * fx) / scale, 1e-6) << x;
  }
}

TEST(ChainsDbt, NodalSeedIsRejected) {
  const classical::TdptParams p{1, 1};
  EXPECT_THROW(dbt_apply(tdpt_seed(p, 1), tdpt_base(1, 1), tdpt_seed(p, 0)), ChainIrregular);
  EXPECT_THROW(dbt_apply(tdpt_seed(p, 0), tdpt_base(1, 1), tdpt_seed(p, 0)), std::invalid_argument);
}

TEST(ChainsConfluent, SeedMatchesExactTdpt) {
  const tdpt::ExtensionSpec s{0, 1, 1, 1};
  const auto exact = tdpt::confluent_seed(s);
  const SeedFunction num = confluent_seed(tdpt_seed(s.params(), 0), 1.0, kPi / 2);
  for (double x : tdpt_points(10)) EXPECT_LT(rel(num(x), static_cast<double>(exact.eval_x(x))), 1e-10) << x;
}

TEST(ChainsConfluent, SeedMatchesIsotonicClosedForm) {
  const NumericContext ctx{2.0};
  const double s2w = std::sqrt(2 * ctx.omega);
  const double lambda1 = -classical::isotonic_norm2(0, 1).get_d() / s2w;
  const SeedFunction num = confluent_seed(isotonic_seed({1}, 0, ctx), lambda1, 0.0);
  for (int i = 1; i <= 10; ++i) {
    const double x = 0.25 * i, z = ctx.omega * x * x / 2;
    const double oracle = -(1.0 / s2w) * std::exp(-z / 2) * std::pow(z, -0.75) * (1 + z);
    EXPECT_LT(std::fabs(num(x) - oracle) / std::fabs(oracle), 1e-10) << x;
  }
}

TEST(ChainsConfluent, LargeLambdaLimit) {
  const SeedFunction psi = tdpt_seed({2, 1}, 0);
  const double lambda1 = 1e8;
  const SeedFunction Psi = confluent_seed(psi, lambda1, kPi / 2);
  for (double x : tdpt_points(10)) EXPECT_LT(std::fabs(Psi(x) / lambda1 * psi(x) - 1.0), 1e-7) << x;
}

TEST(ChainsConfluent, TwoStepMatchesExactTdpt) {
  for (const tdpt::ExtensionSpec& s : {tdpt::ExtensionSpec{0, 1, 1, 1}, tdpt::ExtensionSpec{1, 2, 1, -1}}) {
    const auto exact = tdpt::extended_potential(s);
    const auto c = confluent_two_step(tdpt_base(s.N, s.M), tdpt_seed(s.params(), s.n), s.lambda1.get_d(), kPi / 2);
    for (double x : tdpt_points(20, 0.01)) EXPECT_LT(rel(c.potential(x), exact(x)), 1e-9) << x;
    for (int k = 0; k <= 3; ++k) {
      if (k == s.n) continue;
      const auto psi_k = tdpt::eigenfunction_crum(s, k);
      const SeedFunction target = tdpt_seed(s.params(), k);
      for (double x : tdpt_points(8))
        EXPECT_LT(std::fabs(c.eigenfunction(target, x) - static_cast<double>(psi_k.eval_x(x))), 1e-9) << k << " " << x;
    }
  }
}

TEST(ChainsConfluent, TwoStepMatchesExactIsotonic) {
  const isotonic::ExtensionSpec s{1, 1, 2};
  const NumericContext ctx = s.context();
  const auto exact = isotonic::extended_potential(s);
  const double lambda1 = s.lambda1_coefficient().get_d() / std::sqrt(2 * ctx.omega);
  const auto c = confluent_two_step(potential_fn(classical::base_potential(s.params()), ctx),
                                    isotonic_seed(s.params(), 1, ctx), lambda1, 0.0);
  for (int i = 1; i <= 20; ++i) {
    const double x = 0.15 * i;
    EXPECT_LT(rel(c.potential(x), exact(x, ctx)), 1e-9) << x;
  }
}

TEST(ChainsConfluent, IrregularLambdaLocatesTheZero) {
  const tdpt::ExtensionSpec s{0, 1, 1, make_rational(1, 3)};
  const auto roots = refine(tdpt::denominator(s), tdpt::denominator_roots(s), make_rational(1, 1000000000));
  ASSERT_EQ(roots.count(), 1u);
  const double x_root = std::acos(roots.intervals[0].hi.get_d()) / 2;
  try {
    confluent_two_step(tdpt_base(1, 1), tdpt_seed(s.params(), 0), 1.0 / 3, kPi / 2);
    FAIL() << "irregular lambda1 accepted";
  } catch (const ChainIrregular& e) {
    EXPECT_NEAR(e.where, x_root, 1e-6);
  }
}

TEST(ChainsConfluent, SeedScalingInvariance) {
  const SeedFunction psi = tdpt_seed({1, 2}, 1);
  const double c = 3.5;
  auto j = psi.jet;
  const SeedFunction scaled{[j, c](double x) {
                              const Jet v = j(x);
                              return Jet{c * v.v, c * v.d1, c * v.d2};
                            },
                            psi.energy, psi.x_lo, psi.x_hi};
  const auto a = confluent_two_step(tdpt_base(1, 2), psi, -0.5, kPi / 2);
  const auto b = confluent_two_step(tdpt_base(1, 2), scaled, -0.5 * c * c, kPi / 2);
  for (double x : tdpt_points(15)) EXPECT_LT(rel(a.potential(x), b.potential(x)), 1e-12) << x;
  // exactly: lambda1 + Q and c^2 (lambda1 + Q) have the same second log-derivative
  const tdpt::ExtensionSpec s{1, 1, 2, make_rational(-1, 2)};
  const GaugedFn<TdptGauge> d{TdptGauge::trivial(), RationalFn(tdpt::denominator(s))};
  const GaugedFn<TdptGauge> dc{TdptGauge::trivial(), RationalFn(tdpt::denominator(s) * make_rational(49, 4))};
  EXPECT_EQ(in_energy_units(log_second_derivative(d)), in_energy_units(log_second_derivative(dc)));
}

TEST(ChainsMatveev, TdptGroundSeed) {
  const classical::TdptParams p{1, 1};
  const std::vector<double> pts{0.15, 0.25, 0.35, 0.65, 0.75, 0.9, 1.05, 1.2, 1.35, 1.45};
  const auto r = matveev_cross_check(tdpt_base(1, 1), tdpt_seed(p, 0), 0.5, pts);
  EXPECT_TRUE(r.passed()) << r.witness.dump(2);
}

TEST(ChainsMatveev, TdptFirstExcitedSeed) {
  const classical::TdptParams p{2, 1};
  // psi_1 has its node at z = -1/5, x ~ 0.886
  const std::vector<double> pts{0.15, 0.25, 0.35, 0.65, 0.75, 1.05, 1.15, 1.25, 1.35, 1.45};
  const auto r = matveev_cross_check(tdpt_base(2, 1), tdpt_seed(p, 1), 0.5, pts);
  EXPECT_TRUE(r.passed()) << r.witness.dump(2);
}

TEST(ChainsMatveev, ComparisonAtSeedPointIsRejected) {
  const auto r = matveev_cross_check(tdpt_base(1, 1), tdpt_seed({1, 1}, 0), 0.5, {0.5});
  EXPECT_FALSE(r.passed());
}

TEST(ChainsHyper, SingleStepIsPlainDbt) {
  const classical::TdptParams p{1, 1};
  const auto xs = tdpt_points(12);
  const auto chain = hyperconfluent_chain(tdpt_base(1, 1), tdpt_seed(p, 0), {}, kPi / 4, xs);
  const auto r = dbt_apply(tdpt_seed(p, 0), tdpt_base(1, 1), tdpt_seed(p, 1));
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_LT(rel(chain[i].potential, r.potential(xs[i])), 1e-12);
}

TEST(ChainsHyper, TwoStepsReduceToConfluent) {
  const classical::TdptParams p{1, 1};
  const auto xs = tdpt_points(20);
  const double x0 = 1.0;
  const auto chain = hyperconfluent_chain(tdpt_base(1, 1), tdpt_seed(p, 0), {1.0}, x0, xs);
  const auto c = confluent_two_step(tdpt_base(1, 1), tdpt_seed(p, 0), 1.0, x0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_LT(rel(chain[i].potential, c.potential(xs[i])), 1e-9) << xs[i];
    EXPECT_LT(rel(chain[i].potential_grouped, chain[i].potential), 1e-9) << xs[i];
  }
}

TEST(ChainsHyper, ThreeStepsRegularSide) {
  const classical::TdptParams p{1, 1};
  const double x0 = kPi / 4;
  std::vector<double> xs;
  for (int i = 1; i <= 200; ++i) xs.push_back(x0 + (kPi / 2 - 0.02 - x0) * i / 200);
  const auto chain = hyperconfluent_chain(tdpt_base(1, 1), tdpt_seed(p, 0), {1.0, 1.0}, x0, xs);
  for (const auto& s : chain) {
    ASSERT_TRUE(std::isfinite(s.potential)) << s.x;
    for (double I : s.I) EXPECT_GT(I, 0.0);
    EXPECT_LT(rel(s.potential_grouped, s.potential), 1e-8) << s.x;
  }
}

TEST(ChainsHyper, ThreeStepsSecondIntegralVanishesBelowSeedPoint) {
  // int_{x0}^{x} (Psi^(1))^2 diverges to -inf as x -> 0, so lambda_2 + that integral changes sign.
  const classical::TdptParams p{1, 1};
  std::vector<double> xs;
  for (int i = 1; i <= 200; ++i) xs.push_back(0.02 + (kPi / 4 - 0.02) * i / 200.0);
  EXPECT_THROW(hyperconfluent_chain(tdpt_base(1, 1), tdpt_seed(p, 0), {1.0, 1.0}, kPi / 4, xs), ChainIrregular);
}

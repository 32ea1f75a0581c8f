// Builds the n = 0, N = M = 1 TDPT extension with lambda1 = 1, prints its
// exceptional polynomials, confirms one Schroedinger identity exactly and
// compares the numeric two-step chain against the closed form.

#include <cstdio>
#include <numbers>

#include "cdbt/cdbt.hpp"

using namespace cdbt;

int main() {
  const tdpt::ExtensionSpec s{0, 1, 1, 1};
  std::printf("lambda1 + Q = %s + %s, regular: %s\n", to_string(s.lambda1).c_str(),
              to_json(tdpt::q_poly(s.n, s.N, s.M)).dump().c_str(), tdpt::is_regular(s) ? "yes" : "no");

  for (const auto& [k, p] : tdpt::exceptional_family(s, 3).polys)
    std::printf("P~_%d = %s\n", k, to_json(p).dump().c_str());

  const auto V = tdpt::extended_potential(s);
  const int k = 2;
  const Rational E = classical::energy(s.params(), k);
  const bool exact = exact_ode_residual(V, tdpt::eigenfunction(s, k), E).is_zero();
  std::printf("psi~_%d solves the extended equation at E = %s exactly: %s\n", k, to_string(E).c_str(),
              exact ? "yes" : "no");

  const auto chain = chains::confluent_two_step(chains::potential_fn(classical::base_potential(s.params())),
                                                chains::tdpt_seed(s.params(), s.n), 1.0, std::numbers::pi / 2);
  std::printf("%8s %22s %22s\n", "x", "V~ exact", "V~ two-step");
  for (double x : {0.2, 0.5, 0.8, 1.1, 1.4}) std::printf("%8.3f %22.15f %22.15f\n", x, V(x), chain.potential(x));
  return exact ? 0 : 1;
}

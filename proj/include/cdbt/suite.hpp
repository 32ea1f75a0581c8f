#pragma once

// Verification suite: the ordered manifest of named checks, the list of
// module invariants it must cover (checked at compile time), and a runner.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cdbt/report.hpp"

namespace cdbt::suite {

struct ManifestEntry {
  std::string_view check_id;
  std::string_view module;
  std::string_view anchor;  ///< the identity or property being checked
};

inline constexpr std::array<std::string_view, 7> kModules = {"exactalg", "classical", "tdpt", "isotonic",
                                                              "chains",   "verify",    "cli"};

// clang-format off
inline constexpr std::array kManifest = {
    ManifestEntry{"exactalg.antiderivative-round-trip", "exactalg", "d/dz antiderivative(p, a) = p"},
    ManifestEntry{"exactalg.sturm-dense", "exactalg", "Sturm root count = sign changes on a dense rational grid, degree <= 12"},
    ManifestEntry{"exactalg.ratfn-canonical", "exactalg", "gcd(num, den) = 1 after every RationalFn operation"},
    ManifestEntry{"exactalg.wronskian-swap", "exactalg", "W(f, g) = -W(g, f)"},
    ManifestEntry{"classical.jacobi-ode", "classical", "(1-z^2) P'' + ((M-N) - (N+M+2) z) P' + n(N+M+n+1) P = 0"},
    ManifestEntry{"classical.laguerre-ode", "classical", "z L'' + (N+1-z) L' + n L = 0"},
    ManifestEntry{"classical.derivative-identities", "classical", "P_n' = (n+N+M+1)/2 P_{n-1}^{(N+1,M+1)}, L_n' = -L_{n-1}^{N+1}"},
    ManifestEntry{"classical.orthogonality", "classical", "Jacobi and Laguerre Gram matrices diagonal to 1e-12"},
    ManifestEntry{"tdpt.q-closed-forms", "tdpt", "Q_0^{(1,1)}, Q_0^{(2,1)}, Q_0^{(1,2)} closed forms"},
    ManifestEntry{"tdpt.q-monotone", "tdpt", "Q' = -1/2 (1-z)^N (1+z)^M P_n^2 <= 0 on (-1, 1)"},
    ManifestEntry{"tdpt.q-endpoints", "tdpt", "Q(-1) = 0, Q(1) = -2^{N+M} (n+N)!(n+M)! / ((2n+N+M+1) n! (n+N+M)!)"},
    ManifestEntry{"tdpt.regularity", "tdpt", "lambda1 <= 0 or lambda1 > -Q(1) iff lambda1 + Q rootless (Sturm)"},
    ManifestEntry{"tdpt.window", "tdpt", "is_regular(n,N,M,lambda1) iff is_regular(n-1,N+1,M+1,lambda1')"},
    ManifestEntry{"tdpt.log-route", "tdpt", "V~ = V - 2 [log(lambda1 + Q)]''"},
    ManifestEntry{"tdpt.ode", "tdpt", "psi~_k'' + (E_k - V~) psi~_k = 0 exactly"},
    ManifestEntry{"tdpt.crum", "tdpt", "psi~_k = (E_n - E_k) psi_k - W(psi_n, psi_k) / Psi"},
    ManifestEntry{"tdpt.orthogonality", "tdpt", "P~_k orthogonal under (1-z)^N (1+z)^M / (lambda1 + Q)^2"},
    ManifestEntry{"tdpt.shape", "tdpt", "lambda1 + Q_n - psi_n psi_{n-1}^+ / (4n) = C (lambda1' + Q_{n-1}^{(N+1,M+1)})"},
    ManifestEntry{"tdpt.shape-partner", "tdpt", "V~ - 2 (log psi~_0)'' = V~(n-1, N+1, M+1, lambda1') + E_1"},
    ManifestEntry{"tdpt.spectrum", "tdpt", "Dirichlet spectrum of V~ = {4k(N+M+1+k)}"},
    ManifestEntry{"isotonic.q-closed-forms", "isotonic", "Q_0^N = -N! sum z^l/l!, Q_1^1 = -z^3 + z^2 - 2z - 2"},
    ManifestEntry{"isotonic.q-derivative", "isotonic", "(e^{-z} Q)' = e^{-z} z^N L^2; derivative sum = back-substitution"},
    ManifestEntry{"isotonic.q-endpoint", "isotonic", "Q(0) = -(n+N)!/n!"},
    ManifestEntry{"isotonic.rootless", "isotonic", "Q_n^N has no root on [0, inf)"},
    ManifestEntry{"isotonic.log-route", "isotonic", "V^ = V + 2 omega - 2 (log Q)''"},
    ManifestEntry{"isotonic.ode", "isotonic", "psi~_k'' + (E_k - V^) psi~_k = 0 exactly, k != n"},
    ManifestEntry{"isotonic.crum", "isotonic", "psi~_k = (E_n - E_k) psi_k - W(psi_n, psi_k) / Psi"},
    ManifestEntry{"isotonic.orthogonality", "isotonic", "L~_k orthogonal under z^N e^{-z} / Q^2"},
    ManifestEntry{"isotonic.origin-decay", "isotonic", "psi~_k ~ z^{(N+1/2)/2} -> 0 at the origin"},
    ManifestEntry{"isotonic.deleted-level", "isotonic", "1/Psi grows like e^{z/2}; kept levels decay"},
    ManifestEntry{"isotonic.n0-type2", "isotonic", "Q_0^N = -N! (-1)^N L_N^{-N-1}; V^(0) = V_II(N+1) + 2 omega"},
    ManifestEntry{"isotonic.shape", "isotonic", "Q_n^N - Q_{n-1}^{N+1}/n - z^{N+1} L_n^N L_{n-1}^{N+1}/n = 0"},
    ManifestEntry{"isotonic.shape-partner", "isotonic", "V^ - 2 (log psi~_0)'' = V^(n-1, N+1) + E_1"},
    ManifestEntry{"isotonic.n0-negative", "isotonic", "L_1^N Q_0^N - z^{N+1} is not a multiple of Q_0^{N+1}"},
    ManifestEntry{"isotonic.spectrum", "isotonic", "Dirichlet spectrum of V^ = {2k omega, k != n}"},
    ManifestEntry{"chains.dbt-shape", "chains", "V + 2 w_0' = V(N+1, M+1) + E_1; isotonic V(N+1) + 2 omega"},
    ManifestEntry{"chains.degenerate", "chains", "A(-w) after A(w) restores V"},
    ManifestEntry{"chains.factorization-energy", "chains", "transformed state solves the new equation at the same E"},
    ManifestEntry{"chains.seed-scaling", "chains", "(psi, lambda1) -> (c psi, c^2 lambda1) leaves V~ unchanged"},
    ManifestEntry{"chains.two-step", "chains", "V - 2 (psi^2 / (lambda1 + int psi^2))' equals the exact extensions"},
    ManifestEntry{"chains.matveev", "chains", "V - 2 (log W(psi, d psi/dE))'' equals the lambda1 = 0 confluent form"},
    ManifestEntry{"chains.hyperconfluent", "chains", "V - 2 (log prod Psi^(k))''; m = 2 reduction, m = 3 regrouping"},
    ManifestEntry{"verify.residual-linearity", "verify", "residual(p + q) = residual(p) + residual(q)"},
    ManifestEntry{"verify.spectrum-convergence", "verify", "second-order eigenvalue convergence, ratio in [3.6, 4.4]"},
    ManifestEntry{"verify.gram-diagonal", "verify", "Gram diagonals strictly positive"},
    ManifestEntry{"verify.gauge-operator", "verify", "d^2/dx^2 = 4(1-z^2) d^2/dz^2 - 4z d/dz; = 2 omega z d^2/dz^2 + omega d/dz"},
    ManifestEntry{"cli.determinism", "cli", "two runs give identical reports up to elapsed_ms"},
    ManifestEntry{"cli.manifest-complete", "cli", "every module invariant has a manifest entry"},
};

/// Invariants and properties each module promises; every one must be a manifest check id.
inline constexpr std::array kInvariants = {
    std::string_view{"exactalg.antiderivative-round-trip"}, std::string_view{"exactalg.sturm-dense"},
    std::string_view{"exactalg.ratfn-canonical"}, std::string_view{"exactalg.wronskian-swap"},
    std::string_view{"classical.jacobi-ode"}, std::string_view{"classical.laguerre-ode"},
    std::string_view{"classical.derivative-identities"}, std::string_view{"classical.orthogonality"},
    std::string_view{"tdpt.q-monotone"}, std::string_view{"tdpt.q-endpoints"}, std::string_view{"tdpt.orthogonality"},
    std::string_view{"tdpt.shape"}, std::string_view{"tdpt.regularity"}, std::string_view{"tdpt.window"},
    std::string_view{"isotonic.q-derivative"}, std::string_view{"isotonic.q-endpoint"},
    std::string_view{"isotonic.rootless"}, std::string_view{"isotonic.orthogonality"},
    std::string_view{"isotonic.ode"}, std::string_view{"isotonic.origin-decay"},
    std::string_view{"chains.degenerate"}, std::string_view{"chains.factorization-energy"},
    std::string_view{"chains.seed-scaling"},
    std::string_view{"verify.residual-linearity"}, std::string_view{"verify.spectrum-convergence"},
    std::string_view{"verify.gram-diagonal"},
    std::string_view{"cli.determinism"}, std::string_view{"cli.manifest-complete"},
};
// clang-format on

constexpr bool in_manifest(std::string_view id) {
  for (const auto& e : kManifest)
    if (e.check_id == id) return true;
  return false;
}

constexpr bool manifest_complete() {
  for (auto inv : kInvariants)
    if (!in_manifest(inv)) return false;
  return true;
}

constexpr bool manifest_ids_unique() {
  for (std::size_t i = 0; i < kManifest.size(); ++i)
    for (std::size_t j = i + 1; j < kManifest.size(); ++j)
      if (kManifest[i].check_id == kManifest[j].check_id) return false;
  return true;
}

constexpr bool manifest_modules_known() {
  for (const auto& e : kManifest) {
    bool found = false;
    for (auto m : kModules) found = found || e.module == m;
    if (!found || !e.check_id.starts_with(e.module)) return false;
  }
  return true;
}

static_assert(manifest_complete(), "a module invariant has no manifest entry");
static_assert(manifest_ids_unique(), "duplicate check id in the manifest");
static_assert(manifest_modules_known(), "manifest entry with an unknown module prefix");

struct UnknownSelector : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Runs one check; `params` overrides its defaults (an empty object keeps them).
VerifyReport run_check(std::string_view check_id, const json& params = json::object());

/// Check ids selected by "all", a module name or a single check id, in manifest order.
std::vector<std::string_view> select(std::string_view selector);

/// Thread cap from CONFLUENT_DBT_THREADS (default: hardware concurrency, at least 1).
unsigned thread_cap();

/// Runs `ids` (in the given order) with at most `threads` workers; params map check ids to objects.
std::vector<VerifyReport> run_checks(const std::vector<std::string_view>& ids, const json& params_by_check = json::object(),
                                     std::optional<unsigned> threads = std::nullopt);

/// `params_file` content maps check ids to parameter objects.
std::vector<VerifyReport> run_suite(std::string_view selector, const json& params_by_check = json::object(),
                                    std::optional<unsigned> threads = std::nullopt);

/// {"schema": 1, "selector", "passed", "failed", "reports": [...]}
json suite_json(std::string_view selector, const std::vector<VerifyReport>& reports, bool stable = false);

}  // namespace cdbt::suite

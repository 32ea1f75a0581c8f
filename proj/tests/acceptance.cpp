// Acceptance run: one PASS/FAIL line per criterion, each with a pinned
// tolerance and wall-clock limit. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cdbt/isotonic.hpp"
#include "cdbt/suite.hpp"
#include "cdbt/tdpt.hpp"

using namespace cdbt;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note += (note.empty() ? "" : "; ") + what;
    }
  }

  void run(std::string_view id, const json& params = json::object()) {
    const VerifyReport r = suite::run_check(id, params);
    require(r.passed(), std::string(id) + " " + std::string(to_string(r.status)));
  }
};

struct Criterion {
  int number;
  const char* title;
  double limit_s;
  std::function<void(Outcome&)> body;
};

/// Eigenvalues reported by a spectrum witness, in level order.
std::vector<double> witness_levels(const VerifyReport& r) {
  std::vector<double> out;
  for (const auto& l : r.witness.at("levels")) out.push_back(l.at("eigenvalue").get<double>());
  return out;
}

void compare_levels(Outcome& o, const char* label, const std::vector<double>& got, const std::vector<double>& want,
                    double tol) {
  o.require(got.size() >= want.size(), std::string(label) + ": too few levels");
  for (std::size_t k = 0; k < want.size() && k < got.size(); ++k) {
    const double err = std::fabs(got[k] - want[k]) / std::max(1.0, std::fabs(want[k]));
    o.require(err <= tol, std::string(label) + ": level " + std::to_string(k) + " = " + std::to_string(got[k]) +
                              ", want " + std::to_string(want[k]));
  }
}

const std::vector<Criterion> kCriteria = {
    {1, "exact Q closed forms", 1.0,
     [](Outcome& o) {
       o.run("tdpt.q-closed-forms");
       o.run("isotonic.q-closed-forms");
     }},
    {2, "endpoint values, n <= 5, N, M <= 4", 5.0,
     [](Outcome& o) {
       o.run("tdpt.q-endpoints");
       o.run("isotonic.q-endpoint");
     }},
    {3, "exceptional polynomial golden values, root near sqrt 2", 1.0,
     [](Outcome& o) {
       const Poly l0 = isotonic::exceptional_polynomial({1, 1}, 0);
       const Poly l2 = isotonic::exceptional_polynomial({1, 1}, 2);
       o.require(l0 == Poly::from_ints({-2, -2, -1}), "L~_0 != -(z^2 + 2z + 2)");
       o.require(l2 == Poly::from_ints({12, 0, -4, 0, -1}) * make_rational(1, 2), "L~_2 != -(z^4 + 4z^2 - 12)/2");
       const auto iso = refine(l2, sturm_roots(l2, RealInterval::positive_half_line()), make_rational(1, 1000000));
       o.require(iso.count() == 1, "L~_2 positive root count != 1");
       if (iso.count() == 1) {
         const auto& I = iso.intervals[0];
         o.require(I.lo * I.lo <= 2 && I.hi * I.hi >= 2, "isolating interval misses sqrt 2");
       }
     }},
    {4, "Schroedinger identities, exact residual", 30.0,
     [](Outcome& o) {
       o.run("tdpt.ode");
       o.run("isotonic.ode");
     }},
    {5, "enlarged shape invariance and the n = 0 negative result", 10.0,
     [](Outcome& o) {
       o.run("tdpt.shape");
       o.run("isotonic.shape");
       o.run("isotonic.n0-negative", json{{"Nmax", 4}});
     }},
    {6, "isospectrality, 1e-5 relative after extrapolation", 60.0,
     [](Outcome& o) {
       const auto t = suite::run_check("tdpt.spectrum", json{{"n", 0}, {"N", 1}, {"M", 1}, {"lambda1", "1"}, {"klevels", 3}});
       o.require(t.witness.contains("levels"), "tdpt spectrum: no levels");
       if (t.witness.contains("levels")) compare_levels(o, "tdpt", witness_levels(t), {0, 16, 40, 72}, 1e-5);
       const auto i = suite::run_check("isotonic.spectrum", json{{"n", 1}, {"N", 1}, {"omega", "2"}, {"klevels", 4}});
       o.require(i.witness.contains("levels"), "isotonic spectrum: no levels");
       if (i.witness.contains("levels")) {
         const auto got = witness_levels(i);
         compare_levels(o, "isotonic", got, {0, 8, 12, 16}, 1e-5);
         for (double e : got) o.require(std::fabs(e - 4.0) > 1.0, "isotonic: level 4 present");
       }
     }},
    {7, "Gram off-diagonals below 1e-10 relative", 60.0,
     [](Outcome& o) {
       o.run("tdpt.orthogonality", json{{"n", 0}, {"N", 1}, {"M", 1}, {"lambda1", "1"}, {"kmax", 6}});
       o.run("isotonic.orthogonality", json{{"n", 1}, {"N", 1}, {"kmax", 5}});
     }},
    {8, "regularity window and rootless isotonic Q", 10.0,
     [](Outcome& o) {
       o.require(tdpt::regularity_threshold(0, 1, 1) == make_rational(2, 3), "threshold != 2/3");
       o.run("tdpt.regularity", json{{"n", 0}, {"N", 1}, {"M", 1}, {"samples", 50}});
       o.run("isotonic.rootless");
     }},
    {9, "numeric chains against exact forms (1e-9, Matveev 1e-6)", 120.0,
     [](Outcome& o) {
       o.run("chains.two-step");
       o.run("chains.matveev");
     }},
    {10, "n = 0 isotonic type-II equivalence, N <= 8", 5.0,
     [](Outcome& o) { o.run("isotonic.n0-type2", json{{"Nmax", 8}}); }},
};

}  // namespace

int main() {
  int failures = 0;
  for (const auto& c : kCriteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(elapsed < c.limit_s, "over the time limit");
    failures += !o.ok;
    std::printf("criterion %2d: %s  %-58s %8.3f s / %.0f s%s%s\n", c.number, o.ok ? "PASS" : "FAIL", c.title, elapsed,
                c.limit_s, o.note.empty() ? "" : "  ", o.note.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(kCriteria.size()) - failures, kCriteria.size());
  return failures;
}

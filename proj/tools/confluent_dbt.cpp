// confluent-dbt: build, tabulate and verify two-step confluent rational
// extensions of the trigonometric Darboux-Poschl-Teller and isotonic potentials.
//
// Exit codes: 0 pass, 1 check failure or irregular input, 2 usage error.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cdbt/chains.hpp"
#include "cdbt/isotonic.hpp"
#include "cdbt/suite.hpp"
#include "cdbt/tdpt.hpp"
#include "cdbt/verify.hpp"

using namespace cdbt;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string fmt17(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

/// "a:b:n" -> n points from a to b inclusive.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw UsageError("grid must be a:b:n, got '" + text + "'");
  double a = 0, b = 0;
  long n = 0;
  try {
    std::size_t pa = 0, pb = 0, pn = 0;
    a = std::stod(parts[0], &pa);
    b = std::stod(parts[1], &pb);
    n = std::stol(parts[2], &pn);
    if (pa != parts[0].size() || pb != parts[1].size() || pn != parts[2].size()) throw std::invalid_argument(text);
  } catch (const std::logic_error&) {
    throw UsageError("grid must be a:b:n, got '" + text + "'");
  }
  if (n < 1 || !(a <= b)) throw UsageError("grid needs n >= 1 and a <= b");
  std::vector<double> xs;
  for (long i = 0; i < n; ++i) xs.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  return xs;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError("not a number list: '" + text + "'");
    }
  }
  return out;
}

Rational exact(const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("malformed JSON in " + path + ": " + e.what());
  }
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void write(std::ostream& os, const std::string& format, const json& spec) const {
    if (format == "json") {
      json j{{"schema", 1}, {"spec", spec}, {"columns", columns}, {"rows", rows}};
      os << j.dump(2) << "\n";
      return;
    }
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << fmt17(r[i]);
      os << "\n";
    }
  }
};

void print_json(std::ostream& os, const json& j) { os << j.dump(2) << "\n"; }

int suite_exit(const std::vector<VerifyReport>& reports) {
  for (const auto& r : reports)
    if (!r.passed()) return kExitFail;
  return kExitPass;
}

// Shared parameter block for the family subcommands.
struct FamilyArgs {
  int n = 0;
  int N = 1;
  int M = 1;
  std::string lambda1 = "1";
  std::string omega = "1";
  int kmax = 4;
  std::string x_points;
  std::string format = "csv";
};

tdpt::ExtensionSpec tdpt_spec(const FamilyArgs& a) {
  tdpt::ExtensionSpec s{a.n, a.N, a.M, exact(a.lambda1)};
  s.validate();
  return s;
}

isotonic::ExtensionSpec isotonic_spec(const FamilyArgs& a) {
  isotonic::ExtensionSpec s{a.n, a.N, exact(a.omega)};
  s.validate();
  return s;
}

json polys_json(const std::map<int, Poly>& polys) {
  json out = json::object();
  for (const auto& [k, p] : polys) out[std::to_string(k)] = to_json(p);
  return out;
}

int cmd_classical_dump(const std::string& family, int n, int N, int M, std::ostream& os) {
  json j{{"schema", 1}, {"family", family}, {"n", n}, {"N", N}};
  if (family == "jacobi") {
    j["M"] = M;
    j["poly"] = to_json(classical::jacobi(classical::JacobiParams{n, N, M}));
    j["energy"] = to_string(classical::energy(classical::TdptParams{N, M}, n));
  } else {
    j["poly"] = to_json(classical::laguerre(classical::LaguerreParams{n, N}));
    j["energy_in_omega"] = to_string(Rational(2 * n));
  }
  print_json(os, j);
  return kExitPass;
}

int cmd_tdpt_build(const FamilyArgs& a, std::ostream& os) {
  const auto s = tdpt_spec(a);
  const auto q = tdpt::q_tdpt(s.n, s.N, s.M);
  json j{{"schema", 1}, {"spec", s.to_json()}};
  j["Q"] = to_json(q.poly);
  j["Q_at_1"] = to_string(q.value_at_1);
  j["threshold"] = to_string(tdpt::regularity_threshold(s.n, s.N, s.M));
  j["regular"] = tdpt::is_regular(s);
  j["denominator_roots"] = to_json(tdpt::denominator_roots(s));
  if (!tdpt::is_regular(s)) {
    print_json(os, j);
    std::cerr << "irregular: lambda1 + Q vanishes inside the domain\n";
    return kExitFail;
  }
  j["correction"] = to_json(tdpt::correction(s));
  j["exceptional"] = polys_json(tdpt::exceptional_family(s, a.kmax).polys);
  j["measure"] = to_json(tdpt::measure(s));
  print_json(os, j);
  return kExitPass;
}

int cmd_isotonic_build(const FamilyArgs& a, std::ostream& os) {
  const auto s = isotonic_spec(a);
  const auto q = isotonic::q_isotonic(s.n, s.N);
  json j{{"schema", 1}, {"spec", s.to_json()}};
  j["Q"] = to_json(q.poly);
  j["Q_at_0"] = to_string(q.value_at_0);
  j["lambda1_coefficient"] = to_string(s.lambda1_coefficient());
  j["Q_roots_positive_axis"] = to_json(isotonic::q_roots(s.n, s.N));
  j["correction"] = to_json(isotonic::correction(s));
  j["exceptional"] = polys_json(isotonic::exceptional_family(s, a.kmax).polys);
  j["deleted_level"] = s.n;
  j["measure"] = to_json(isotonic::measure(s));
  print_json(os, j);
  return kExitPass;
}

Table tdpt_table(const tdpt::ExtensionSpec& s, const std::vector<double>& xs, int kmax, bool potential, bool states) {
  const auto base = classical::base_potential(s.params());
  const auto V = tdpt::extended_potential(s);
  std::vector<GaugedFn<TdptGauge>> psi;
  Table t{{"x"}, {}};
  if (potential) t.columns.insert(t.columns.end(), {"V", "V_ext"});
  if (states)
    for (int k = 0; k <= kmax; ++k) {
      psi.push_back(tdpt::eigenfunction(s, k));
      t.columns.push_back("psi_" + std::to_string(k));
    }
  for (double x : xs) {
    if (!(x > 0 && x < std::numbers::pi / 2)) throw UsageError("tdpt x-points must lie in (0, pi/2)");
    std::vector<double> row{x};
    if (potential) row.insert(row.end(), {base(x), V(x)});
    for (const auto& f : psi) row.push_back(static_cast<double>(f.eval_x(x)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table isotonic_table(const isotonic::ExtensionSpec& s, const std::vector<double>& xs, int kmax, bool potential,
                     bool states) {
  const NumericContext ctx = s.context();
  const auto base = classical::base_potential(s.params());
  const auto V = isotonic::extended_potential(s);
  std::vector<GaugedFn<IsotonicGauge>> psi;
  Table t{{"x"}, {}};
  if (potential) t.columns.insert(t.columns.end(), {"V", "V_ext"});
  if (states)
    for (int k = 0; k <= kmax; ++k) {
      if (k == s.n) continue;
      psi.push_back(isotonic::eigenfunction(s, k));
      t.columns.push_back("psi_" + std::to_string(k));
    }
  for (double x : xs) {
    if (!(x > 0)) throw UsageError("isotonic x-points must be positive");
    std::vector<double> row{x};
    if (potential) row.insert(row.end(), {base(x, ctx), V(x, ctx)});
    for (const auto& f : psi) row.push_back(static_cast<double>(f.eval_x(x, ctx)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Polynomial coefficients as exact p/q plus a 17-digit decimal.
void write_polynomial(std::ostream& os, const Poly& p, const std::string& format, const json& spec) {
  if (format == "json") {
    print_json(os, json{{"schema", 1}, {"spec", spec}, {"poly", to_json(p)}});
    return;
  }
  os << "power,coefficient,decimal\n";
  for (int k = 0; k <= p.degree(); ++k) os << k << "," << to_string(p.coeff(k)) << "," << fmt17(p.coeff(k).get_d()) << "\n";
}

const std::map<std::string, std::vector<std::string_view>> kTdptSuites = {
    {"regularity", {"tdpt.regularity", "tdpt.window"}},
    {"ode", {"tdpt.ode", "tdpt.crum", "tdpt.log-route"}},
    {"ortho", {"tdpt.orthogonality"}},
    {"shape", {"tdpt.shape", "tdpt.shape-partner"}},
    {"spectrum", {"tdpt.spectrum"}},
};

const std::map<std::string, std::vector<std::string_view>> kIsotonicSuites = {
    {"q-crosscheck", {"isotonic.q-closed-forms", "isotonic.q-derivative", "isotonic.q-endpoint", "isotonic.rootless"}},
    {"ode", {"isotonic.ode", "isotonic.crum", "isotonic.log-route", "isotonic.origin-decay"}},
    {"ortho", {"isotonic.orthogonality"}},
    {"shape", {"isotonic.shape", "isotonic.shape-partner"}},
    {"n0-type2", {"isotonic.n0-type2"}},
    {"n0-negative", {"isotonic.n0-negative"}},
    {"spectrum", {"isotonic.spectrum", "isotonic.deleted-level"}},
};

std::vector<std::string_view> suite_ids(const std::map<std::string, std::vector<std::string_view>>& table,
                                        const std::string& module, const std::string& name) {
  if (name.empty()) return suite::select(module);
  return table.at(name);
}

int run_and_print(const std::string& label, const std::vector<std::string_view>& ids, const json& params,
                  bool stable, std::ostream& os) {
  json by_check = json::object();
  if (!params.empty())
    for (auto id : ids) by_check[std::string(id)] = params;
  const auto reports = suite::run_checks(ids, by_check);
  print_json(os, suite::suite_json(label, reports, stable));
  return suite_exit(reports);
}

// ---- chain ----------------------------------------------------------------

struct ChainArgs {
  std::string base = "tdpt";
  int N = 1;
  int M = 1;
  std::string omega = "1";
  int n = 0;
  int m = 2;
  std::string lambdas;
  std::optional<double> x0;
  std::string grid;
  std::string format = "csv";
};

int cmd_chain_run(const ChainArgs& a, std::ostream& os) {
  if (a.m < 1) throw UsageError("--m must be >= 1");
  const auto lambdas = parse_list(a.lambdas);
  if (static_cast<int>(lambdas.size()) != a.m - 1)
    throw UsageError("--lambdas needs m - 1 = " + std::to_string(a.m - 1) + " values");
  const auto xs = parse_grid(a.grid);
  chains::PotentialFn V;
  chains::SeedFunction seed;
  double x0 = 0;
  if (a.base == "tdpt") {
    const classical::TdptParams p{a.N, a.M};
    p.validate();
    V = chains::potential_fn(classical::base_potential(p));
    seed = chains::tdpt_seed(p, a.n);
    x0 = std::numbers::pi / 2;
  } else {
    const classical::IsotonicParams p{a.N};
    p.validate();
    const NumericContext ctx{exact(a.omega).get_d()};
    if (!(ctx.omega > 0)) throw UsageError("--omega must be positive");
    V = chains::potential_fn(classical::base_potential(p), ctx);
    seed = chains::isotonic_seed(p, a.n, ctx);
    x0 = 0;
  }
  if (a.m >= 3) x0 = 0.5 * (xs.front() + xs.back());
  if (a.x0) x0 = *a.x0;
  for (double x : xs)
    if (!(x > seed.x_lo && x < seed.x_hi))
      throw UsageError("grid point " + fmt17(x) + " outside the working domain (" + fmt17(seed.x_lo) + ", " +
                       fmt17(seed.x_hi) + ")");
  Table t{{"x", "V", "V_ext"}, {}};
  if (a.m == 2) {
    const auto c = chains::confluent_two_step(V, seed, lambdas[0], x0);
    for (double x : xs) t.rows.push_back({x, V(x), c.potential(x)});
  } else {
    const auto chain = chains::hyperconfluent_chain(V, seed, lambdas, x0, xs);
    for (const auto& s : chain) t.rows.push_back({s.x, V(s.x), s.potential});
  }
  json spec{{"base", a.base}, {"N", a.N}, {"n", a.n}, {"m", a.m}, {"lambdas", lambdas}, {"x0", x0}};
  if (a.base == "tdpt") spec["M"] = a.M;
  else spec["omega"] = a.omega;
  t.write(os, a.format, spec);
  return kExitPass;
}

// ---- verify spectrum / gram ---------------------------------------------------

int cmd_verify_spectrum(const std::string& path, int levels, std::ostream& os) {
  const json spec = read_json_file(path);
  if (!spec.is_object() || !spec.contains("family")) throw UsageError("potential JSON needs a \"family\" field");
  if (levels < 1) throw UsageError("--levels must be >= 1");
  const std::string family = spec["family"].get<std::string>();
  const int grid_n = spec.value("grid_n", 8000);
  std::function<double(double)> V;
  double a = 0, b = 0;
  if (family == "tdpt") {
    const classical::TdptParams p{spec.value("N", 1), spec.value("M", 1)};
    p.validate();
    if (spec.contains("n") || spec.contains("lambda1")) {
      const tdpt::ExtensionSpec s{spec.value("n", 0), p.N, p.M,
                                  spec.contains("lambda1") ? rational_from_json(spec["lambda1"]) : Rational(1)};
      const auto Vx = tdpt::extended_potential(s);
      V = [Vx](double x) { return Vx(x); };
    } else {
      const auto Vx = classical::base_potential(p);
      V = [Vx](double x) { return Vx(x); };
    }
    const double eps = spec.value("epsilon", 1e-4);
    a = eps;
    b = std::numbers::pi / 2 - eps;
  } else if (family == "isotonic") {
    const classical::IsotonicParams p{spec.value("N", 1)};
    p.validate();
    const NumericContext ctx{spec.contains("omega") ? rational_from_json(spec["omega"]).get_d() : 1.0};
    if (spec.contains("n")) {
      const isotonic::ExtensionSpec s{spec["n"].get<int>(), p.N, spec.contains("omega") ? rational_from_json(spec["omega"]) : Rational(1)};
      const auto Vx = isotonic::extended_potential(s);
      V = [Vx, ctx](double x) { return Vx(x, ctx); };
    } else {
      const auto Vx = classical::base_potential(p);
      V = [Vx, ctx](double x) { return Vx(x, ctx); };
    }
    const isotonic::SpectrumSettings cfg;
    a = spec.value("epsilon", cfg.epsilon_scale * std::sqrt(2.0 / ctx.omega));
    b = spec.value("x_max", std::sqrt(4.0 * (2.0 * (levels + 1) * ctx.omega + cfg.margin) / ctx.omega));
  } else {
    throw UsageError("unknown family '" + family + "' (tdpt or isotonic)");
  }
  const SpectrumResult r = dirichlet_spectrum(V, a, b, levels, grid_n);
  print_json(os, json{{"schema", 1},
                      {"spec", spec},
                      {"eigenvalues", r.eigenvalues},
                      {"coarse", r.coarse},
                      {"fine", r.fine},
                      {"error_estimates", r.error_estimates},
                      {"node_counts", r.node_counts},
                      {"grid", json{{"a", r.grid.a}, {"b", r.grid.b}, {"n_points", r.grid.n_points}}}});
  return kExitPass;
}

int cmd_verify_gram(const std::string& path, std::ostream& os) {
  const json spec = read_json_file(path);
  if (!spec.is_object() || !spec.contains("family")) throw UsageError("family JSON needs a \"family\" field");
  const std::string family = spec["family"].get<std::string>();
  const int kmax = spec.value("kmax", 6);
  std::vector<int> labels;
  std::vector<std::function<double(double)>> fs;
  std::function<double(double)> weight;
  GramDomain dom{-1.0, 1.0};
  if (family == "tdpt") {
    const tdpt::ExtensionSpec s{spec.value("n", 0), spec.value("N", 1), spec.value("M", 1),
                                spec.contains("lambda1") ? rational_from_json(spec["lambda1"]) : Rational(1)};
    const auto fam = tdpt::exceptional_family(s, kmax);
    for (const auto& [k, p] : fam.polys) {
      labels.push_back(k);
      fs.push_back(as_function(p));
    }
    weight = as_function(fam.measure);
  } else if (family == "isotonic") {
    const isotonic::ExtensionSpec s{spec.value("n", 1), spec.value("N", 1)};
    const auto fam = isotonic::exceptional_family(s, kmax);
    for (const auto& [k, p] : fam.polys) {
      labels.push_back(k);
      fs.push_back(as_function(p));
    }
    const auto mu = as_function(fam.measure);
    weight = [mu](double z) { return mu(z) * std::exp(-z); };
    dom = {0.0, INFINITY};
  } else if (family == "jacobi") {
    const int N = spec.value("N", 1), M = spec.value("M", 1);
    for (int k = 0; k <= kmax; ++k) {
      labels.push_back(k);
      fs.push_back(as_function(classical::jacobi(classical::JacobiParams{k, N, M})));
    }
    weight = as_function(tdpt::jacobi_weight(N, M));
  } else if (family == "laguerre") {
    const int N = spec.value("N", 1);
    if (N < 1) throw UsageError("laguerre Gram matrix needs N >= 1");
    for (int k = 0; k <= kmax; ++k) {
      labels.push_back(k);
      fs.push_back(as_function(classical::laguerre(k, N)));
    }
    weight = [N](double z) { return std::pow(z, N) * std::exp(-z); };
    dom = {0.0, INFINITY};
  } else {
    throw UsageError("unknown family '" + family + "' (tdpt, isotonic, jacobi or laguerre)");
  }
  const GramMatrix g = gram_matrix(fs, weight, dom);
  json values = json::array(), errors = json::array();
  for (const auto& row : g.entries) {
    json v = json::array(), e = json::array();
    for (const auto& q : row) {
      v.push_back(q.value);
      e.push_back(q.abs_error_estimate);
    }
    values.push_back(v);
    errors.push_back(e);
  }
  print_json(os, json{{"schema", 1},
                      {"spec", spec},
                      {"k", labels},
                      {"matrix", values},
                      {"abs_error_estimates", errors},
                      {"max_rel_off_diagonal", g.max_relative_off_diagonal()},
                      {"diagonal_positive", g.diagonal_positive()}});
  return kExitPass;
}

void add_family_options(CLI::App* c, FamilyArgs& a, bool with_M, bool with_lambda, bool with_omega) {
  c->add_option("--n", a.n, "seed level n")->check(CLI::NonNegativeNumber);
  c->add_option("--N", a.N, "parameter N >= 1");
  if (with_M) c->add_option("--M", a.M, "parameter M >= 1");
  if (with_lambda) c->add_option("--lambda1", a.lambda1, "lambda1 as p/q");
  if (with_omega) c->add_option("--omega", a.omega, "omega as p/q");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-step confluent Darboux-Backlund rational extensions: build, tables and verification"};
  app.require_subcommand(1);
  std::string output;
  app.add_option("-o,--output", output, "write to a file instead of stdout");

  // classical
  auto* classical_cmd = app.add_subcommand("classical", "classical Jacobi and Laguerre polynomials");
  classical_cmd->require_subcommand(1);
  auto* dump = classical_cmd->add_subcommand("dump", "exact coefficients as JSON");
  std::string dump_family = "jacobi";
  int dump_n = 0, dump_N = 1, dump_M = 1;
  dump->add_option("--family", dump_family)->check(CLI::IsMember({"jacobi", "laguerre"}));
  dump->add_option("--n", dump_n)->check(CLI::NonNegativeNumber);
  dump->add_option("--N", dump_N);
  dump->add_option("--M", dump_M);

  // tdpt
  FamilyArgs ta;
  std::string tdpt_suite;
  bool stable = false;
  auto* tdpt_cmd = app.add_subcommand("tdpt", "trigonometric Darboux-Poschl-Teller extensions");
  tdpt_cmd->require_subcommand(1);
  auto* tdpt_build = tdpt_cmd->add_subcommand("build", "Q, threshold and exceptional polynomials as JSON");
  add_family_options(tdpt_build, ta, true, true, false);
  tdpt_build->add_option("--kmax", ta.kmax)->check(CLI::NonNegativeNumber);
  auto* tdpt_verify = tdpt_cmd->add_subcommand("verify", "run the tdpt checks");
  tdpt_verify->add_option("--suite", tdpt_suite)->check(CLI::IsMember({"regularity", "ode", "ortho", "shape", "spectrum"}));
  add_family_options(tdpt_verify, ta, true, true, false);
  tdpt_verify->add_flag("--stable", stable, "omit elapsed_ms");
  auto* tdpt_table_cmd = tdpt_cmd->add_subcommand("table", "CSV of x, V, V_ext, psi_k");
  add_family_options(tdpt_table_cmd, ta, true, true, false);
  tdpt_table_cmd->add_option("--kmax", ta.kmax)->check(CLI::NonNegativeNumber);
  tdpt_table_cmd->add_option("--x-points", ta.x_points, "a:b:n")->required();
  tdpt_table_cmd->add_option("--format", ta.format)->check(CLI::IsMember({"csv", "json"}));

  // isotonic
  FamilyArgs ia;
  ia.n = 1;
  std::string iso_suite;
  auto* iso_cmd = app.add_subcommand("isotonic", "isotonic oscillator extensions");
  iso_cmd->require_subcommand(1);
  auto* iso_build = iso_cmd->add_subcommand("build", "Q and exceptional polynomials as JSON");
  add_family_options(iso_build, ia, false, false, false);
  iso_build->add_option("--kmax", ia.kmax)->check(CLI::NonNegativeNumber);
  auto* iso_verify = iso_cmd->add_subcommand("verify", "run the isotonic checks");
  iso_verify->add_option("--suite", iso_suite)
      ->check(CLI::IsMember({"q-crosscheck", "ode", "ortho", "shape", "n0-type2", "n0-negative", "spectrum"}));
  add_family_options(iso_verify, ia, false, false, true);
  iso_verify->add_flag("--stable", stable, "omit elapsed_ms");
  auto* iso_table_cmd = iso_cmd->add_subcommand("table", "CSV of x, V, V_ext, psi_k");
  add_family_options(iso_table_cmd, ia, false, false, true);
  iso_table_cmd->add_option("--kmax", ia.kmax)->check(CLI::NonNegativeNumber);
  iso_table_cmd->add_option("--x-points", ia.x_points, "a:b:n")->required();
  iso_table_cmd->add_option("--format", ia.format)->check(CLI::IsMember({"csv", "json"}));

  // chain
  ChainArgs ca;
  std::string which;
  auto* chain_cmd = app.add_subcommand("chain", "numeric confluent and hyperconfluent chains");
  chain_cmd->require_subcommand(1);
  auto* chain_run = chain_cmd->add_subcommand("run", "CSV of x, V, V_ext for an m-step chain");
  chain_run->add_option("--base", ca.base)->check(CLI::IsMember({"tdpt", "isotonic"}));
  chain_run->add_option("--N", ca.N);
  chain_run->add_option("--M", ca.M);
  chain_run->add_option("--omega", ca.omega, "omega as p/q");
  chain_run->add_option("--n", ca.n, "seed level")->check(CLI::NonNegativeNumber);
  chain_run->add_option("--m", ca.m, "number of confluent steps");
  chain_run->add_option("--lambdas", ca.lambdas, "comma-separated lambda_1..lambda_{m-1}");
  chain_run->add_option("--x0", ca.x0,
                        "integration base point (default: pi/2 for tdpt, 0 for isotonic; grid midpoint for m >= 3)");
  chain_run->add_option("--grid", ca.grid, "a:b:n")->required();
  chain_run->add_option("--format", ca.format)->check(CLI::IsMember({"csv", "json"}));
  auto* chain_cross = chain_cmd->add_subcommand("crosscheck", "numeric routes against exact forms");
  chain_cross->add_option("--which", which)->required()->check(CLI::IsMember({"matveev", "two-step"}));
  chain_cross->add_flag("--stable", stable, "omit elapsed_ms");

  // verify
  std::string selector, params_file, potential_json, family_json;
  int levels = 4;
  bool list = false;
  json check_params = json::object();
  auto* verify_cmd = app.add_subcommand("verify", "run checks: all, a module name or a check id");
  verify_cmd->add_option("selector", selector, "all | <module> | <check-id>");
  verify_cmd->add_option("--params-file", params_file, "JSON object mapping check ids to parameters");
  verify_cmd->add_flag("--list", list, "print the manifest");
  verify_cmd->add_flag("--stable", stable, "omit elapsed_ms");
  struct IntParam {
    const char* name;
    int value = 0;
  };
  std::vector<IntParam> int_params = {{"n"}, {"N"}, {"M"}, {"kmax"}, {"klevels"}, {"Nmax"}, {"samples"}, {"grid_n"}};
  std::map<std::string, std::string> exact_params = {{"lambda1", ""}, {"omega", ""}, {"C", ""}};
  std::vector<CLI::Option*> param_opts;
  for (auto& p : int_params)
    param_opts.push_back(verify_cmd->add_option(std::string("--") + (std::string(p.name) == "grid_n" ? "grid-n" : p.name),
                                                p.value, "check parameter"));
  for (auto& [name, value] : exact_params)
    param_opts.push_back(verify_cmd->add_option("--" + name, value, "check parameter as p/q"));
  auto* verify_spectrum = verify_cmd->add_subcommand("spectrum", "Dirichlet spectrum of a potential");
  verify_spectrum->add_option("--potential-json", potential_json)->required();
  verify_spectrum->add_option("--levels", levels);
  auto* verify_gram = verify_cmd->add_subcommand("gram", "Gram matrix of a polynomial family");
  verify_gram->add_option("--family-json", family_json)->required();

  // table
  std::string table_kind = "potential", table_family = "tdpt", table_grid;
  FamilyArgs xa;
  int table_k = -1;
  auto* table_cmd = app.add_subcommand("table", "potential, eigenfunction or polynomial tables");
  table_cmd->add_option("--kind", table_kind)->check(CLI::IsMember({"potential", "eigenfunction", "polynomial"}));
  table_cmd->add_option("--family", table_family)->check(CLI::IsMember({"tdpt", "isotonic"}));
  add_family_options(table_cmd, xa, true, true, true);
  table_cmd->add_option("--k", table_k, "eigenfunction or polynomial index");
  table_cmd->add_option("--kmax", xa.kmax)->check(CLI::NonNegativeNumber);
  table_cmd->add_option("--grid", table_grid, "a:b:n");
  table_cmd->add_option("--format", xa.format)->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    Output out(output);
    std::ostream& os = out.stream();

    if (*dump) return cmd_classical_dump(dump_family, dump_n, dump_N, dump_M, os);

    if (*tdpt_build) return cmd_tdpt_build(ta, os);
    if (*tdpt_verify) {
      json params = json::object();
      for (const char* k : {"--n", "--N", "--M", "--lambda1"})
        if (tdpt_verify->count(k)) params[std::string(k + 2)] = 0;
      if (params.contains("n")) params["n"] = ta.n;
      if (params.contains("N")) params["N"] = ta.N;
      if (params.contains("M")) params["M"] = ta.M;
      if (params.contains("lambda1")) params["lambda1"] = to_string(exact(ta.lambda1));
      const auto ids = suite_ids(kTdptSuites, "tdpt", tdpt_suite);
      return run_and_print(tdpt_suite.empty() ? "tdpt" : "tdpt:" + tdpt_suite, ids, params, stable, os);
    }
    if (*tdpt_table_cmd) {
      const auto s = tdpt_spec(ta);
      tdpt_table(s, parse_grid(ta.x_points), ta.kmax, true, true).write(os, ta.format, s.to_json());
      return kExitPass;
    }

    if (*iso_build) return cmd_isotonic_build(ia, os);
    if (*iso_verify) {
      json params = json::object();
      if (iso_verify->count("--n")) params["n"] = ia.n;
      if (iso_verify->count("--N")) params["N"] = ia.N;
      if (iso_verify->count("--omega")) params["omega"] = to_string(exact(ia.omega));
      const auto ids = suite_ids(kIsotonicSuites, "isotonic", iso_suite);
      return run_and_print(iso_suite.empty() ? "isotonic" : "isotonic:" + iso_suite, ids, params, stable, os);
    }
    if (*iso_table_cmd) {
      const auto s = isotonic_spec(ia);
      isotonic_table(s, parse_grid(ia.x_points), ia.kmax, true, true).write(os, ia.format, s.to_json());
      return kExitPass;
    }

    if (*chain_run) return cmd_chain_run(ca, os);
    if (*chain_cross)
      return run_and_print("chain:" + which, {which == "matveev" ? "chains.matveev" : "chains.two-step"},
                           json::object(), stable, os);

    if (*verify_spectrum) return cmd_verify_spectrum(potential_json, levels, os);
    if (*verify_gram) return cmd_verify_gram(family_json, os);
    if (*verify_cmd) {
      if (list) {
        json m = json::array();
        for (const auto& e : suite::kManifest)
          m.push_back(json{{"check_id", e.check_id}, {"module", e.module}, {"anchor", e.anchor}});
        print_json(os, json{{"schema", 1}, {"manifest", m}});
        return kExitPass;
      }
      if (selector.empty()) throw UsageError("verify needs a selector: all, a module name or a check id");
      json params = json::object();
      for (const auto& p : int_params) {
        const std::string flag = std::string("--") + (std::string(p.name) == "grid_n" ? "grid-n" : p.name);
        if (verify_cmd->count(flag)) params[p.name] = p.value;
      }
      for (const auto& [name, value] : exact_params)
        if (verify_cmd->count("--" + name)) params[name] = to_string(exact(value));
      json by_check = params_file.empty() ? json::object() : read_json_file(params_file);
      const auto ids = suite::select(selector);
      if (!params.empty()) {
        if (ids.size() != 1 || ids.front() != selector)
          throw UsageError("check parameters need a single check id as selector");
        by_check[selector] = params;
      }
      const auto reports = suite::run_checks(ids, by_check);
      print_json(os, suite::suite_json(selector, reports, stable));
      return suite_exit(reports);
    }

    if (*table_cmd) {
      if (table_kind == "polynomial") {
        if (table_k < 0) throw UsageError("--k is required for polynomial tables");
        if (table_family == "tdpt") {
          const auto s = tdpt_spec(xa);
          tdpt::require_regular(s);
          json spec = s.to_json();
          spec["k"] = table_k;
          write_polynomial(os, tdpt::exceptional_polynomial(s, table_k), xa.format, spec);
        } else {
          const auto s = isotonic_spec(xa);
          json spec = s.to_json();
          spec["k"] = table_k;
          write_polynomial(os, isotonic::exceptional_polynomial(s, table_k), xa.format, spec);
        }
        return kExitPass;
      }
      if (table_grid.empty()) throw UsageError("--grid is required for potential and eigenfunction tables");
      const auto xs = parse_grid(table_grid);
      const bool potential = table_kind == "potential";
      Table t;
      json spec;
      if (table_family == "tdpt") {
        const auto s = tdpt_spec(xa);
        spec = s.to_json();
        t = tdpt_table(s, xs, table_k >= 0 ? table_k : xa.kmax, potential, !potential);
      } else {
        const auto s = isotonic_spec(xa);
        spec = s.to_json();
        t = isotonic_table(s, xs, table_k >= 0 ? table_k : xa.kmax, potential, !potential);
      }
      if (!potential && table_k >= 0) {
        // keep x and the single requested state
        const std::string col = "psi_" + std::to_string(table_k);
        const auto it = std::find(t.columns.begin(), t.columns.end(), col);
        if (it == t.columns.end()) throw UsageError("no eigenfunction " + col + " (deleted level?)");
        const auto idx = static_cast<std::size_t>(it - t.columns.begin());
        Table one{{"x", col}, {}};
        for (const auto& r : t.rows) one.rows.push_back({r[0], r[idx]});
        t = one;
      }
      spec["kind"] = table_kind;
      t.write(os, xa.format, spec);
      return kExitPass;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const suite::UnknownSelector& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}

// Command-line front door for the weakly singular fractional
// integro-differential equation solver: load problems, run solves and
// convergence studies, check the solver against the series recurrence,
// and run the property suite. Emits plot-ready CSV and JSON results.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fide/io.hpp"
#include "fide/opmatrix.hpp"
#include "fide/problem.hpp"
#include "fide/selfcheck.hpp"
#include "fide/series_solution.hpp"
#include "fide/solver.hpp"

namespace {

using fide::io::json;

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitOracle = 4;
constexpr int kExitProperty = 5;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct ProblemArgs {
  std::string builtin_name;
  std::string problem_path;

  void attach(CLI::App* cmd) {
    auto* b = cmd->add_option("--builtin", builtin_name, "builtin problem name");
    auto* p = cmd->add_option("--problem", problem_path, "problem document (JSON)");
    b->excludes(p);
  }

  // depth: highest grid index the tensors must cover (builtins only)
  fide::ProblemSpec load(int depth) const {
    if (!builtin_name.empty()) return fide::builtin(builtin_name, depth);
    if (problem_path.empty())
      throw fide::validation_error("one of --builtin or --problem is required");
    std::vector<std::string> warnings;
    auto p = fide::io::load_problem_file(problem_path, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    return p;
  }

  std::string label() const { return builtin_name.empty() ? problem_path : builtin_name; }
};

json error_report_json(const fide::solver::ErrorReport& rep) {
  json e;
  e["l2"] = finite_or_null(rep.l2);
  e["linf_grid"] = finite_or_null(rep.linf_grid);
  e["weighted_l2"] = finite_or_null(rep.weighted_l2);
  e["route"] = rep.route;
  return e;
}

void emit_matrices(const fide::ProblemSpec& p, int N, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto q = fide::normalized(p, N);
  int Nhat = N - p.alpha_b();
  auto set = fide::opmat::build_operational_set(q, Nhat);
  auto write_row = [&](const fs::path& file, const std::vector<double>& row) {
    std::ostringstream out;
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt17(row[i]);
    out << "\n";
    fide::io::write_text_atomic(file, out.str());
  };
  auto write_matrix = [&](const fs::path& file, const fide::opmat::Matrix& m) {
    std::ostringstream out;
    for (int i = 0; i < m.n; ++i) {
      for (int j = 0; j < m.n; ++j) out << (j ? "," : "") << fmt17(m.at(i, j));
      out << "\n";
    }
    fide::io::write_text_atomic(file, out.str());
  };
  write_row(dir / "chi.csv", set.chi);
  write_row(dir / "K.csv", set.K);
  write_row(dir / "f0.csv", set.f0);
  write_matrix(dir / "psi.csv", set.psi);
  for (int theta : set.theta_support) {
    write_matrix(dir / ("F_" + std::to_string(theta) + ".csv"), set.F.at(theta));
    write_matrix(dir / ("H_" + std::to_string(theta) + ".csv"), set.H.at(theta));
  }
}

int cmd_solve(const ProblemArgs& pa, int N, const std::string& out_dir, int quad,
              bool matrices) {
  auto p = pa.load(N + 8);
  auto sol = fide::solver::solve_recurrence(p, N);

  json doc;
  doc["problem"] = fide::io::problem_to_json(p);
  doc["N"] = N;
  doc["coefficients"]["monomial"] = sol.cbarbar;
  if (sol.cbar_valid)
    doc["coefficients"]["fgjf"] = sol.cbar;
  else
    doc["coefficients"]["fgjf"] = nullptr;
  doc["runtime_seconds"] = sol.solve_seconds;

  if (p.exact.valid()) {
    auto rep = fide::solver::error_report(sol, p.exact, quad);
    doc["errors"] = error_report_json(rep);
  } else {
    doc["errors"] = nullptr;
  }

  json samples = json::array();
  for (int i = 0; i < 200; ++i) {
    double t = p.T * std::pow(i / 199.0, p.b());
    samples.push_back({t, finite_or_null(fide::solver::evaluate(sol, t))});
  }
  doc["samples"] = samples;

  namespace fs = std::filesystem;
  fs::path dir(out_dir);
  fs::create_directories(dir);
  fide::io::write_json_atomic(dir / "solution.json", doc);
  if (matrices) emit_matrices(p, N, dir / "matrices");

  std::cout << "solved " << pa.label() << " at N=" << N << " (Nhat=" << sol.Nhat << ") in "
            << sol.solve_seconds << " s\n";
  if (doc["errors"].is_object()) {
    std::cout << "errors (" << doc["errors"]["route"].get<std::string>()
              << "): L2=" << doc["errors"]["l2"].dump()
              << " Linf=" << doc["errors"]["linf_grid"].dump()
              << " wL2=" << doc["errors"]["weighted_l2"].dump() << "\n";
  }
  std::cout << "wrote " << (dir / "solution.json").string() << "\n";
  return 0;
}

int cmd_converge(const ProblemArgs& pa, std::vector<int> Ns, const std::string& out_dir,
                 int quad) {
  if (Ns.empty()) Ns = {8, 16, 32, 64};
  int maxN = *std::max_element(Ns.begin(), Ns.end());
  auto p = pa.load(maxN + 8);
  auto st = fide::solver::convergence_study(p, Ns, quad);

  std::ostringstream csv;
  csv << "N,e_L2,e_Linf,e_wL2,cpu_seconds\n";
  for (const auto& r : st.rows)
    csv << r.N << "," << fmt17(r.errors.l2) << "," << fmt17(r.errors.linf_grid) << ","
        << fmt17(r.errors.weighted_l2) << "," << fmt17(r.errors.runtime_seconds) << "\n";

  std::ostringstream semilog;
  semilog << "N,log10_e_L2\n";
  for (const auto& r : st.rows)
    if (r.errors.l2 > 0.0 && std::isfinite(r.errors.l2))
      semilog << r.N << "," << fmt17(std::log10(r.errors.l2)) << "\n";

  bool non_gating = p.exact.coefficient_space_error;
  json meta;
  meta["problem"] = pa.label();
  meta["N"] = Ns;
  meta["fit"] = {{"valid", st.fit_valid},
                 {"slope", st.slope},
                 {"intercept", st.intercept},
                 {"correlation", st.correlation}};
  meta["non_gating"] = non_gating;
  meta["error_route"] = st.rows.empty() ? "pointwise" : st.rows.front().errors.route;

  namespace fs = std::filesystem;
  fs::path dir(out_dir);
  fs::create_directories(dir);
  fide::io::write_text_atomic(dir / "convergence.csv", csv.str());
  fide::io::write_text_atomic(dir / "semilog.csv", semilog.str());
  fide::io::write_json_atomic(dir / "convergence_meta.json", meta);

  std::cout << csv.str();
  if (st.fit_valid)
    std::cout << "fit: log10 e(N) ~ " << st.intercept << " + (" << st.slope
              << ") N, correlation " << st.correlation << "\n";
  if (non_gating)
    std::cout << "note: error route '" << meta["error_route"].get<std::string>()
              << "', study marked non-gating in metadata\n";
  std::cout << "wrote " << (dir / "convergence.csv").string() << "\n";
  return 0;
}

int cmd_oracle_check(const ProblemArgs& pa, long random_seed, int N) {
  fide::ProblemSpec p;
  std::string label;
  if (random_seed >= 0) {
    p = fide::random_sparse_problem(static_cast<std::uint64_t>(random_seed));
    label = "random(seed=" + std::to_string(random_seed) + ")";
    if (N < p.alpha_b()) N = p.alpha_b() + 12;
  } else {
    p = pa.load(N + 8);
    label = pa.label();
  }
  double scale = 0.0;
  double diff = fide::selfcheck::oracle_equivalence_max_diff(p, N, &scale);
  std::cout << "oracle-check " << label << " N=" << N
            << ": max |solver - series| = " << fmt17(diff) << " (coefficient scale "
            << fmt17(scale) << ")\n";
  if (!(diff <= 1e-10)) {
    std::cout << json({{"error", {{"type", "oracle"}, {"max_diff", diff}}}}).dump() << "\n";
    return kExitOracle;
  }
  return 0;
}

int cmd_validate(std::uint64_t seed, bool quick) {
  auto results = fide::selfcheck::run_suite(seed, quick);
  bool all = true;
  std::printf("%-24s %-6s %-13s %-13s %s\n", "check", "status", "worst", "bound", "seconds");
  for (const auto& r : results) {
    all = all && r.passed;
    std::printf("%-24s %-6s %-13.3e %-13.3e %.3f\n", r.name.c_str(),
                r.passed ? "pass" : "FAIL", r.measure, r.bound, r.seconds);
  }
  std::printf("%s\n", all ? "all checks passed" : "PROPERTY FAILURES PRESENT");
  return all ? 0 : kExitProperty;
}

int cmd_examples() {
  std::printf("%-10s %-7s %-6s %-10s %s\n", "name", "alpha", "beta", "domain", "exact solution");
  std::printf("%-10s %-7s %-6s %-10s %s\n", "example1", "3/2", "1/4", "[0,1]",
              "E_{3/2}(t^{3/2}) - 1");
  std::printf("%-10s %-7s %-6s %-10s %s\n", "example2", "1/2", "1/2", "[0,2*pi]",
              "t sin(100 sqrt(t))   (ill-conditioned at double precision; "
              "error norms taken on the series tail)");
  std::printf("%-10s %-7s %-6s %-10s %s\n", "example3", "2/3", "1/2", "[0,1]", "t^{3/2}");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral solver for nonlinear weakly singular fractional "
               "integro-differential equations"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "solve one problem at a fixed degree N");
  ProblemArgs solve_pa;
  solve_pa.attach(solve);
  int solve_N = 0;
  std::string solve_out = ".";
  int solve_quad = 0;
  bool solve_matrices = false;
  solve->add_option("--N", solve_N, "truncation degree")->required();
  solve->add_option("--out", solve_out, "output directory");
  solve->add_option("--quad", solve_quad, "quadrature points for error norms");
  solve->add_flag("--emit-matrices", solve_matrices, "dump operational matrices as CSV");

  // converge
  auto* conv = app.add_subcommand("converge", "error vs N study with plot-ready output");
  ProblemArgs conv_pa;
  conv_pa.attach(conv);
  std::vector<int> conv_N;
  std::string conv_out = ".";
  int conv_quad = 0;
  conv->add_option("--N", conv_N, "ascending N list (default 8,16,32,64)")->delimiter(',');
  conv->add_option("--out", conv_out, "output directory");
  conv->add_option("--quad", conv_quad, "quadrature points for error norms");

  // oracle-check
  auto* oc = app.add_subcommand("oracle-check",
                                "compare solver coefficients with the series recurrence");
  ProblemArgs oc_pa;
  oc_pa.attach(oc);
  int oc_N = 16;
  long oc_seed = -1;
  oc->add_option("--N", oc_N, "truncation degree (default 16)");
  oc->add_option("--random-seed", oc_seed, "check a seeded random sparse problem instead");

  // validate
  auto* val = app.add_subcommand("validate", "run the property suite");
  std::uint64_t val_seed = 1;
  bool val_quick = false;
  val->add_option("--seed", val_seed, "seed for the randomized cases");
  val->add_flag("--quick", val_quick, "fast subset");

  // examples
  app.add_subcommand("examples", "list builtin benchmark problems");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(solve_pa, solve_N, solve_out, solve_quad, solve_matrices);
    if (conv->parsed()) return cmd_converge(conv_pa, conv_N, conv_out, conv_quad);
    if (oc->parsed()) return cmd_oracle_check(oc_pa, oc_seed, oc_N);
    if (val->parsed()) return cmd_validate(val_seed, val_quick);
    return cmd_examples();
  } catch (const fide::validation_error& e) {
    std::cout << json({{"error", {{"type", "validation"}, {"message", e.what()}}}}).dump()
              << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cout << json({{"error", {{"type", "validation"}, {"message", e.what()}}}}).dump()
              << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cout << json({{"error", {{"type", "validation"}, {"message", e.what()}}}}).dump()
              << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cout << json({{"error", {{"type", "numeric"}, {"message", e.what()}}}}).dump() << "\n";
    return kExitNumeric;
  }
}

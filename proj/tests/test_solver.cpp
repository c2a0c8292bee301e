#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "fide/selfcheck.hpp"
#include "fide/solver.hpp"

using namespace fide;

TEST_CASE("solve_recurrence: example 3 is exact at N = 9") {
  auto p = builtin("example3");
  auto sol = solver::solve_recurrence(p, 9);
  REQUIRE(sol.Nhat == 5);
  CHECK(std::abs(sol.cbarbar[5] - 1.0) < 1e-13);
  for (int j = 0; j <= 4; ++j) CHECK(std::abs(sol.cbarbar[j]) < 1e-13);
  CHECK(solver::residual_check(sol) < 1e-13);
  CHECK(sol.cbar_valid);
}

TEST_CASE("solve_recurrence: zero data gives the zero solution") {
  ProblemSpec p;
  p.alpha = RationalOrder(2, 3);
  p.beta = RationalOrder(1, 2);
  p.T = 1.0;
  p.lambda = 0.7;
  p.init = {0.0};
  auto sol = solver::solve_recurrence(p, 12);
  for (double c : sol.cbarbar) CHECK(c == 0.0);
  CHECK(solver::evaluate(sol, 0.5) == 0.0);
}

TEST_CASE("solve_recurrence: first coefficient formula") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    auto p = random_sparse_problem(seed);
    int N = p.alpha_b() + 6;
    auto sol = solver::solve_recurrence(p, N);
    auto K = opmat::build_K(p, sol.Nhat);
    double f00 = 0.0;
    for (const auto& e : p.f)
      if (e.mu == 0 && e.theta == 0) f00 += e.value;
    double want = (f00 + p.lambda * K[0]) / specfun::gamma_fn(p.alpha.value() + 1.0);
    CHECK(sol.cbarbar[0] == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("solve_recurrence: rejects N below alpha*b") {
  CHECK_THROWS_AS(solver::solve_recurrence(builtin("example3"), 3), validation_error);
}

TEST_CASE("oracle equivalence: solver coefficients match the series recurrence") {
  CHECK(selfcheck::oracle_equivalence_max_diff(builtin("example3"), 12) < 1e-13);
  CHECK(selfcheck::oracle_equivalence_max_diff(builtin("example1"), 16) < 1e-12);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    auto p = random_sparse_problem(seed);
    int N = std::min(24, p.alpha_b() + 14);
    CHECK(selfcheck::oracle_equivalence_max_diff(p, N) <= 1e-10);
  }
}

TEST_CASE("solve_reference: explicit-Pi path agrees with the fast path") {
  for (std::uint64_t seed : {21u, 22u, 23u}) {
    auto p = random_sparse_problem(seed);
    int N = p.alpha_b() + 9;
    auto fast = solver::solve_recurrence(p, N);
    auto slow = solver::solve_reference(p, N);
    for (int j = 0; j <= fast.Nhat; ++j)
      CHECK(fast.cbarbar[j] == doctest::Approx(slow[j]).epsilon(1e-12));
  }
}

TEST_CASE("triangularity: extending N leaves earlier coefficients bit-identical") {
  auto p = builtin("example1");
  auto a = solver::solve_recurrence(p, 20);
  auto b = solver::solve_recurrence(p, 32);
  for (int j = 0; j <= a.Nhat; ++j) CHECK(a.cbarbar[j] == b.cbarbar[j]);
}

TEST_CASE("evaluate: anchors") {
  auto p3 = builtin("example3");
  auto sol3 = solver::solve_recurrence(p3, 9);
  CHECK(solver::evaluate(sol3, 0.0) == 0.0);
  CHECK(solver::evaluate(sol3, 0.49) == doctest::Approx(0.343).epsilon(1e-12));

  // truncation gap at t = 1 for the first benchmark at N = 32 equals the
  // dropped series tail (all-positive terms), computed independently
  auto p1 = builtin("example1");
  auto sol1 = solver::solve_recurrence(p1, 32);
  double tail = 0.0;
  for (int k = 6; k <= 40; ++k) tail += specfun::gamma_ratio(1.0, 1.5 * k + 1.0);
  double diff = specfun::mittag_leffler(1.5, 1.0) - 1.0 - solver::evaluate(sol1, 1.0);
  CHECK(diff == doctest::Approx(tail).epsilon(1e-6));
  CHECK(std::abs(diff) < 5e-6);
}

TEST_CASE("coefficient representations: cbarbar = cbar * J") {
  auto p = builtin("example1");
  auto sol = solver::solve_recurrence(p, 28);
  REQUIRE(sol.cbar_valid);
  basis::FGJFBasis bs(p.alpha, p.b(), p.T, sol.N);
  auto J = basis::fgjf_monomial_matrix(bs);
  for (int j = 0; j <= sol.Nhat; ++j) {
    double acc = 0.0;
    for (int k = j; k <= sol.Nhat; ++k) acc += sol.cbar[k] * J.at(k, j);
    CHECK(acc == doctest::Approx(sol.cbarbar[j]).epsilon(1e-12));
  }
}

TEST_CASE("basis-path agreement: FGJF and monomial evaluation coincide up to N = 64") {
  for (const char* name : {"example1", "example3"}) {
    auto p = builtin(name);
    for (int N : {30, 64}) {
      auto sol = solver::solve_recurrence(p, N);
      REQUIRE(sol.cbar_valid);
      for (int i = 0; i <= 40; ++i) {
        double t = p.T * i / 40.0;
        double m = solver::evaluate(sol, t);
        double f = solver::evaluate_fgjf(sol, t);
        CHECK(std::abs(m - f) < 1e-11 * (1.0 + std::abs(m)));
      }
    }
  }
}

TEST_CASE("scaling consistency: lambda enters only through lambda * g") {
  auto p = random_sparse_problem(99);
  p.lambda = 0.8;
  int N = p.alpha_b() + 10;
  auto base = solver::solve_recurrence(p, N);
  ProblemSpec scaled = p;
  scaled.lambda = 1.6;
  for (auto& e : scaled.g) e.value *= 0.5;
  auto other = solver::solve_recurrence(scaled, N);
  for (int j = 0; j <= base.Nhat; ++j)
    CHECK(other.cbarbar[j] == doctest::Approx(base.cbarbar[j]).epsilon(1e-12));
}

TEST_CASE("error_report: solution against itself is at the floor") {
  auto p = builtin("example3");
  auto sol = solver::solve_recurrence(p, 12);
  ExactSolution self;
  const auto solc = sol;
  self.eval = [solc](double t) { return solver::evaluate(solc, t); };
  auto rep = solver::error_report(sol, self, 60);
  CHECK(rep.l2 < 1e-14);
  CHECK(rep.linf_grid < 1e-14);
  CHECK(rep.weighted_l2 < 1e-14);
  CHECK(rep.route == "pointwise");
}

TEST_CASE("error_report: example 3 at machine precision, example 1 at reference level") {
  auto p3 = builtin("example3");
  auto rep3 = solver::error_report(solver::solve_recurrence(p3, 9), p3.exact, 60);
  CHECK(rep3.l2 < 1e-13);

  auto p1 = builtin("example1");
  auto rep1 = solver::error_report(solver::solve_recurrence(p1, 8), p1.exact, 80);
  CHECK(rep1.l2 > 6.93e-3);
  CHECK(rep1.l2 < 6.93e-1);
}

TEST_CASE("residual_check: two-path consistency") {
  auto p1 = builtin("example1");
  CHECK(solver::residual_check(solver::solve_recurrence(p1, 16)) < 1e-12);
  for (std::uint64_t seed : {31u, 32u}) {
    auto p = random_sparse_problem(seed);
    CHECK(solver::residual_check(solver::solve_recurrence(p, p.alpha_b() + 8)) < 1e-11);
  }
}

TEST_CASE("convergence_study: decay on benchmark 1, floor on benchmark 3") {
  auto p1 = builtin("example1");
  auto st = solver::convergence_study(p1, {8, 16, 32});
  REQUIRE(st.rows.size() == 3);
  CHECK(st.rows[0].errors.l2 > st.rows[1].errors.l2);
  CHECK(st.rows[1].errors.l2 > st.rows[2].errors.l2);
  CHECK(st.fit_valid);
  CHECK(st.slope < 0.0);
  // successive table rows improve at least tenfold
  CHECK(st.rows[1].errors.l2 * 10.0 <= st.rows[0].errors.l2 * 1.000001);
  CHECK(st.rows[2].errors.l2 * 10.0 <= st.rows[1].errors.l2);

  auto p3 = builtin("example3");
  auto st3 = solver::convergence_study(p3, {9, 12, 15});
  for (const auto& r : st3.rows) CHECK(r.errors.l2 < 1e-12);

  CHECK_THROWS_AS(solver::convergence_study(p1, {16, 8}), std::invalid_argument);
}

TEST_CASE("error_report: ill-conditioned benchmark routes through the series tail") {
  auto p2 = builtin("example2", 120);
  auto sol = solver::solve_recurrence(p2, 40);
  auto rep = solver::error_report(sol, p2.exact, 120);
  CHECK(rep.route == "series_tail");
  CHECK(std::isfinite(rep.l2));
  CHECK(rep.l2 > 0.0);
}

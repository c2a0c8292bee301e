#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fide/basis.hpp"
#include "fide/opmatrix.hpp"
#include "fide/problem.hpp"
#include "fide/series_solution.hpp"
#include "fide/solver.hpp"

// Self-contained property suite behind `validate`: each check pits an
// implementation path against an independent route (quadrature against
// closed forms, matrix algebra against direct polynomial powering, the
// operational solve against series re-substitution). Deterministic under
// the supplied seed.

namespace fide::selfcheck {

// --- independent quadrature oracle -------------------------------------------

// Tanh-sinh rule for int_0^1 f ds with integrable endpoint singularities.
// The integrand receives both s and 1-s so that neither endpoint loses
// precision to cancellation. Trapezoid in the transformed variable with
// step halving until two levels agree.
inline double tanh_sinh_01(const std::function<double(double, double)>& f, double tol = 1e-12) {
  const double kHalfPi = 1.5707963267948966;
  const double u_max = 6.0;
  auto node_value = [&](double u) {
    double a = kHalfPi * std::sinh(u);
    if (2.0 * a > 690.0) return 0.0;  // weight underflows before e^(2a) overflows
    double ch = std::cosh(a);
    double w = 0.5 * kHalfPi * std::cosh(u) / (ch * ch);  // ds/du = (pi/4) cosh u sech^2 a
    double e2 = std::exp(2.0 * a);
    double s = e2 / (1.0 + e2);
    double oms = 1.0 / (1.0 + e2);
    double v = w * f(s, oms);
    return std::isfinite(v) ? v : 0.0;
  };

  double h = 1.0;
  double total = node_value(0.0);
  for (int k = 1; h * k <= u_max; ++k) total += node_value(h * k) + node_value(-h * k);
  double integral = h * total;
  for (int level = 1; level <= 10; ++level) {
    h *= 0.5;
    double acc = 0.0;
    for (int k = 1; h * k <= u_max; k += 2) acc += node_value(h * k) + node_value(-h * k);
    double refined = 0.5 * integral + h * acc;
    if (level >= 3 && std::abs(refined - integral) <= tol * std::abs(refined)) return refined;
    integral = refined;
  }
  return integral;
}

// --- brute-force references ---------------------------------------------------

// Full-length polynomial power: y(u) = sum_j c_j u^(ab + j), returns the
// coefficients of y^theta over u with no truncation.
inline std::vector<double> poly_power_bruteforce(const std::vector<double>& c, int theta,
                                                 int alpha_b) {
  std::vector<double> y(alpha_b + c.size(), 0.0);
  for (std::size_t j = 0; j < c.size(); ++j) y[alpha_b + j] = c[j];
  std::vector<double> r(1, 1.0);
  for (int e = 0; e < theta; ++e) {
    std::vector<double> nr(r.size() + y.size() - 1, 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i] == 0.0) continue;
      for (std::size_t j = 0; j < y.size(); ++j) nr[i + j] += r[i] * y[j];
    }
    r.swap(nr);
  }
  return r;
}

// Banded-matrix representation check: of y^theta equals
// direct polynomial powering on the retained indices.
inline double multiplication_matrix_max_diff(const std::vector<double>& cbarbar, int theta, int alpha_b) {
  int Nhat = static_cast<int>(cbarbar.size()) - 1;
  auto psi = opmat::build_psi(Nhat, alpha_b);
  auto Q = opmat::build_Q(cbarbar, Nhat, alpha_b);
  auto row = opmat::row_times(opmat::row_times(cbarbar, psi), opmat::matpow(Q, theta - 1));
  auto brute = poly_power_bruteforce(cbarbar, theta, alpha_b);
  double m = 0.0;
  for (int i = 0; i <= Nhat; ++i) {
    double ref = (i < static_cast<int>(brute.size())) ? brute[i] : 0.0;
    m = std::max(m, std::abs(row[i] - ref));
  }
  return m;
}

// --- suite -------------------------------------------------------------------

struct CheckResult {
  std::string name;
  bool passed = false;
  double measure = 0.0;  // worst residual observed
  double bound = 0.0;    // acceptance bound
  double seconds = 0.0;
};

namespace detail {

template <typename Fn>
CheckResult timed(const std::string& name, double bound, Fn&& fn) {
  CheckResult r;
  r.name = name;
  r.bound = bound;
  auto t0 = std::chrono::steady_clock::now();
  r.measure = fn();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.passed = std::isfinite(r.measure) && r.measure <= bound;
  return r;
}

}  // namespace detail

inline CheckResult check_gamma_recurrence(std::uint64_t seed) {
  return detail::timed("gamma-recurrence", 1e-12, [&] {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(1e-3, 40.0);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      double x = dist(rng);
      double g1 = specfun::gamma_fn(x + 1.0), g0 = specfun::gamma_fn(x);
      worst = std::max(worst, std::abs(g1 - x * g0) / std::abs(g1));
    }
    return worst;
  });
}

inline CheckResult check_gamma_ratio_inverse(std::uint64_t seed) {
  return detail::timed("gamma-ratio-inverse", 1e-12, [&] {
    std::mt19937_64 rng(seed + 1);
    std::uniform_real_distribution<double> dist(0.05, 200.0);
    std::uniform_real_distribution<double> off(-3.0, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      double a = dist(rng);
      double b = std::max(0.05, a + off(rng));
      worst = std::max(worst,
                       std::abs(specfun::gamma_ratio(a, b) * specfun::gamma_ratio(b, a) - 1.0));
    }
    return worst;
  });
}

inline CheckResult check_mittag_leffler_exp() {
  return detail::timed("mittag-leffler-exp", 1e-12, [&] {
    double worst = 0.0;
    for (int i = 0; i <= 50; ++i) {
      double t = 0.1 * i;
      worst = std::max(worst,
                       std::abs(specfun::mittag_leffler(1.0, t) - std::exp(t)) / std::exp(t));
    }
    return worst;
  });
}

inline CheckResult check_jacobi_orthogonality() {
  return detail::timed("jacobi-orthogonality", 1e-11, [&] {
    const double params[3][2] = {{0.0, 0.0}, {0.0, 3.0}, {2.0, 1.0}};
    double worst = 0.0;
    for (const auto& pr : params) {
      double rho = pr[0], eta = pr[1];
      auto rule = basis::gauss_jacobi_rule(16, rho, eta);
      for (int m = 0; m <= 12; ++m)
        for (int n = m; n <= 12; ++n) {
          double acc = 0.0;
          for (std::size_t q = 0; q < rule.nodes.size(); ++q)
            acc += rule.weights[q] * basis::jacobi_eval(m, rho, eta, rule.nodes[q]) *
                   basis::jacobi_eval(n, rho, eta, rule.nodes[q]);
          double expect = (m == n) ? basis::jacobi_norm(n, rho, eta) : 0.0;
          double scale = std::sqrt(basis::jacobi_norm(m, rho, eta) *
                                   basis::jacobi_norm(n, rho, eta));
          worst = std::max(worst, std::abs(acc - expect) / scale);
        }
    }
    return worst;
  });
}

// Mutual orthogonality of the trial FGJFs, reduced by u = (t/T)^gamma to a
// fixed-weight integral and compared against the closed-form norm.
inline CheckResult check_fgjf_orthogonality() {
  return detail::timed("fgjf-orthogonality", 1e-10, [&] {
    double worst = 0.0;
    const struct {
      RationalOrder a;
      int b;
      double T;
    } cases[] = {{{1, 2}, 2, 1.0}, {{3, 2}, 4, 1.0}, {{2, 3}, 6, 2.0}};
    for (const auto& cs : cases) {
      basis::FGJFBasis bs(cs.a, cs.b, cs.T, static_cast<int>(cs.a.grid_index(cs.b)) + 10);
      int ab = bs.alpha_b;
      auto rule = basis::gauss_jacobi_rule(24, 0.0, static_cast<double>(ab));
      double scale_t = std::pow(2.0, ab) / std::pow(cs.T, cs.a.value());
      for (int m = 0; m <= 10; ++m)
        for (int n = m; n <= 10; ++n) {
          double acc = 0.0;
          for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            double s = rule.nodes[q];
            double t = cs.T * std::pow(0.5 * (1.0 + s), cs.b);
            // strip the boundary factor (1+s)^ab carried by each trial
            // function; the quadrature weight supplies (1+s)^ab once.
            double um = basis::fgjf_eval(ab + m, bs, t) / (scale_t * std::pow(t, cs.a.value()));
            double un = basis::fgjf_eval(ab + n, bs, t) / (scale_t * std::pow(t, cs.a.value()));
            acc += rule.weights[q] * um * un;
          }
          double expect = (m == n) ? basis::jacobi_norm(n, 0.0, static_cast<double>(ab)) : 0.0;
          double scale = std::sqrt(basis::jacobi_norm(m, 0.0, static_cast<double>(ab)) *
                                   basis::jacobi_norm(n, 0.0, static_cast<double>(ab)));
          worst = std::max(worst, std::abs(acc - expect) / scale);
        }
    }
    return worst;
  });
}

inline CheckResult check_beta_integral(std::uint64_t seed) {
  return detail::timed("beta-integral-identity", 1e-8, [&] {
    std::mt19937_64 rng(seed + 2);
    std::uniform_real_distribution<double> rb(0.1, 1.0), rt(0.0, 4.0);
    double worst = 0.0;
    auto one = [&](double beta, double tau) {
      double ref = tanh_sinh_01(
          [&](double s, double oms) { return std::pow(oms, beta - 1.0) * std::pow(s, tau); });
      double val = specfun::gamma_fn(beta) * specfun::gamma_ratio(tau + 1.0, tau + beta + 1.0);
      worst = std::max(worst, std::abs(val - ref));
    };
    one(0.5, 3.0);   // the 32/35 anchor
    one(0.25, 0.25);
    for (int i = 0; i < 18; ++i) one(rb(rng), rt(rng));
    return worst;
  });
}

inline CheckResult check_caputo_rl_roundtrip(std::uint64_t seed) {
  return detail::timed("caputo-rl-roundtrip", 1e-12, [&] {
    std::mt19937_64 rng(seed + 3);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    double worst = 0.0;
    const RationalOrder orders[] = {{1, 2}, {2, 3}, {3, 2}, {5, 6}};
    for (const auto& a : orders) {
      int B = 6, M = 36;
      long ab = a.grid_index(B);
      long ca = a.ceil();
      auto p = series::FracSeries::zero(B, M);
      for (int mu = 0; mu <= M; ++mu) {
        if (mu == 0 || (mu % B == 0 && mu / B <= ca - 1) || mu < ab) continue;
        if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) p.coef[mu] = val(rng);
      }
      auto q = series::rl_integral_on_series(series::caputo_on_series(p, a), a);
      for (int mu = 0; mu + ab <= M; ++mu)
        worst = std::max(worst, std::abs(q.coef[mu] - p.coef[mu]));
    }
    return worst;
  });
}

inline CheckResult check_multiplication_matrix(std::uint64_t seed, int cases) {
  return detail::timed("mul-matrix-bruteforce", 1e-10, [&] {
    std::mt19937_64 rng(seed + 4);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    double worst = 0.0;
    for (int c = 0; c < cases; ++c) {
      int ab = std::uniform_int_distribution<int>(1, 3)(rng);
      int Nhat = std::uniform_int_distribution<int>(ab, 12)(rng);
      int theta = std::uniform_int_distribution<int>(1, 4)(rng);
      std::vector<double> cb(Nhat + 1);
      for (auto& v : cb) v = val(rng);
      worst = std::max(worst, multiplication_matrix_max_diff(cb, theta, ab));
    }
    return worst;
  });
}

inline CheckResult check_residual_builtins(bool quick) {
  return detail::timed("residual-builtins", 1e-11, [&] {
    double worst = 0.0;
    worst = std::max(worst, solver::residual_check(solver::solve_recurrence(builtin("example3"), 9)));
    if (!quick) {
      worst =
          std::max(worst, solver::residual_check(solver::solve_recurrence(builtin("example1"), 16)));
      auto rp = random_sparse_problem(7);
      int N = rp.alpha_b() + 8;
      worst = std::max(worst, solver::residual_check(solver::solve_recurrence(rp, N)));
    }
    return worst;
  });
}

inline double oracle_equivalence_max_diff(const ProblemSpec& p, int N,
                                          double* coef_scale = nullptr) {
  auto sol = solver::solve_recurrence(p, N);
  auto ser = series_solution::solution_series(p, N);
  int ab = p.alpha_b();
  double m = 0.0, scale = 0.0;
  for (int j = 0; j <= sol.Nhat; ++j) {
    m = std::max(m, std::abs(sol.cbarbar[j] - ser.coef[ab + j]));
    scale = std::max(scale, std::abs(ser.coef[ab + j]));
  }
  if (coef_scale) *coef_scale = scale;
  return m;
}

inline CheckResult check_oracle_equivalence(std::uint64_t seed, bool quick) {
  return detail::timed("oracle-equivalence", 1e-10, [&] {
    double worst = oracle_equivalence_max_diff(builtin("example3"), 12);
    worst = std::max(worst, oracle_equivalence_max_diff(builtin("example1"), quick ? 12 : 24));
    int cases = quick ? 3 : 10;
    for (int c = 0; c < cases; ++c) {
      auto rp = random_sparse_problem(seed + 100 + c);
      int N = rp.alpha_b() + (quick ? 6 : 12);
      worst = std::max(worst, oracle_equivalence_max_diff(rp, N));
    }
    return worst;
  });
}

inline std::vector<CheckResult> run_suite(std::uint64_t seed, bool quick) {
  std::vector<CheckResult> rs;
  rs.push_back(check_gamma_recurrence(seed));
  rs.push_back(check_gamma_ratio_inverse(seed));
  rs.push_back(check_mittag_leffler_exp());
  rs.push_back(check_beta_integral(seed));
  rs.push_back(check_caputo_rl_roundtrip(seed));
  rs.push_back(check_jacobi_orthogonality());
  if (!quick) rs.push_back(check_fgjf_orthogonality());
  rs.push_back(check_multiplication_matrix(seed, quick ? 10 : 50));
  rs.push_back(check_residual_builtins(quick));
  rs.push_back(check_oracle_equivalence(seed, quick));
  return rs;
}

}  // namespace fide::selfcheck

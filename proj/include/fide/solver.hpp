#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fide/basis.hpp"
#include "fide/opmatrix.hpp"
#include "fide/problem.hpp"
#include "fide/series_solution.hpp"

// The Petrov-Galerkin solve. The discrete system is triangular: each
// coefficient of the approximation over {t^alpha, t^(alpha+gamma), ...}
// depends only on strictly earlier ones, so the solution is computed by a
// forward recurrence instead of a nonlinear algebraic solve.

namespace fide::solver {

struct PGSolution {
  int N = 0;
  int Nhat = 0;
  std::vector<double> cbarbar;  // coefficients over the shifted monomials
  std::vector<double> cbar;     // coefficients over the trial FGJF family
  bool cbar_valid = false;
  ProblemSpec problem;          // original problem (initial data, exact)
  std::vector<double> psi;      // initial polynomial coefficients
  double solve_seconds = 0.0;

  int b() const { return problem.b(); }
  int alpha_b() const { return problem.alpha_b(); }
};

namespace detail {

// Shared core: given the homogeneous-data problem `q`, fill cbarbar by the
// forward recurrence. The rows w[theta] hold the monomial coefficients of
// y_N^theta and are extended one index per step; every value read at step j
// was finalized at an earlier step.
inline std::vector<double> recurrence(const ProblemSpec& q, int Nhat) {
  const int ab = q.alpha_b();
  const int bb = q.beta_b();
  const double a = q.alpha.value();
  const double bt = q.beta.value();
  const double gm = q.grid_gamma();
  const int theta_max = q.max_theta();

  std::vector<double> f0(Nhat + 1, 0.0);
  for (const auto& e : q.f)
    if (e.theta == 0 && e.mu <= Nhat) f0[e.mu] += e.value;
  std::vector<double> K = opmat::build_K(q, Nhat);

  std::vector<FEntry> fnl;
  std::vector<GEntry> gnl;
  for (const auto& e : q.f)
    if (e.theta >= 1) fnl.push_back(e);
  for (const auto& e : q.g)
    if (e.theta >= 1) gnl.push_back(e);

  std::vector<double> c(Nhat + 1, 0.0);
  std::vector<std::vector<double>> w(theta_max + 1, std::vector<double>(Nhat + 1, 0.0));

  for (int j = 0; j <= Nhat; ++j) {
    if (theta_max >= 1) w[1][j] = (j >= ab) ? c[j - ab] : 0.0;
    for (int theta = 2; theta <= theta_max; ++theta) {
      double s = 0.0;
      for (int m = (theta - 1) * ab; m <= j - ab; ++m) s += w[theta - 1][m] * w[1][j - m];
      w[theta][j] = s;
    }
    double Z = 0.0;
    for (const auto& e : fnl) {
      int i = j - e.mu;
      if (i >= e.theta * ab) Z += e.value * w[e.theta][i];
    }
    for (const auto& e : gnl) {
      int i = j - e.mu - e.nu - bb;
      if (i >= e.theta * ab)
        Z += q.lambda * e.value * opmat::coeff_A(e.nu, i, bt, gm) * w[e.theta][i];
    }
    double chi_inv = specfun::gamma_ratio(gm * j + 1.0, a + gm * j + 1.0);
    c[j] = chi_inv * (f0[j] + q.lambda * K[j] + Z);
  }
  return c;
}

}  // namespace detail

inline PGSolution solve_recurrence(const ProblemSpec& p, int N) {
  p.require_valid();
  const int ab = p.alpha_b();
  if (N < ab)
    throw validation_error("solve_recurrence: N = " + std::to_string(N) +
                           " is below alpha*b = " + std::to_string(ab));
  const int Nhat = N - ab;

  auto t0 = std::chrono::steady_clock::now();
  ProblemSpec q = normalized(p, N);
  PGSolution sol;
  sol.N = N;
  sol.Nhat = Nhat;
  sol.problem = p;
  sol.psi = p.psi_poly();
  sol.cbarbar = detail::recurrence(q, Nhat);

  // Back-substitute the FGJF coefficients from the lower-triangular change
  // of basis. At extreme truncation degrees the basis matrix leaves the
  // double range; the monomial representation stays authoritative then.
  try {
    basis::FGJFBasis bs(p.alpha, p.b(), p.T, N);
    sol.cbar = basis::monomial_to_fgjf(bs, sol.cbarbar);
    sol.cbar_valid = true;
  } catch (const numeric_error&) {
    sol.cbar.clear();
    sol.cbar_valid = false;
  }
  sol.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

// Reference solve that assembles the explicit Pi matrices from Q powers at
// every step. Cubic cost per step; kept as an independent cross-check of
// the fast path's index bookkeeping.
inline std::vector<double> solve_reference(const ProblemSpec& p, int N) {
  p.require_valid();
  const int ab = p.alpha_b();
  if (N < ab) throw validation_error("solve_reference: N below alpha*b");
  const int Nhat = N - ab;
  ProblemSpec q = normalized(p, N);
  auto set = opmat::build_operational_set(q, Nhat);
  const double a = q.alpha.value(), gm = q.grid_gamma();

  std::vector<double> c(Nhat + 1, 0.0);
  for (int j = 0; j <= Nhat; ++j) {
    double Z = 0.0;
    if (Nhat >= ab) {
      auto Q = opmat::build_Q(c, Nhat, ab);
      for (int theta : set.theta_support) {
        opmat::Matrix B(Nhat + 1);
        const auto& F = set.F.at(theta);
        const auto& H = set.H.at(theta);
        for (std::size_t i = 0; i < B.a.size(); ++i) B.a[i] = F.a[i] + q.lambda * H.a[i];
        auto qp = opmat::matpow(Q, theta - 1);
        auto band = opmat::q_band_from_power(qp, theta, ab);
        auto Pi = opmat::build_Pi(theta, band, B, ab);
        for (int i = 0; i <= j; ++i) Z += c[i] * Pi.at(i, j);
      }
    }
    double chi_inv = specfun::gamma_ratio(gm * j + 1.0, a + gm * j + 1.0);
    c[j] = chi_inv * (set.f0[j] + q.lambda * set.K[j] + Z);
  }
  return c;
}

// Monomial-path evaluation (Horner in u = t^gamma) plus the initial
// polynomial; the conditioning of this path is what decides whether a
// given benchmark can be measured pointwise.
inline double evaluate(const PGSolution& sol, double t) {
  double u = std::pow(t, 1.0 / sol.b());
  double acc = 0.0;
  for (int j = sol.Nhat; j >= 0; --j) acc = acc * u + sol.cbarbar[j];
  double y = acc * std::pow(t, sol.problem.alpha.value());
  double ps = 0.0;
  for (std::size_t k = sol.psi.size(); k-- > 0;) ps = ps * t + sol.psi[k];
  return y + ps;
}

// Trial-basis evaluation; agrees with the monomial path at desk scale.
inline double evaluate_fgjf(const PGSolution& sol, double t) {
  if (!sol.cbar_valid) throw numeric_error("evaluate_fgjf: FGJF coefficients unavailable");
  basis::FGJFBasis bs(sol.problem.alpha, sol.b(), sol.problem.T, sol.N);
  double y = 0.0;
  for (int k = sol.Nhat; k >= 0; --k) y += sol.cbar[k] * basis::fgjf_eval(k + sol.alpha_b(), bs, t);
  double ps = 0.0;
  for (std::size_t k = sol.psi.size(); k-- > 0;) ps = ps * t + sol.psi[k];
  return y + ps;
}

struct ErrorReport {
  double l2 = 0.0;
  double linf_grid = 0.0;
  double weighted_l2 = 0.0;
  std::vector<double> grid;
  double runtime_seconds = 0.0;
  std::string route = "pointwise";
};

namespace detail {

// For exactly-known series solutions the discrete solve reproduces the
// leading coefficients, so the method error is the series tail beyond N.
// Evaluating the tail alone (shifted, then scaled by t^((N+1)/b)) avoids
// the catastrophic cancellation of the full ill-conditioned series.
inline std::function<double(double)> tail_evaluator(const series::FracSeries& exact, int N) {
  int M = exact.order();
  series::FracSeries shifted = series::FracSeries::zero(exact.b, std::max(0, M - (N + 1)));
  for (int mu = N + 1; mu <= M; ++mu) shifted.coef[mu - (N + 1)] = exact.coef[mu];
  double expo = static_cast<double>(N + 1) / exact.b;
  return [shifted, expo](double t) {
    return series::series_eval(shifted, t) * std::pow(t, expo);
  };
}

}  // namespace detail

inline ErrorReport error_report(const PGSolution& sol, const ExactSolution& exact,
                                int quad_points = 0) {
  if (!exact.valid()) throw std::invalid_argument("error_report: no exact solution available");
  const double T = sol.problem.T;
  const int B = sol.b();
  const int ab = sol.alpha_b();
  if (quad_points <= 0) quad_points = std::max(80, sol.N + 24);

  ErrorReport rep;
  rep.runtime_seconds = sol.solve_seconds;

  std::function<double(double)> err;
  if (exact.coefficient_space_error && exact.has_series()) {
    rep.route = "series_tail";
    auto tail = detail::tail_evaluator(exact.make_series(sol.N + 64), sol.N);
    err = [tail](double t) { return tail(t); };
  } else {
    const PGSolution* s = &sol;
    auto ex = exact.eval;
    err = [s, ex](double t) { return evaluate(*s, t) - ex(t); };
  }

  // L2 over [0, T]: substitute u = (t/T)^gamma; the Jacobi weight (1+s)^(b-1)
  // absorbs the transformed measure exactly.
  {
    auto rule = basis::gauss_jacobi_rule(quad_points, 0.0, static_cast<double>(B - 1));
    double acc = 0.0;
    for (int i = 0; i < quad_points; ++i) {
      double u = 0.5 * (1.0 + rule.nodes[i]);
      double e = err(T * std::pow(u, B));
      acc += rule.weights[i] * e * e;
    }
    rep.l2 = std::sqrt(acc * T * B * std::pow(2.0, -B));
  }
  // weighted L2 against w^(0, alpha b, gamma).
  {
    auto rule = basis::gauss_jacobi_rule(quad_points, 0.0, static_cast<double>(ab));
    double acc = 0.0;
    for (int i = 0; i < quad_points; ++i) {
      double u = 0.5 * (1.0 + rule.nodes[i]);
      double e = err(T * std::pow(u, B));
      acc += rule.weights[i] * e * e;
    }
    rep.weighted_l2 = std::sqrt(acc * T * std::pow(2.0, -(ab + 1)));
  }
  // sup over a 1000-point grid graded toward the origin.
  {
    const int n = 1000;
    rep.grid.resize(n);
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
      double t = T * std::pow(static_cast<double>(i) / (n - 1), B);
      rep.grid[i] = t;
      m = std::max(m, std::abs(err(t)));
    }
    rep.linf_grid = m;
  }
  return rep;
}

struct ConvergenceRow {
  int N = 0;
  ErrorReport errors;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  double slope = 0.0;        // fitted d log10 e / dN
  double intercept = 0.0;
  double correlation = 0.0;  // Pearson r of (N, log10 e)
  bool fit_valid = false;
};

inline ConvergenceStudy convergence_study(const ProblemSpec& p, const std::vector<int>& Ns,
                                          int quad_points = 0) {
  for (std::size_t i = 1; i < Ns.size(); ++i)
    if (Ns[i] <= Ns[i - 1])
      throw std::invalid_argument("convergence_study: N list must be strictly ascending");
  ConvergenceStudy st;
  for (int N : Ns) {
    auto sol = solve_recurrence(p, N);
    st.rows.push_back({N, error_report(sol, p.exact, quad_points)});
  }
  // least-squares fit of log10 e(N) = intercept + slope * N
  std::vector<double> xs, ys;
  for (const auto& r : st.rows)
    if (r.errors.l2 > 0.0 && std::isfinite(r.errors.l2)) {
      xs.push_back(r.N);
      ys.push_back(std::log10(r.errors.l2));
    }
  if (xs.size() >= 2) {
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
      syy += ys[i] * ys[i];
    }
    double den = n * sxx - sx * sx;
    if (den > 0.0) {
      st.slope = (n * sxy - sx * sy) / den;
      st.intercept = (sy - st.slope * sx) / n;
      double vy = n * syy - sy * sy;
      st.correlation = vy > 0.0 ? (n * sxy - sx * sy) / std::sqrt(den * vy) : 0.0;
      st.fit_valid = true;
    }
  }
  return st;
}

// Largest coefficient residual of the differentiated equation over the
// monomial indices <= Nhat - beta b, re-derived entirely in series
// arithmetic (independent of the operational-matrix assembly).
inline double residual_check(const PGSolution& sol) {
  const int B = sol.b();
  const int ab = sol.alpha_b();
  auto y = series::FracSeries::zero(B, sol.N);
  for (int j = 0; j <= sol.Nhat; ++j) y.coef[ab + j] = sol.cbarbar[j];
  auto psi = sol.problem.psi_series(sol.N);
  for (int mu = 0; mu <= sol.N; ++mu) y.coef[mu] += psi.coef[mu];
  auto res = series_solution::caputo_form_residual(sol.problem, y);
  double m = 0.0;
  int top = sol.Nhat - sol.problem.beta_b();
  for (int j = 0; j <= top && j <= res.order(); ++j) m = std::max(m, std::abs(res.coef[j]));
  return m;
}

}  // namespace fide::solver

#pragma once

#include <map>
#include <vector>

#include "fide/problem.hpp"
#include "fide/series.hpp"

// Series-side machinery: the recursive fractional-Taylor solution of the
// equation (the independent oracle for the Petrov-Galerkin solver) and
// residual evaluation by direct re-substitution in series arithmetic.

namespace fide::series_solution {

// Coefficients ybar_mu of y(t) = psi(t) + sum_{mu >= alpha b} ybar_mu t^(mu/b),
// computed by a strictly triangular forward sweep: ybar_mu depends only on
// earlier coefficients through the power rows C^theta (coefficients of
// z^theta, z = y - psi). Tensor coefficients addressed at negative indices
// are zero.
inline series::FracSeries solution_series(const ProblemSpec& p, int M) {
  p.require_valid();
  ProblemSpec q = normalized(p, M);
  const int B = q.b();
  const int ab = q.alpha_b();
  const int bb = q.beta_b();
  if (M < ab) throw std::invalid_argument("solution_series: requires M >= alpha*b");
  const double a = q.alpha.value(), bt = q.beta.value();
  const double gb = specfun::gamma_fn(bt);
  const int theta_max = q.max_theta();

  std::vector<double> ybar(M + 1, 0.0);
  // C[theta][sigma]: coefficients of z^theta; theta = 1..theta_max.
  std::vector<std::vector<double>> C(theta_max + 1, std::vector<double>(M + 1, 0.0));
  auto cval = [&](int theta, int sigma) -> double {
    if (theta == 0) return sigma == 0 ? 1.0 : 0.0;
    return C[theta][sigma];
  };

  for (int mu = 0; mu <= M; ++mu) {
    if (mu >= ab) {
      double tau = static_cast<double>(mu) / B;
      double rho1 = specfun::gamma_ratio(tau - a + 1.0, tau + 1.0);
      double facc = 0.0, gacc = 0.0;
      for (const auto& e : q.f) {
        int sigma = mu - ab - e.mu;
        if (sigma >= 0) facc += e.value * cval(e.theta, sigma);
      }
      for (const auto& e : q.g) {
        int sigma = mu - ab - bb - e.mu - e.nu;
        if (sigma < 0) continue;
        double x = static_cast<double>(e.nu + sigma) / B;
        gacc += e.value * cval(e.theta, sigma) * specfun::gamma_ratio(x + 1.0, x + bt + 1.0);
      }
      ybar[mu] = rho1 * (facc + q.lambda * gb * gacc);
    }
    if (theta_max >= 1) C[1][mu] = ybar[mu];
    for (int theta = 2; theta <= theta_max; ++theta) {
      double s = 0.0;
      for (int m = (theta - 1) * ab; m <= mu - ab; ++m) s += C[theta - 1][m] * ybar[mu - m];
      C[theta][mu] = s;
    }
  }

  auto out = p.psi_series(M);
  for (int mu = 0; mu <= M; ++mu) out.coef[mu] += ybar[mu];
  return out;
}

namespace detail {

struct RhsSeries {
  series::FracSeries f_part;     // sum f_{mu,theta} t^(mu g) y^theta
  series::FracSeries abel_part;  // sum g_{mu,nu,theta} t^(mu g) * Abel(s^(nu g) y^theta)
};

inline RhsSeries rhs_series(const ProblemSpec& p, const series::FracSeries& y) {
  if (y.b != p.b()) throw std::invalid_argument("rhs_series: series grid does not match problem");
  const int M = y.order();
  std::map<int, series::FracSeries> powers;
  auto power = [&](int theta) -> const series::FracSeries& {
    auto it = powers.find(theta);
    if (it != powers.end()) return it->second;
    return powers.emplace(theta, series::series_pow(y, theta)).first->second;
  };
  RhsSeries r{series::FracSeries::zero(y.b, M), series::FracSeries::zero(y.b, M)};
  for (const auto& e : p.f) {
    auto term = series::series_shift(power(e.theta), e.mu);
    for (int mu = 0; mu <= M; ++mu) r.f_part.coef[mu] += e.value * term.coef[mu];
  }
  for (const auto& e : p.g) {
    auto term = series::series_shift(power(e.theta), e.nu);
    term = series::abel_integral_on_series(term, p.beta);
    term = series::series_shift(term, e.mu);
    for (int mu = 0; mu <= M; ++mu) r.abel_part.coef[mu] += e.value * term.coef[mu];
  }
  return r;
}

}  // namespace detail

// Residual of the equivalent integral equation
//   y - psi - I^alpha f(.,y) - lambda I^alpha( Abel(g) ) = 0
// as a coefficient series; valid over the full truncation window.
inline series::FracSeries integral_form_residual(const ProblemSpec& p,
                                                 const series::FracSeries& y) {
  auto rhs = detail::rhs_series(p, y);
  auto i_f = series::rl_integral_on_series(rhs.f_part, p.alpha);
  auto i_g = series::rl_integral_on_series(rhs.abel_part, p.alpha);
  auto psi = p.psi_series(y.order());
  auto r = y;
  for (int mu = 0; mu <= y.order(); ++mu)
    r.coef[mu] -= psi.coef[mu] + i_f.coef[mu] + p.lambda * i_g.coef[mu];
  return r;
}

// Residual of the differentiated form
//   D^alpha y - f(.,y) - lambda Abel(g) = 0;
// valid for coefficient indices <= M - alpha*b of the input window.
inline series::FracSeries caputo_form_residual(const ProblemSpec& p, const series::FracSeries& y) {
  auto rhs = detail::rhs_series(p, y);
  auto r = series::caputo_on_series(y, p.alpha);
  for (int mu = 0; mu <= y.order(); ++mu)
    r.coef[mu] -= rhs.f_part.coef[mu] + p.lambda * rhs.abel_part.coef[mu];
  return r;
}

}  // namespace fide::series_solution

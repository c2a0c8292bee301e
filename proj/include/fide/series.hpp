#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "fide/common.hpp"
#include "fide/rational.hpp"
#include "fide/specfun.hpp"

// Truncated fractional power series on the grid {t^(mu/b)}. This is the
// common currency of the series oracle, the manufactured sources and the
// solution evaluation. Every operation truncates to the shortest
// participating length; index shifts drop terms that leave the window.

namespace fide::series {

struct FracSeries {
  int b = 1;                  // grid denominator: coef[mu] multiplies t^(mu/b)
  std::vector<double> coef;   // length M+1

  FracSeries() = default;
  FracSeries(int b_, std::vector<double> c) : b(b_), coef(std::move(c)) {}

  static FracSeries zero(int b, int M) { return FracSeries(b, std::vector<double>(M + 1, 0.0)); }

  // constant series 1 truncated at M
  static FracSeries one(int b, int M) {
    FracSeries s = zero(b, M);
    s.coef[0] = 1.0;
    return s;
  }

  int order() const { return static_cast<int>(coef.size()) - 1; }

  double at(int mu) const {
    return (mu >= 0 && mu <= order()) ? coef[static_cast<std::size_t>(mu)] : 0.0;
  }
};

inline void require_same_grid(const FracSeries& p, const FracSeries& q) {
  if (p.b != q.b)
    throw std::invalid_argument("FracSeries: grid denominators differ; re-grid first");
}

// Index dilation mu -> mu * (new_b / b); new_b must be a multiple of b.
inline FracSeries regrid(const FracSeries& p, int new_b) {
  if (new_b % p.b != 0) throw std::invalid_argument("regrid: new grid must refine the old one");
  int f = new_b / p.b;
  FracSeries r = FracSeries::zero(new_b, p.order() * f);
  for (int mu = 0; mu <= p.order(); ++mu) r.coef[static_cast<std::size_t>(mu) * f] = p.coef[mu];
  return r;
}

inline FracSeries series_add(const FracSeries& p, const FracSeries& q) {
  require_same_grid(p, q);
  int M = std::min(p.order(), q.order());
  FracSeries r = FracSeries::zero(p.b, M);
  for (int mu = 0; mu <= M; ++mu) r.coef[mu] = p.coef[mu] + q.coef[mu];
  return r;
}

inline FracSeries series_scale(const FracSeries& p, double c) {
  FracSeries r = p;
  for (double& v : r.coef) v *= c;
  return r;
}

// Cauchy convolution on the index mu, truncated at min(M_p, M_q). Terms are
// paired symmetrically so that p*q and q*p agree to the last bit.
inline FracSeries series_mul(const FracSeries& p, const FracSeries& q) {
  require_same_grid(p, q);
  int M = std::min(p.order(), q.order());
  FracSeries r = FracSeries::zero(p.b, M);
  for (int m = 0; m <= M; ++m) {
    double acc = 0.0;
    for (int i = 0; 2 * i < m; ++i) acc += p.coef[i] * q.coef[m - i] + p.coef[m - i] * q.coef[i];
    if (m % 2 == 0) acc += p.coef[m / 2] * q.coef[m / 2];
    r.coef[m] = acc;
  }
  return r;
}

inline FracSeries series_pow(const FracSeries& p, int theta) {
  if (theta < 0) throw std::invalid_argument("series_pow: requires theta >= 0");
  if (theta == 0) return FracSeries::one(p.b, p.order());
  FracSeries r = p;
  for (int k = 1; k < theta; ++k) r = series_mul(r, p);
  return r;
}

// Shift all indices by +shift (multiplication by t^(shift/b)); terms pushed
// beyond the truncation window are dropped.
inline FracSeries series_shift(const FracSeries& p, int shift) {
  FracSeries r = FracSeries::zero(p.b, p.order());
  for (int mu = 0; mu + shift <= p.order(); ++mu)
    if (mu + shift >= 0) r.coef[mu + shift] = p.coef[mu];
  return r;
}

// Composition sum_theta d_theta * p^theta for p with zero constant term.
// The zero constant term makes the computation triangular: powers beyond
// the truncation order cannot touch retained indices.
inline FracSeries compose_analytic(const std::vector<double>& outer, const FracSeries& p) {
  if (!p.coef.empty() && p.coef[0] != 0.0)
    throw std::invalid_argument("compose_analytic: inner series must have zero constant term");
  int M = p.order();
  FracSeries r = FracSeries::zero(p.b, M);
  if (!outer.empty()) r.coef[0] = outer[0];
  FracSeries pw = FracSeries::one(p.b, M);
  int theta_max = std::min<int>(static_cast<int>(outer.size()) - 1, M);
  for (int theta = 1; theta <= theta_max; ++theta) {
    pw = series_mul(pw, p);
    double d = outer[theta];
    if (d == 0.0) continue;
    for (int mu = 0; mu <= M; ++mu) r.coef[mu] += d * pw.coef[mu];
  }
  return r;
}

// Caputo derivative term by term: t^tau -> Gamma(tau+1)/Gamma(tau-alpha+1) t^(tau-alpha).
// The constant term and the integer powers t^k, k <= ceil(alpha)-1, are
// annihilated (they form the initial polynomial). Surviving terms whose
// exponent drops below zero are not representable and are rejected.
inline FracSeries caputo_on_series(const FracSeries& p, const RationalOrder& alpha) {
  long ab = alpha.grid_index(p.b);
  long ca = alpha.ceil();
  FracSeries r = FracSeries::zero(p.b, p.order());
  for (int mu = 0; mu <= p.order(); ++mu) {
    double c = p.coef[mu];
    if (c == 0.0) continue;
    if (mu == 0) continue;
    if (mu % p.b == 0 && mu / p.b <= ca - 1) continue;  // initial polynomial
    if (mu < ab)
      throw std::invalid_argument("caputo_on_series: surviving exponent below derivative order");
    double tau = static_cast<double>(mu) / p.b;
    r.coef[mu - ab] += c * specfun::gamma_ratio(tau + 1.0, tau - alpha.value() + 1.0);
  }
  return r;
}

// Riemann-Liouville integral term by term:
// t^tau -> Gamma(tau+1)/Gamma(tau+alpha+1) t^(tau+alpha); overflowing
// indices are dropped (documented contract).
inline FracSeries rl_integral_on_series(const FracSeries& p, const RationalOrder& alpha) {
  long ab = alpha.grid_index(p.b);
  FracSeries r = FracSeries::zero(p.b, p.order());
  for (int mu = 0; mu + ab <= p.order(); ++mu) {
    double c = p.coef[mu];
    if (c == 0.0) continue;
    double tau = static_cast<double>(mu) / p.b;
    r.coef[mu + ab] += c * specfun::gamma_ratio(tau + 1.0, tau + alpha.value() + 1.0);
  }
  return r;
}

// Abel integral int_0^t (t-s)^(beta-1) s^tau ds
//   = Gamma(beta)Gamma(tau+1)/Gamma(tau+beta+1) t^(tau+beta), term by term.
inline FracSeries abel_integral_on_series(const FracSeries& p, const RationalOrder& beta) {
  long bb = beta.grid_index(p.b);
  double gb = specfun::gamma_fn(beta.value());
  FracSeries r = FracSeries::zero(p.b, p.order());
  for (int mu = 0; mu + bb <= p.order(); ++mu) {
    double c = p.coef[mu];
    if (c == 0.0) continue;
    double tau = static_cast<double>(mu) / p.b;
    r.coef[mu + bb] += c * gb * specfun::gamma_ratio(tau + 1.0, tau + beta.value() + 1.0);
  }
  return r;
}

// Evaluate via u = t^(1/b) and Horner on u.
inline double series_eval(const FracSeries& p, double t) {
  if (t < 0.0) throw std::invalid_argument("series_eval: requires t >= 0");
  double u = std::pow(t, 1.0 / p.b);
  double acc = 0.0;
  for (int mu = p.order(); mu >= 0; --mu) acc = acc * u + p.coef[mu];
  return acc;
}

}  // namespace fide::series

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "fide/common.hpp"

// Special functions backing the operational matrices (Gamma ratios) and the
// benchmark problems (Mittag-Leffler, Bessel, generalized hypergeometric).
// Everything here is a pure function; series are truncated by a relative
// tail bound of 1e-17 with a hard cap, and hitting the cap is an error.

namespace fide::specfun {

inline constexpr double kSeriesTailBound = 1e-17;
inline constexpr std::size_t kSeriesCap = 100000;
inline constexpr double kPoleTol = 1e-12;

inline bool near_pole(double x) {
  if (x > 0.5) return false;
  return std::abs(x - std::round(x)) < kPoleTol;
}

// Argument of Gamma, validated away from the non-positive integers.
struct GammaArg {
  double x;
  explicit GammaArg(double v) : x(v) {
    if (!std::isfinite(v)) throw std::domain_error("gamma: non-finite argument");
    if (near_pole(v)) throw std::domain_error("gamma: argument within 1e-12 of a pole");
  }
};

namespace detail {

// Lanczos approximation, g = 7, 9 terms.
inline constexpr double kLanczosG = 7.0;
inline constexpr double kLanczos[9] = {
    0.99999999999980993,  676.5203681218851,      -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,    12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6,  1.5056327351493116e-7,
};

inline double lanczos_log_gamma_pos(double z) {
  double x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z - 1.0 + i);
  double t = z + kLanczosG - 0.5;
  return 0.5 * std::log(2.0 * M_PI) + (z - 0.5) * std::log(t) - t + std::log(x);
}

// Gamma for z >= 0.5 (no reflection). The factored form overflows its
// pow intermediate near z ~ 143, well before Gamma itself leaves range,
// so large arguments go through the log form.
inline double lanczos_gamma_pos(double z) {
  if (z > 100.0) return std::exp(lanczos_log_gamma_pos(z));
  double x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z - 1.0 + i);
  double t = z + kLanczosG - 0.5;
  return std::sqrt(2.0 * M_PI) * std::pow(t, z - 0.5) * std::exp(-t) * x;
}

}  // namespace detail

// Gamma(x) on the real line away from poles. Signed for negative arguments.
inline double gamma_fn(double x) {
  GammaArg arg(x);
  if (x >= 0.5) return detail::lanczos_gamma_pos(x);
  // reflection: Gamma(x) = pi / (sin(pi x) Gamma(1-x))
  return M_PI / (std::sin(M_PI * x) * detail::lanczos_gamma_pos(1.0 - x));
}

// log|Gamma(x)| for x > 0.
inline double log_gamma(double x) {
  GammaArg arg(x);
  if (x <= 0.0) throw std::domain_error("log_gamma: requires x > 0");
  return detail::lanczos_log_gamma_pos(x);
}

// Gamma(a)/Gamma(b). Direct division at moderate arguments, log-space
// otherwise so that arguments growing linearly in the truncation degree
// (up to ~1000) do not overflow. A pole of Gamma(b) maps to a zero of the
// ratio (the reciprocal Gamma is entire).
inline double gamma_ratio(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw std::domain_error("gamma_ratio: non-finite argument");
  bool pa = near_pole(a), pb = near_pole(b);
  if (pa) throw std::domain_error("gamma_ratio: numerator at a Gamma pole");
  if (pb) return 0.0;
  if (std::abs(a) <= 150.0 && std::abs(b) <= 150.0) return gamma_fn(a) / gamma_fn(b);
  if (a <= 0.0 || b <= 0.0)
    throw std::domain_error("gamma_ratio: large negative arguments unsupported");
  return std::exp(detail::lanczos_log_gamma_pos(a) - detail::lanczos_log_gamma_pos(b));
}

// Mittag-Leffler E_c(t) = sum_k t^k / Gamma(c k + 1), c > 0.
inline double mittag_leffler(double c, double t) {
  if (!(c > 0.0)) throw std::domain_error("mittag_leffler: requires c > 0");
  double sum = 0.0, term = 1.0;
  for (std::size_t k = 0; k < kSeriesCap; ++k) {
    sum += term;
    term *= t * gamma_ratio(c * k + 1.0, c * (k + 1) + 1.0);
    if (std::abs(term) <= kSeriesTailBound * std::abs(sum)) return sum;
  }
  throw numeric_error("mittag_leffler: series cap hit before convergence");
}

// Bessel function of the first kind, integer order d >= 0, ascending series.
inline double bessel_j(int d, double t) {
  if (d < 0) throw std::domain_error("bessel_j: requires d >= 0");
  double half = 0.5 * t;
  double term = 1.0;
  for (int i = 1; i <= d; ++i) term *= half / i;  // (t/2)^d / d!
  double sum = 0.0;
  double h2 = half * half;
  for (std::size_t k = 0; k < kSeriesCap; ++k) {
    sum += term;
    term *= -h2 / ((k + 1.0) * (k + 1.0 + d));
    if (std::abs(term) <= kSeriesTailBound * (std::abs(sum) + 1e-300)) return sum;
  }
  throw numeric_error("bessel_j: series cap hit before convergence");
}

// Generalized hypergeometric pFq with equally long parameter lists
// (the entire pFp case), truncated Pochhammer series.
inline double pfq(const std::vector<double>& a, const std::vector<double>& b, double t) {
  if (a.size() != b.size())
    throw std::domain_error("pfq: parameter lists must have equal length");
  for (double bi : b)
    if (near_pole(bi)) throw std::domain_error("pfq: lower parameter at a non-positive integer");
  double sum = 0.0, term = 1.0;
  for (std::size_t k = 0; k < kSeriesCap; ++k) {
    sum += term;
    double num = 1.0, den = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      num *= a[i] + static_cast<double>(k);
      den *= b[i] + static_cast<double>(k);
    }
    term *= num / den * t / (static_cast<double>(k) + 1.0);
    if (std::abs(term) <= kSeriesTailBound * (std::abs(sum) + 1e-300)) return sum;
  }
  throw numeric_error("pfq: series cap hit before convergence");
}

}  // namespace fide::specfun

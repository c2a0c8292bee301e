#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fide/common.hpp"
#include "fide/rational.hpp"
#include "fide/specfun.hpp"

// Jacobi polynomials, generalized Jacobi polynomials (integer indices <= -1
// via boundary factors), their fractional counterparts under the map
// s = 2 (t/T)^gamma - 1, Gauss-Jacobi quadrature, and the lower-triangular
// change of basis from the trial family to the shifted monomials
// {t^alpha, t^(alpha+gamma), ...}.

namespace fide::basis {

// rho_hat/rho_tilde bookkeeping for generalized indices.
struct JacobiParams {
  double rho = 0.0;
  double eta = 0.0;

  double rho_hat() const { return rho <= -1.0 ? -rho : 0.0; }
  double eta_hat() const { return eta <= -1.0 ? -eta : 0.0; }
  double rho_tilde() const { return rho <= -1.0 ? -rho : rho; }
  double eta_tilde() const { return eta <= -1.0 ? -eta : eta; }
  double kappa() const { return rho_hat() + eta_hat(); }
};

// Classical Jacobi polynomial J_n^(rho,eta)(s), rho, eta > -1, by the
// standard three-term recurrence.
inline double jacobi_eval(int n, double rho, double eta, double s) {
  if (n < 0) throw std::invalid_argument("jacobi_eval: requires n >= 0");
  if (rho <= -1.0 || eta <= -1.0)
    throw std::invalid_argument("jacobi_eval: requires rho, eta > -1");
  if (n == 0) return 1.0;
  double p0 = 1.0;
  double p1 = 0.5 * (rho + eta + 2.0) * s + 0.5 * (rho - eta);
  for (int k = 1; k < n; ++k) {
    double a = 2.0 * (k + 1.0) * (k + rho + eta + 1.0) * (2.0 * k + rho + eta);
    double b = (2.0 * k + rho + eta + 1.0) * (rho * rho - eta * eta);
    double c = (2.0 * k + rho + eta) * (2.0 * k + rho + eta + 1.0) * (2.0 * k + rho + eta + 2.0);
    double d = 2.0 * (k + rho) * (k + eta) * (2.0 * k + rho + eta + 2.0);
    double p2 = ((b + c * s) * p1 - d * p0) / a;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

// d/ds J_n^(rho,eta)(s) = (n+rho+eta+1)/2 * J_{n-1}^(rho+1,eta+1)(s)
inline double jacobi_deriv(int n, double rho, double eta, double s) {
  if (n == 0) return 0.0;
  return 0.5 * (n + rho + eta + 1.0) * jacobi_eval(n - 1, rho + 1.0, eta + 1.0, s);
}

// ||J_n^(rho,eta)||^2 under (1-s)^rho (1+s)^eta, in log space so truncation
// degrees in the hundreds stay representable.
inline double jacobi_norm(int n, double rho, double eta) {
  if (rho <= -1.0 || eta <= -1.0)
    throw std::invalid_argument("jacobi_norm: requires rho, eta > -1");
  double ln = (rho + eta + 1.0) * std::log(2.0) + specfun::log_gamma(n + rho + 1.0) +
              specfun::log_gamma(n + eta + 1.0) - std::log(2.0 * n + rho + eta + 1.0) -
              specfun::log_gamma(n + 1.0) - specfun::log_gamma(n + rho + eta + 1.0);
  return std::exp(ln);
}

// Monomial coefficients of the fractional Jacobi function:
// J_n^(rho~,eta~,gamma)(t) = sum_j Upsilon_j / T^(gamma j) t^(gamma j).
inline double upsilon(int j, double rho_t, double eta_t, int n_t) {
  if (j < 0 || j > n_t) throw std::invalid_argument("upsilon: requires 0 <= j <= n");
  double ln = specfun::log_gamma(n_t + eta_t + 1.0) +
              specfun::log_gamma(n_t + rho_t + eta_t + j + 1.0) -
              specfun::log_gamma(eta_t + j + 1.0) - specfun::log_gamma(j + 1.0) -
              specfun::log_gamma(n_t + rho_t + eta_t + 1.0) - specfun::log_gamma(n_t - j + 1.0);
  double v = std::exp(ln);
  return ((n_t - j) % 2 == 0) ? v : -v;
}

// Trial/test family description for one solve: trial functions are the
// FGJFs with indices (0, -alpha b) starting at k = alpha b (they satisfy the
// homogeneous initial conditions), test functions the FJFs with (0, alpha b).
struct FGJFBasis {
  RationalOrder alpha;
  int b = 2;
  double T = 1.0;
  int N = 0;
  int alpha_b = 1;
  int Nhat = 0;

  FGJFBasis(const RationalOrder& a, int b_, double T_, int N_) : alpha(a), b(b_), T(T_), N(N_) {
    alpha_b = static_cast<int>(a.grid_index(b_));
    if (N_ < alpha_b) throw std::invalid_argument("FGJFBasis: requires N >= alpha*b");
    if (!(T_ > 0.0)) throw std::invalid_argument("FGJFBasis: requires T > 0");
    Nhat = N_ - alpha_b;
  }

  double gamma() const { return 1.0 / b; }
  double map_s(double t) const { return 2.0 * std::pow(t / T, gamma()) - 1.0; }
};

// Trial function J-bar_k^(0,-alpha b,gamma)(t) = (2^ab / T^alpha) t^alpha
// J_{k-ab}^(0,ab,gamma)(t), k >= alpha b.
inline double fgjf_eval(int k, const FGJFBasis& basis, double t) {
  if (k < basis.alpha_b) throw std::invalid_argument("fgjf_eval: requires k >= alpha*b");
  double a = basis.alpha.value();
  double scale = std::pow(2.0, basis.alpha_b) / std::pow(basis.T, a);
  return scale * std::pow(t, a) *
         jacobi_eval(k - basis.alpha_b, 0.0, static_cast<double>(basis.alpha_b), basis.map_s(t));
}

// Test function J_k^(0,alpha b,gamma)(t).
inline double fjf_test_eval(int k, const FGJFBasis& basis, double t) {
  return jacobi_eval(k, 0.0, static_cast<double>(basis.alpha_b), basis.map_s(t));
}

// Lower-triangular change of basis: row k holds the coefficients of trial
// function k + alpha b over {t^alpha, t^(alpha+gamma), ..., t^(N gamma)}.
struct MonomialBasisMatrix {
  int Nhat = 0;
  std::vector<double> a;  // (Nhat+1)^2 row-major

  double at(int k, int j) const { return a[static_cast<std::size_t>(k) * (Nhat + 1) + j]; }
  double& at(int k, int j) { return a[static_cast<std::size_t>(k) * (Nhat + 1) + j]; }
};

inline MonomialBasisMatrix fgjf_monomial_matrix(const FGJFBasis& basis) {
  MonomialBasisMatrix m;
  m.Nhat = basis.Nhat;
  m.a.assign(static_cast<std::size_t>(basis.Nhat + 1) * (basis.Nhat + 1), 0.0);
  const long double eta = basis.alpha_b;
  const long double scale =
      std::pow(2.0L, static_cast<long double>(basis.alpha_b)) /
      std::pow(static_cast<long double>(basis.T), static_cast<long double>(basis.alpha.value()));
  const long double uT = std::pow(static_cast<long double>(basis.T), 1.0L / basis.b);
  for (int k = 0; k <= basis.Nhat; ++k) {
    // Upsilon_0^(0,eta,k) = (-1)^k binom(k+eta, k); successive entries by
    // the exact ratio -(k+eta+j+1)(k-j) / ((eta+j+1)(j+1) T^gamma),
    // which keeps the heavily cancelling rows accurate to extended precision.
    long double up = (k % 2 == 0) ? 1.0L : -1.0L;
    for (int i = 1; i <= k; ++i) up *= (eta + i) / i;
    up *= scale;
    for (int j = 0; j <= k; ++j) {
      if (std::abs(up) > 1e306L)
        throw numeric_error("fgjf_monomial_matrix: entries exceed double range at this degree");
      m.at(k, j) = static_cast<double>(up);
      up *= -((k + eta + j + 1) * static_cast<long double>(k - j)) /
            ((eta + j + 1) * (j + 1) * uT);
    }
  }
  return m;
}

// Solve cbar * J = cbarbar for the trial-family coefficients. The
// triangular system cancels heavily at large degree, so the rows and the
// back-substitution run in extended precision end to end; only the result
// is rounded to double.
inline std::vector<double> monomial_to_fgjf(const FGJFBasis& basis,
                                            const std::vector<double>& cbarbar) {
  const int n = basis.Nhat + 1;
  if (static_cast<int>(cbarbar.size()) != n)
    throw std::invalid_argument("monomial_to_fgjf: coefficient length mismatch");
  const long double eta = basis.alpha_b;
  const long double scale =
      std::pow(2.0L, static_cast<long double>(basis.alpha_b)) /
      std::pow(static_cast<long double>(basis.T), static_cast<long double>(basis.alpha.value()));
  const long double uT = std::pow(static_cast<long double>(basis.T), 1.0L / basis.b);
  std::vector<long double> J(static_cast<std::size_t>(n) * n, 0.0L);
  for (int k = 0; k < n; ++k) {
    long double up = (k % 2 == 0) ? 1.0L : -1.0L;
    for (int i = 1; i <= k; ++i) up *= (eta + i) / i;
    up *= scale;
    for (int j = 0; j <= k; ++j) {
      if (std::abs(up) > 1e306L)
        throw numeric_error("monomial_to_fgjf: entries exceed double range at this degree");
      J[static_cast<std::size_t>(k) * n + j] = up;
      up *= -((k + eta + j + 1) * static_cast<long double>(k - j)) /
            ((eta + j + 1) * (j + 1) * uT);
    }
  }
  std::vector<long double> c(n, 0.0L);
  for (int k = n - 1; k >= 0; --k) {
    long double s = cbarbar[k];
    for (int kp = k + 1; kp < n; ++kp) s -= c[kp] * J[static_cast<std::size_t>(kp) * n + k];
    c[k] = s / J[static_cast<std::size_t>(k) * n + k];
  }
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = static_cast<double>(c[k]);
  return out;
}

// --- Gauss-Jacobi quadrature --------------------------------------------------

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

// Eigenvalues of a symmetric tridiagonal matrix by the implicit QL method
// with Wilkinson shifts; d = diagonal, e = subdiagonal (e[i] couples i,i+1).
inline void tridiagonal_eigenvalues(std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  if (n <= 1) return;
  e.resize(n, 0.0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-15 * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw numeric_error("tridiagonal_eigenvalues: QL did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace detail

// n-point rule for the weight (1-s)^rho (1+s)^eta on [-1,1]: nodes from the
// symmetric-tridiagonal form of the three-term recurrence, polished by
// Newton iteration on J_n, weights through the Christoffel function of the
// orthonormal family.
inline QuadratureRule gauss_jacobi_rule(int n, double rho, double eta) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi_rule: requires n >= 1");
  if (rho <= -1.0 || eta <= -1.0)
    throw std::invalid_argument("gauss_jacobi_rule: requires rho, eta > -1");

  // monic recurrence y_{k+1} = (x - a_k) y_k - b_k y_{k-1}
  auto rec_a = [&](int k) {
    if (k == 0) return (eta - rho) / (rho + eta + 2.0);
    double q = 2.0 * k + rho + eta;
    return (eta * eta - rho * rho) / (q * (q + 2.0));
  };
  auto rec_b = [&](int k) {  // k >= 1
    if (k == 1)
      return 4.0 * (1.0 + rho) * (1.0 + eta) /
             ((2.0 + rho + eta) * (2.0 + rho + eta) * (3.0 + rho + eta));
    double q = 2.0 * k + rho + eta;
    return 4.0 * k * (k + rho) * (k + eta) * (k + rho + eta) /
           (q * q * (q + 1.0) * (q - 1.0));
  };
  const double mu0 = jacobi_norm(0, rho, eta);

  std::vector<double> d(n), e(n, 0.0);
  for (int k = 0; k < n; ++k) d[k] = rec_a(k);
  for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(rec_b(k));
  detail::tridiagonal_eigenvalues(d, e);
  std::sort(d.begin(), d.end());

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = d[i];
    for (int it = 0; it < 12; ++it) {
      double f = jacobi_eval(n, rho, eta, x);
      double fp = jacobi_deriv(n, rho, eta, x);
      if (fp == 0.0) break;
      double step = f / fp;
      x -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    if (x < -1.0) x = -1.0;
    if (x > 1.0) x = 1.0;
    rule.nodes[i] = x;

    // Christoffel: w = 1 / sum_k p_k(x)^2 over the orthonormal family.
    double pm1 = 0.0, p = 1.0 / std::sqrt(mu0);
    double sum = p * p;
    for (int k = 0; k + 1 < n; ++k) {
      double sb_next = std::sqrt(rec_b(k + 1));
      double sb_prev = (k == 0) ? 0.0 : std::sqrt(rec_b(k));
      double pn = ((x - rec_a(k)) * p - sb_prev * pm1) / sb_next;
      pm1 = p;
      p = pn;
      sum += p * p;
    }
    rule.weights[i] = 1.0 / sum;
  }
  return rule;
}

}  // namespace fide::basis

#pragma once

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "fide/common.hpp"
#include "fide/problem.hpp"
#include "fide/specfun.hpp"

// Truncated operational objects of the Petrov-Galerkin discretization:
// the index-shift matrix Psi, the Caputo diagonal chi, the kernel moments
// A_nu^m, the source row K, the Toeplitz source matrices F_theta, the
// kernel matrices H_theta, the multiplication matrix Q built from the
// solved coefficients, and the combined matrix Pi. All matrices are dense
// at desk scale; the zero patterns below are exact, not approximate.

namespace fide::opmat {

struct Matrix {
  int n = 0;  // order n x n
  std::vector<double> a;

  Matrix() = default;
  explicit Matrix(int order) : n(order), a(static_cast<std::size_t>(order) * order, 0.0) {}

  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
};

inline Matrix matmul(const Matrix& x, const Matrix& y) {
  Matrix r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      double v = x.at(i, k);
      if (v == 0.0) continue;
      for (int j = 0; j < x.n; ++j) r.at(i, j) += v * y.at(k, j);
    }
  return r;
}

inline Matrix identity(int n) {
  Matrix r(n);
  for (int i = 0; i < n; ++i) r.at(i, i) = 1.0;
  return r;
}

inline Matrix matpow(const Matrix& x, int e) {
  Matrix r = identity(x.n);
  for (int k = 0; k < e; ++k) r = matmul(r, x);
  return r;
}

inline std::vector<double> row_times(const std::vector<double>& v, const Matrix& m) {
  std::vector<double> r(m.n, 0.0);
  for (int i = 0; i < m.n; ++i) {
    double vi = v[i];
    if (vi == 0.0) continue;
    for (int j = 0; j < m.n; ++j) r[j] += vi * m.at(i, j);
  }
  return r;
}

// [Psi]_{i,j} = 1 iff j = i + alpha b.
inline Matrix build_psi(int Nhat, int alpha_b) {
  if (alpha_b < 1 || Nhat < alpha_b)
    throw std::invalid_argument("build_psi: requires Nhat >= alpha*b >= 1");
  Matrix m(Nhat + 1);
  for (int i = 0; i + alpha_b <= Nhat; ++i) m.at(i, i + alpha_b) = 1.0;
  return m;
}

// chi[i] = Gamma(alpha + gamma i + 1) / Gamma(gamma i + 1), the Caputo
// image of the shifted monomials.
inline std::vector<double> build_chi(int Nhat, double alpha, double gamma) {
  std::vector<double> d(Nhat + 1);
  for (int i = 0; i <= Nhat; ++i)
    d[i] = specfun::gamma_ratio(alpha + gamma * i + 1.0, gamma * i + 1.0);
  return d;
}

// A_nu^m = Gamma(beta) Gamma((nu+m) gamma + 1) / Gamma((nu+m) gamma + beta + 1):
// the Abel integral of s^((nu+m) gamma) over [0, t] divided by t^((nu+m) gamma + beta).
inline double coeff_A(int nu, int m, double beta, double gamma) {
  if (nu < 0 || m < 0) throw std::invalid_argument("coeff_A: requires nu, m >= 0");
  double x = (static_cast<double>(nu) + m) * gamma;
  return specfun::gamma_fn(beta) * specfun::gamma_ratio(x + 1.0, x + beta + 1.0);
}

// K[j] = sum over theta = 0 kernel entries with mu + nu + beta b = j of
// g_{mu,nu,0} A_nu^0; zero for j < beta b.
inline std::vector<double> build_K(const ProblemSpec& p, int Nhat) {
  std::vector<double> K(Nhat + 1, 0.0);
  int bb = p.beta_b();
  double bt = p.beta.value(), gm = p.grid_gamma();
  for (const auto& e : p.g) {
    if (e.theta != 0) continue;
    int j = e.mu + e.nu + bb;
    if (j <= Nhat) K[j] += e.value * coeff_A(e.nu, 0, bt, gm);
  }
  return K;
}

// [F_theta]_{i,j} = f_{j-i,theta} for i <= j (upper-triangular Toeplitz).
inline Matrix build_F(const ProblemSpec& p, int theta, int Nhat) {
  Matrix m(Nhat + 1);
  for (const auto& e : p.f) {
    if (e.theta != theta) continue;
    for (int i = 0; i + e.mu <= Nhat; ++i) m.at(i, i + e.mu) += e.value;
  }
  return m;
}

// [H_theta]_{i,j} = sum_nu g_{nu, j-i-beta b-nu, theta} A^i_{j-i-beta b-nu}
// for i <= j - beta b; note the row dependence through A^i.
inline Matrix build_H(const ProblemSpec& p, int theta, int Nhat) {
  Matrix m(Nhat + 1);
  int bb = p.beta_b();
  double bt = p.beta.value(), gm = p.grid_gamma();
  for (const auto& e : p.g) {
    if (e.theta != theta) continue;
    for (int i = 0; i + e.mu + e.nu + bb <= Nhat; ++i)
      m.at(i, i + e.mu + e.nu + bb) += e.value * coeff_A(e.nu, i, bt, gm);
  }
  return m;
}

// [Q]_{m,r} = cbarbar[r - m - alpha b] when r - m >= alpha b, else 0: the
// banded upper-triangular Toeplitz matrix representing multiplication by
// the current approximation.
inline Matrix build_Q(const std::vector<double>& cbarbar, int Nhat, int alpha_b) {
  if (static_cast<int>(cbarbar.size()) != Nhat + 1)
    throw std::invalid_argument("build_Q: coefficient row must have Nhat+1 entries");
  Matrix q(Nhat + 1);
  for (int m = 0; m <= Nhat; ++m)
    for (int r = m + alpha_b; r <= Nhat; ++r) q.at(m, r) = cbarbar[r - m - alpha_b];
  return q;
}

// Pi = Psi (Q^{theta-1}) B, B = F_theta + lambda H_theta, assembled from the
// component formula [Pi]_{i,j} = sum_r q_r [B]_{i+r+theta alpha b, j} where
// q_r is the leading-row band of Q^{theta-1}. The band equals the monomial
// coefficient row of y_N^{theta-1} starting at index (theta-1) alpha b.
inline Matrix build_Pi(int theta, const std::vector<double>& q_band, const Matrix& B,
                       int alpha_b) {
  if (theta < 1) throw std::invalid_argument("build_Pi: requires theta >= 1");
  int Nhat = B.n - 1;
  Matrix pi(Nhat + 1);
  int tab = theta * alpha_b;
  for (int i = 0; i + tab <= Nhat; ++i)
    for (int j = i + tab; j <= Nhat; ++j) {
      double s = 0.0;
      for (int r = 0; r <= j - i - tab; ++r) {
        double q = (r < static_cast<int>(q_band.size())) ? q_band[r] : 0.0;
        if (q != 0.0) s += q * B.at(i + r + tab, j);
      }
      pi.at(i, j) = s;
    }
  return pi;
}

// Leading-row band of Q^{theta-1}: q_band[r] = [Q^{theta-1}]_{0, (theta-1) alpha b + r}.
inline std::vector<double> q_band_from_power(const Matrix& qpow, int theta, int alpha_b) {
  int Nhat = qpow.n - 1;
  int off = (theta - 1) * alpha_b;
  std::vector<double> band;
  for (int r = 0; off + r <= Nhat; ++r) band.push_back(qpow.at(0, off + r));
  return band;
}

// The full truncated operational set for one problem and truncation order.
struct OperationalSet {
  int Nhat = 0;
  Matrix psi;
  std::vector<double> chi;
  std::vector<double> K;
  std::vector<double> f0;           // theta = 0 source coefficients
  std::map<int, Matrix> F;          // theta >= 1
  std::map<int, Matrix> H;          // theta >= 1
  std::set<int> theta_support;      // nonlinear powers present in f or g
};

inline OperationalSet build_operational_set(const ProblemSpec& p, int Nhat) {
  OperationalSet s;
  s.Nhat = Nhat;
  int ab = p.alpha_b();
  s.psi = (Nhat >= ab) ? build_psi(Nhat, ab) : Matrix(Nhat + 1);
  s.chi = build_chi(Nhat, p.alpha.value(), p.grid_gamma());
  s.K = build_K(p, Nhat);
  s.f0.assign(Nhat + 1, 0.0);
  for (const auto& e : p.f) {
    if (e.theta == 0) {
      if (e.mu <= Nhat) s.f0[e.mu] += e.value;
    } else {
      s.theta_support.insert(e.theta);
    }
  }
  for (const auto& e : p.g)
    if (e.theta >= 1) s.theta_support.insert(e.theta);
  for (int theta : s.theta_support) {
    s.F.emplace(theta, build_F(p, theta, Nhat));
    s.H.emplace(theta, build_H(p, theta, Nhat));
  }
  return s;
}

}  // namespace fide::opmat

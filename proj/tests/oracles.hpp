// Reference computations for the unit tests. They avoid the library's
// algorithms: dense solves instead of recursions, eigen-decompositions
// instead of closed forms, long double series instead of the double code.
#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "fading/process_models.hpp"
#include "fading/types.hpp"

namespace oracle {

using fading::CMatrix;
using fading::Complex;
using fading::CVector;

inline long double ei_neg_series(long double s) {
  long double term = 1.0L;
  long double sum = 0.0L;
  for (int n = 1; n < 400; ++n) {
    term *= -s / n;
    sum += term / n;
    if (std::fabs(term / n) < 1e-24L) break;
  }
  return 0.57721566490153286060651209008240243L + std::log(s) + sum;
}

// d*^2 is the largest eigenvalue of K^{-1/2} d d^H K^{-1/2}: with w = conj(x)
// the quotient is |w^H d| / sqrt(w^H K w).
inline double d_star_eigen(const CVector& d, const CMatrix& k) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(k);
  const CMatrix inv_sqrt = es.operatorInverseSqrt();
  const CVector v = inv_sqrt * d;
  Eigen::SelfAdjointEigenSolver<CMatrix> top(v * v.adjoint());
  return std::sqrt(std::max(0.0, top.eigenvalues().maxCoeff()));
}

// Order-p prediction error from the Schur complement of the Toeplitz matrix
// of (X_0, X_{-1}, ..., X_{-p}).
inline double toeplitz_prediction_error(const std::vector<Complex>& c, int p) {
  const int n = p + 1;
  CMatrix t(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // Cov(X_{-i}, X_{-j}) = E[X_{-i} conj(X_{-j})] = c(j - i).
      const int lag = j - i;
      t(i, j) = lag >= 0 ? c[lag] : std::conj(c[-lag]);
    }
  }
  if (p == 0) return t(0, 0).real();
  const CMatrix past = t.bottomRightCorner(p, p);
  const CVector cross = t.block(0, 1, 1, p).transpose();
  const Complex reduction = (cross.transpose() * past.fullPivLu().solve(cross.conjugate()))(0, 0);
  return (t(0, 0) - reduction).real();
}

// Order-p matrix prediction error covariance by a dense block solve.
// lags[k] = E[X_{t+k} X_t^H].
inline CMatrix block_toeplitz_sigma(const std::vector<CMatrix>& lags, int p) {
  const int m = static_cast<int>(lags[0].rows());
  if (p == 0) return lags[0];
  CMatrix past(m * p, m * p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      // Cov(X_{-1-i}, X_{-1-j}) = C(j - i).
      const int lag = j - i;
      past.block(m * i, m * j, m, m) = lag >= 0 ? lags[lag] : CMatrix(lags[-lag].adjoint());
    }
  }
  CMatrix cross(m, m * p);
  for (int j = 0; j < p; ++j) {
    cross.block(0, m * j, m, m) = lags[j + 1];  // Cov(X_0, X_{-1-j})
  }
  return lags[0] - cross * past.fullPivLu().solve(CMatrix(cross.adjoint()));
}

// K from the truncated series sum_k Phi^k Q_state Phi^k^H in companion form.
inline CMatrix stationary_covariance_series(const std::vector<CMatrix>& ar, const CMatrix& q,
                                            int terms = 4000) {
  const int m = static_cast<int>(q.rows());
  const int p = static_cast<int>(ar.size());
  if (p == 0) return q;
  CMatrix phi = CMatrix::Zero(m * p, m * p);
  for (int i = 0; i < p; ++i) phi.block(0, m * i, m, m) = ar[i];
  if (p > 1) phi.block(m, 0, m * (p - 1), m * (p - 1)).setIdentity();
  CMatrix qs = CMatrix::Zero(m * p, m * p);
  qs.topLeftCorner(m, m) = q;
  CMatrix sum = CMatrix::Zero(m * p, m * p);
  CMatrix power = CMatrix::Identity(m * p, m * p);
  for (int k = 0; k < terms; ++k) {
    sum += power * qs * power.adjoint();
    power = phi * power;
  }
  return sum.topLeftCorner(m, m);
}

// Sample lag-k autocovariance of a scalar sequence, c(k) = E[g_{t+k} conj(g_t)].
inline Complex empirical_autocovariance(const std::vector<Complex>& g, Complex mean, int k) {
  Complex sum = 0.0;
  const std::size_t n = g.size() - static_cast<std::size_t>(k);
  for (std::size_t t = 0; t < n; ++t) {
    sum += (g[t + k] - mean) * std::conj(g[t] - mean);
  }
  return sum / static_cast<double>(n);
}

}  // namespace oracle

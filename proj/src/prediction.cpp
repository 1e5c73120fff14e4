#include "fading/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fading/errors.hpp"

namespace fading {
namespace {

constexpr double kSingularRatio = 1e-15;

}  // namespace

double szego_prediction_error(const std::function<double(double)>& spectral_density,
                              std::size_t nodes) {
  if (nodes < 2048) {
    throw PreconditionError("Szego quadrature needs at least 2048 nodes");
  }
  double sum = 0.0;
  const double step = 2.0 * kPi / static_cast<double>(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    const double lambda = -kPi + step * static_cast<double>(j);
    const double s = spectral_density(lambda);
    if (!std::isfinite(s) || s <= 0.0) {
      throw RegularityError("spectral density is not strictly positive at lambda = " +
                            std::to_string(lambda));
    }
    sum += std::log(s);
  }
  return std::exp(sum / static_cast<double>(nodes));
}

PredictionResult levinson_prediction_error(std::span<const Complex> c) {
  if (c.empty()) {
    throw PreconditionError("autocovariance sequence is empty");
  }
  const double c0 = c[0].real();
  if (!(c0 > 0.0) || std::abs(c[0].imag()) > 1e-10 * std::abs(c0)) {
    throw IllPosedCovarianceError("c(0) must be real and positive");
  }
  const std::size_t order = c.size() - 1;
  PredictionResult result;
  result.error_by_order.reserve(order + 1);
  result.error_by_order.push_back(c0);

  std::vector<Complex> a;
  std::vector<Complex> next;
  a.reserve(order);
  double error = c0;
  for (std::size_t m = 0; m < order; ++m) {
    Complex acc = c[m + 1];
    for (std::size_t j = 1; j <= m; ++j) {
      acc -= a[j - 1] * c[m + 1 - j];
    }
    const Complex k = acc / error;
    next.assign(m + 1, Complex(0.0));
    for (std::size_t j = 1; j <= m; ++j) {
      next[j - 1] = a[j - 1] - k * std::conj(a[m - j]);
    }
    next[m] = k;
    a.swap(next);
    error *= 1.0 - std::norm(k);
    if (!(error > kSingularRatio * c0)) {
      throw IllPosedCovarianceError("Toeplitz autocovariance is not positive definite at order " +
                                    std::to_string(m + 1));
    }
    result.error_by_order.push_back(error);
  }
  result.error_variance = error;
  result.order_used = order;
  result.convergence_gap =
      order == 0 ? 0.0 : std::abs(result.error_by_order[order] - result.error_by_order[order - 1]);
  return result;
}

MatrixPredictionResult block_levinson_sigma(std::span<const CMatrix> r) {
  if (r.empty()) {
    throw PreconditionError("matrix autocovariance sequence is empty");
  }
  const auto nt = r[0].rows();
  const double scale = r[0].norm();
  if ((r[0] - r[0].adjoint()).norm() > 1e-10 * (1.0 + scale)) {
    throw IllPosedCovarianceError("C(0) is not Hermitian");
  }
  auto require_pd = [&](const CMatrix& m, std::size_t order) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    if (!(eig.eigenvalues().minCoeff() > kSingularRatio * scale)) {
      throw IllPosedCovarianceError(
          "block Toeplitz autocovariance is not positive definite at order " +
          std::to_string(order));
    }
  };
  require_pd(r[0], 0);

  const std::size_t order = r.size() - 1;
  std::vector<CMatrix> forward;   // A_1..A_m
  std::vector<CMatrix> backward;  // B_1..B_m
  CMatrix sigma_f = r[0];
  CMatrix sigma_b = r[0];
  CMatrix previous = sigma_f;
  for (std::size_t m = 0; m < order; ++m) {
    CMatrix delta = r[m + 1];
    for (std::size_t j = 1; j <= m; ++j) {
      delta.noalias() -= forward[j - 1] * r[m + 1 - j];
    }
    const CMatrix reflect_f = sigma_b.ldlt().solve(delta.adjoint()).adjoint();
    const CMatrix reflect_b = sigma_f.ldlt().solve(delta).adjoint();
    std::vector<CMatrix> next_f(m + 1);
    std::vector<CMatrix> next_b(m + 1);
    for (std::size_t j = 1; j <= m; ++j) {
      next_f[j - 1] = forward[j - 1] - reflect_f * backward[m - j];
      next_b[j - 1] = backward[j - 1] - reflect_b * forward[m - j];
    }
    next_f[m] = reflect_f;
    next_b[m] = reflect_b;
    forward.swap(next_f);
    backward.swap(next_b);
    previous = sigma_f;
    sigma_f -= reflect_f * delta.adjoint();
    sigma_b -= reflect_b * delta;
    sigma_f = 0.5 * (sigma_f + sigma_f.adjoint()).eval();
    sigma_b = 0.5 * (sigma_b + sigma_b.adjoint()).eval();
    require_pd(sigma_f, m + 1);
    require_pd(sigma_b, m + 1);
  }
  MatrixPredictionResult result;
  result.error_covariance = sigma_f;
  result.order_used = order;
  result.convergence_gap = (sigma_f - previous).norm();
  (void)nt;
  return result;
}

PredictionResult converged_prediction_error(
    const std::function<std::vector<Complex>(std::size_t)>& autocovariance,
    const ConvergenceOptions& options) {
  std::size_t order = std::max<std::size_t>(2, std::min(options.initial_order, options.max_order));
  for (;;) {
    const std::vector<Complex> c = autocovariance(order);
    PredictionResult result = levinson_prediction_error(c);
    const double half = result.error_by_order[order / 2];
    result.convergence_gap = std::abs(result.error_variance - half);
    if (result.convergence_gap <= options.tolerance * c[0].real() || order >= options.max_order) {
      return result;
    }
    order = std::min(order * 2, options.max_order);
  }
}

PredictionResult converged_prediction_error(const ScalarProjection& projection,
                                            const ConvergenceOptions& options) {
  return converged_prediction_error(
      [&projection](std::size_t lag) { return projection.autocovariance(lag); }, options);
}

MatrixPredictionResult converged_sigma(const GaussianVectorProcess& process,
                                       const ConvergenceOptions& options) {
  std::size_t order = std::max<std::size_t>(2, std::min(options.initial_order, options.max_order));
  const double scale = process.covariance().norm();
  for (;;) {
    const auto c = process.matrix_autocovariance(order);
    MatrixPredictionResult full = block_levinson_sigma(c);
    const MatrixPredictionResult half =
        block_levinson_sigma(std::span<const CMatrix>(c.data(), order / 2 + 1));
    full.convergence_gap = (full.error_covariance - half.error_covariance).norm();
    if (full.convergence_gap <= options.tolerance * scale || order >= options.max_order) {
      return full;
    }
    order = std::min(order * 2, options.max_order);
  }
}

EigenExtremes eigen_extremes(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw PreconditionError("eigen_extremes needs a non-empty square matrix");
  }
  if ((m - m.adjoint()).norm() > 1e-10 * std::max(1.0, m.norm())) {
    throw PreconditionError("matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(m, Eigen::EigenvaluesOnly);
  const RVector& values = eig.eigenvalues();
  return {values.minCoeff(), values.maxCoeff()};
}

}  // namespace fading

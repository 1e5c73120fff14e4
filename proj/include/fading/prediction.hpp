#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fading/process_models.hpp"
#include "fading/types.hpp"

namespace fading {

/// One-step prediction error of a scalar stationary process.
struct PredictionResult {
  double error_variance = 0.0;
  std::size_t order_used = 0;
  /// |eps_p^2 - eps_{p/2}^2| for converged results, |eps_p^2 - eps_{p-1}^2|
  /// for a single finite-order run.
  double convergence_gap = 0.0;
  /// eps_0^2, ..., eps_p^2 (nonincreasing).
  std::vector<double> error_by_order;
};

/// Prediction error covariance of a vector stationary process.
struct MatrixPredictionResult {
  CMatrix error_covariance;
  std::size_t order_used = 0;
  double convergence_gap = 0.0;
};

struct ConvergenceOptions {
  std::size_t initial_order = 16;
  std::size_t max_order = 4096;
  /// Relative to the lag-0 variance (or its operator norm).
  double tolerance = 1e-9;
};

/// Szego-Kolmogorov: exp of the mean of log S over [-pi, pi), trapezoidal
/// rule on `nodes` equispaced points (at least 2048). Throws RegularityError
/// if S is not strictly positive and finite at every node.
double szego_prediction_error(const std::function<double(double)>& spectral_density,
                              std::size_t nodes = 4096);

/// Durbin-Levinson recursion on c(0..p); eps_p^2 with the whole sequence.
/// Throws IllPosedCovarianceError when the Toeplitz matrix is not PD.
PredictionResult levinson_prediction_error(std::span<const Complex> autocovariance);

/// Whittle's multivariate Levinson recursion on C(0..p), C(k) = E[X_{t+k} X_t^H].
/// Returns the order-p forward prediction error covariance.
MatrixPredictionResult block_levinson_sigma(std::span<const CMatrix> matrix_autocovariance);

/// Infinite-past eps^2: Levinson with p doubled until the gap drops below
/// tolerance * c(0) or p reaches max_order. `autocovariance(L)` must return
/// c(0..L).
PredictionResult converged_prediction_error(
    const std::function<std::vector<Complex>(std::size_t)>& autocovariance,
    const ConvergenceOptions& options = {});

PredictionResult converged_prediction_error(const ScalarProjection& projection,
                                            const ConvergenceOptions& options = {});

/// Infinite-past Sigma of a Gaussian vector process by doubling the block
/// Levinson order.
MatrixPredictionResult converged_sigma(const GaussianVectorProcess& process,
                                       const ConvergenceOptions& options = {});

struct EigenExtremes {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Smallest and largest eigenvalue of a Hermitian matrix. Throws
/// PreconditionError if the input is not Hermitian within 1e-10.
EigenExtremes eigen_extremes(const CMatrix& m);

}  // namespace fading

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fading/types.hpp"

namespace fading {

/// Discrete law of the variance multiplier applied to each innovation.
/// Scales are renormalised so that the multiplier has unit mean, which keeps
/// the second-order structure of the Gaussian model it wraps.
struct ScaleMixture {
  std::vector<double> weights;
  std::vector<double> scales;
};

/// Stationary circularly symmetric complex Gaussian vector process
///
///   H_k = d + Ht_k,   Ht_k = sum_{i=1}^{p} A_i Ht_{k-i} + U_k,   U_k ~ CN(0, Q).
///
/// Construction validates the model (dimensions, Hermitian positive definite
/// Q, companion spectral radius < 1) and solves for the stationary
/// covariance. Instances are immutable and cheap to copy.
class GaussianVectorProcess {
 public:
  GaussianVectorProcess(CVector mean, std::vector<CMatrix> ar_coefficients,
                        CMatrix innovation_covariance);

  /// Memoryless process with covariance K.
  static GaussianVectorProcess white(CVector mean, CMatrix covariance);

  /// Components independent, each a unit-variance AR(1) with coefficient alpha.
  static GaussianVectorProcess spatially_iid_ar1(CVector mean, Complex alpha);

  int nt() const;
  const CVector& mean() const;
  const std::vector<CMatrix>& ar_coefficients() const;
  const CMatrix& innovation_covariance() const;
  std::size_t memory_depth() const;

  /// K = Cov(H_k).
  const CMatrix& covariance() const;

  /// Stationary covariance of the stacked state (Ht_k, ..., Ht_{k-p+1}).
  const CMatrix& state_covariance() const;

  /// Largest modulus of the companion matrix eigenvalues.
  double spectral_radius() const;

  /// Burn-in applied by the samplers: 50 p / (1 - rho), capped at 10^6.
  std::size_t burn_in() const;

  /// C(0), ..., C(max_lag) with C(k) = E[Ht_{t+k} Ht_t^H].
  std::vector<CMatrix> matrix_autocovariance(std::size_t max_lag) const;

  /// S(lambda) = sum_k C(k) e^{-i k lambda}.
  CMatrix spectral_density(double lambda) const;

  /// True when every lag covariance is a multiple of the identity.
  bool is_spatially_iid(double tol = 1e-10) const;

 private:
  struct State;
  std::shared_ptr<const State> state_;
};

/// K = Cov(H_k) of a validated model.
CMatrix stationary_covariance(const GaussianVectorProcess& process);

/// Model of U H_k for a unitary U.
GaussianVectorProcess rotate(const GaussianVectorProcess& process, const CMatrix& unitary);

/// The scalar process G_l = H_l^T x for a fixed unit direction x.
///
/// With w = conj(x) the mean is d^T x and the autocovariance is
/// c(k) = w^H C(k) w.
class ScalarProjection {
 public:
  ScalarProjection(GaussianVectorProcess process, CVector direction);

  const CVector& direction() const { return direction_; }
  Complex mean() const { return mean_; }
  double variance() const;

  std::vector<Complex> autocovariance(std::size_t max_lag) const;
  double spectral_density(double lambda) const;

 private:
  GaussianVectorProcess process_;
  CVector direction_;
  Complex mean_;
};

/// Throws PreconditionError unless ||direction|| = 1 within 1e-12.
ScalarProjection project(const GaussianVectorProcess& process, const CVector& direction);

/// nt x n matrix whose columns are consecutive fading vectors. The initial
/// state is drawn from the stationary state law, then `burn_in()` steps are
/// discarded. Deterministic in `seed`.
CMatrix sample_path(const GaussianVectorProcess& process, std::size_t n, std::uint64_t seed);

/// Stationary ergodic fading process known only through a sampler.
class GeneralFadingProcess {
 public:
  using Sampler = std::function<CMatrix(std::size_t n, std::uint64_t seed)>;

  GeneralFadingProcess(int nt, Sampler sampler, bool finite_second_moment,
                       bool finite_entropy_rate, std::string description);

  /// Wraps a Gaussian model so the Monte Carlo evaluators can run on it.
  static GeneralFadingProcess from_gaussian(const GaussianVectorProcess& process);

  /// The vector AR filter of `base` driven by innovations sqrt(S_k) U_k,
  /// with S_k IID from `mixture`. Stationary and ergodic because the filter is
  /// causal and stable and the drivers are IID.
  static GeneralFadingProcess ar_scale_mixture(const GaussianVectorProcess& base,
                                               ScaleMixture mixture);

  int nt() const { return nt_; }
  bool finite_second_moment() const { return finite_second_moment_; }
  bool finite_entropy_rate() const { return finite_entropy_rate_; }
  const std::string& description() const { return description_; }

  /// Throws ModelError unless both regularity certificates are set.
  void require_certificates() const;

  CMatrix sample_path(std::size_t n, std::uint64_t seed) const;

 private:
  int nt_;
  Sampler sampler_;
  bool finite_second_moment_;
  bool finite_entropy_rate_;
  std::string description_;
};

CMatrix sample_path(const GeneralFadingProcess& process, std::size_t n, std::uint64_t seed);

}  // namespace fading

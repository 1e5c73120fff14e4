#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fading/errors.hpp"
#include "fading/knn_entropy.hpp"
#include "fading/process_models.hpp"
#include "fading/sphere_search.hpp"
#include "fading/types.hpp"

namespace fading {

enum class ReportKind {
  memoryless_general,
  memoryless_gauss,
  gauss_spatial_iid,
  gauss_upper_norm_ratio,
  upper_bound_estimate,
  best_lower_bound,
  isotropic,
};

std::string_view to_string(ReportKind kind);

/// A fading number (or bound on it) in nats, with the numbers that produced it.
struct FadingNumberReport {
  double value = 0.0;
  ReportKind kind = ReportKind::memoryless_gauss;
  std::optional<CVector> direction;
  std::map<std::string, double> diagnostics;
  std::vector<std::string> warnings;
};

/// Raised when a search exhausts its budget and the caller asked for a hard
/// failure; carries the best point found.
class OptimizerBudgetError : public NumericError {
 public:
  OptimizerBudgetError(const std::string& what, FadingNumberReport best)
      : NumericError(what), best_so_far(std::move(best)) {}
  FadingNumberReport best_so_far;
};

struct DStar {
  double value = 0.0;
  CVector direction;
};

/// max over unit x of |d^T x| / sqrt(Var(H^T x)). Closed form: with
/// w = K^{-1} d the maximum is sqrt(d^H K^{-1} d), attained at x = conj(w)/|w|.
/// Throws DomainError for a singular covariance.
DStar d_star(const CVector& mean, const CMatrix& covariance);

/// Value of |d^T x| / sqrt(Var(H^T x)) at one direction.
double d_star_quotient(const CVector& mean, const CMatrix& covariance, const CVector& direction);

/// -1 + log d*^2 - Ei(-d*^2), continuous at d* = 0 where it equals -1 - gamma.
double chi_memoryless_gauss(double d_star_value);

/// Spatially IID unit-variance Gaussian fading with memory:
/// chi_memoryless_gauss(|d|) + log(1 / eps^2). eps^2 > 1 is accepted with a
/// warning since it cannot come from a unit-variance component.
FadingNumberReport chi_gauss_spatial_iid(const CVector& mean, double epsilon_sq);

/// Same formula, with eps^2 computed from the model. Refuses models that are
/// not spatially IID with unit-variance components.
FadingNumberReport chi_gauss_spatial_iid(const GaussianVectorProcess& process);

/// chi_memoryless_gauss(d*(d, K)) + log(||K|| / lambda_min(Sigma)).
FadingNumberReport chi_gauss_upper_norm_ratio(const CVector& mean, const CMatrix& covariance,
                                       const CMatrix& sigma);

/// Same bound with K and the converged Sigma taken from the model.
FadingNumberReport chi_gauss_upper_norm_ratio(const GaussianVectorProcess& process);

struct MemorylessGeneralConfig {
  std::size_t samples = 100000;
  /// The direction search runs on this many leading samples; the reported
  /// value is re-estimated on all of them.
  std::size_t search_samples = 20000;
  std::uint64_t seed = 1;
  KnnOptions knn;
  SphereSearchOptions search{SphereMethod::nelder_mead, 4, 60, 1e-9, 1e-6, 1e-4, 1};
  /// Throw OptimizerBudgetError instead of warning when the search stalls.
  bool fail_on_budget = true;
};

/// log pi + E[log |G|^2] - h(G) estimated from samples of G; value and
/// standard error.
EntropyEstimate memoryless_bracket_estimate(std::span<const Complex> projected,
                                            const KnnOptions& knn);

/// sup over unit x of log pi + E[log |H^T x|^2] - h(H^T x) for the one-slot
/// marginal of `process`, by Monte Carlo and kNN entropy estimation.
FadingNumberReport chi_memoryless_general(const GeneralFadingProcess& process,
                                          const MemorylessGeneralConfig& config);

/// Samples H_t^T x for every column of `path`.
std::vector<Complex> project_samples(const CMatrix& path, const CVector& direction);

}  // namespace fading

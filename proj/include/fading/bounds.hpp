#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fading/fading_number.hpp"
#include "fading/knn_entropy.hpp"
#include "fading/prediction.hpp"
#include "fading/process_models.hpp"
#include "fading/sphere_search.hpp"

namespace fading {

enum class BoundMethod { gaussian_analytic, monte_carlo_knn };

std::string_view to_string(BoundMethod method);

/// One evaluation of a lower- or upper-bound bracket at fixed directions.
struct BoundEvaluation {
  double bracket_value = 0.0;
  /// x_0, x_{-1}, ..., x_{-kappa} for the upper bound; a single direction for
  /// the lower bound.
  std::vector<CVector> direction_sequence;
  std::size_t kappa = 0;
  /// Exactly zero on the analytic path.
  double standard_error = 0.0;
  BoundMethod method = BoundMethod::gaussian_analytic;
  std::map<std::string, double> diagnostics;
};

struct MonteCarloConfig {
  /// Number of (present, past) windows.
  std::size_t samples = 100000;
  /// Windows used while searching directions; the final value uses all.
  std::size_t search_samples = 20000;
  std::uint64_t seed = 1;
  KnnOptions knn;
  /// Direction search on kNN objectives; replaces OptimizerConfig::search on
  /// the Monte Carlo paths, whose objectives are too costly and too rough
  /// for finite-difference gradients.
  SphereSearchOptions search{SphereMethod::nelder_mead, 4, 60, 1e-9, 1e-6, 1e-4, 1};
};

struct OptimizerConfig {
  /// Past depth. Empty means the infinite past (converged prediction),
  /// which only the analytic path supports.
  std::optional<std::size_t> kappa;
  SphereSearchOptions search;
  /// Coordinate ascent stops when a sweep improves by less than this.
  double sweep_tolerance = 1e-9;
  int max_sweeps = 20;
  ConvergenceOptions convergence;
};

/// Evaluates log pi + E[log |H_0^T x|^2] - h(H_0^T x | H_{-1}^T x, ..., H_{-kappa}^T x)
/// for a Gaussian model, with the Gaussian conditional entropy
/// log(pi e eps_kappa^2(x)). Matrix autocovariances are computed once.
class GaussianBracket {
 public:
  GaussianBracket(GaussianVectorProcess process, std::optional<std::size_t> kappa,
                  ConvergenceOptions convergence = {});

  /// Lower-bound objective at direction x.
  double operator()(const CVector& direction);

  /// Bracket value with its prediction diagnostics.
  BoundEvaluation evaluate(const CVector& direction);

  /// log(c(0) / eps^2(x)): the information the projected past carries about
  /// the projected present.
  double memory_term(const CVector& direction);

  const GaussianVectorProcess& process() const { return process_; }

 private:
  struct Terms {
    double value;
    double mean_sq;
    double variance;
    PredictionResult prediction;
  };
  Terms terms(const CVector& direction);
  void ensure_lags(std::size_t max_lag);
  std::vector<Complex> projected_autocovariance(const CVector& w, std::size_t max_lag);

  GaussianVectorProcess process_;
  std::optional<std::size_t> kappa_;
  ConvergenceOptions convergence_;
  std::vector<CMatrix> lags_;
};

/// Lower-bound bracket at direction x, analytic path. kappa empty = infinite past.
BoundEvaluation lower_bracket(const GaussianVectorProcess& process, const CVector& direction,
                                 std::optional<std::size_t> kappa);

/// Lower-bound bracket at direction x, Monte Carlo path: the conditional
/// entropy is h(G_0, past) - h(past) from matched kNN estimates over
/// non-overlapping windows of one sample path.
BoundEvaluation lower_bracket(const GeneralFadingProcess& process, const CVector& direction,
                                 std::size_t kappa, const MonteCarloConfig& config);

/// Supremum of the lower-bound bracket over unit directions.
FadingNumberReport best_lower_bound(const GaussianVectorProcess& process,
                                  const OptimizerConfig& config = {});
FadingNumberReport best_lower_bound(const GeneralFadingProcess& process,
                                  const OptimizerConfig& config, const MonteCarloConfig& mc);

enum class UpperBoundMode { constant_direction, coordinate_ascent };

/// Finite-kappa estimate of the upper bound, whose directions may change
/// with time. constant_direction runs the lower-bound search unchanged;
/// coordinate_ascent starts there and optimises each x_l in turn.
FadingNumberReport upper_bound_estimate(const GaussianVectorProcess& process, std::size_t kappa,
                                  UpperBoundMode mode, const OptimizerConfig& config = {});
FadingNumberReport upper_bound_estimate(const GeneralFadingProcess& process, std::size_t kappa,
                                  UpperBoundMode mode, const OptimizerConfig& config,
                                  const MonteCarloConfig& mc);

/// Upper-bound bracket with a per-time direction sequence (x_0, x_{-1}, ...),
/// analytic path.
BoundEvaluation upper_bracket(const GaussianVectorProcess& process,
                                 const std::vector<CVector>& directions);

/// Upper-bound bracket with a per-time direction sequence, Monte Carlo path.
BoundEvaluation upper_bracket(const GeneralFadingProcess& process,
                                 const std::vector<CVector>& directions,
                                 const MonteCarloConfig& config);

/// Fading number of an isotropically distributed process: the lower-bound
/// bracket at `reference_direction`. Direction independence is verified at 5
/// random directions (spread < max(3 stderr, 1e-6)); Monte Carlo inputs are
/// first screened with two-sample Kolmogorov-Smirnov tests at level 0.01.
/// Throws IsotropyViolation on failure.
FadingNumberReport isotropic_fading_number(const GaussianVectorProcess& process,
                                           const CVector& reference_direction,
                                           std::optional<std::size_t> kappa,
                                           std::uint64_t seed = 1);
FadingNumberReport isotropic_fading_number(const GeneralFadingProcess& process,
                                           const CVector& reference_direction, std::size_t kappa,
                                           const MonteCarloConfig& config);

/// log(c(0) / eps^2(x)) with eps^2 from the converged Levinson recursion.
double memory_term_gauss(const GaussianVectorProcess& process, const CVector& direction);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Critical value of the two-sample KS statistic at level alpha.
double ks_critical_value(std::size_t n, std::size_t m, double alpha);

}  // namespace fading

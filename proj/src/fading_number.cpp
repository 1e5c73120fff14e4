#include "fading/fading_number.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "fading/prediction.hpp"
#include "fading/special_functions.hpp"

namespace fading {
namespace {

constexpr double kUnitVarianceTol = 1e-9;

double require_positive_definite_min(const CMatrix& m, const std::string& what) {
  const EigenExtremes e = eigen_extremes(m);
  if (!(e.lambda_min > 0.0)) {
    throw DomainError(what + " is singular (smallest eigenvalue " + std::to_string(e.lambda_min) +
                      ")");
  }
  return e.lambda_min;
}

}  // namespace

std::string_view to_string(ReportKind kind) {
  switch (kind) {
    case ReportKind::memoryless_general: return "memoryless_general";
    case ReportKind::memoryless_gauss: return "memoryless_gauss";
    case ReportKind::gauss_spatial_iid: return "gauss_spatial_iid";
    case ReportKind::gauss_upper_norm_ratio: return "gauss_upper_norm_ratio";
    case ReportKind::upper_bound_estimate: return "upper_bound_estimate";
    case ReportKind::best_lower_bound: return "best_lower_bound";
    case ReportKind::isotropic: return "isotropic";
  }
  return "unknown";
}

DStar d_star(const CVector& mean, const CMatrix& covariance) {
  if (covariance.rows() != mean.size() || covariance.cols() != mean.size()) {
    throw PreconditionError("covariance must be nt x nt");
  }
  require_positive_definite_min(covariance, "covariance");
  const Eigen::LLT<CMatrix> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw DomainError("covariance is singular");
  }
  const CVector w = llt.solve(mean);
  const double quadratic = mean.dot(w).real();
  DStar out;
  out.value = std::sqrt(std::max(0.0, quadratic));
  if (w.norm() == 0.0) {
    out.direction = CVector::Unit(mean.size(), 0);
  } else {
    out.direction = w.conjugate() / w.norm();
  }
  return out;
}

double d_star_quotient(const CVector& mean, const CMatrix& covariance, const CVector& direction) {
  const Complex projected_mean = mean.transpose() * direction;
  const CVector w = direction.conjugate();
  const double variance = w.dot(covariance * w).real();
  return std::abs(projected_mean) / std::sqrt(variance);
}

double chi_memoryless_gauss(double d_star_value) {
  if (!std::isfinite(d_star_value) || d_star_value < 0.0) {
    throw DomainError("d* must be finite and nonnegative");
  }
  return -1.0 + log_minus_ei_neg(d_star_value * d_star_value);
}

FadingNumberReport chi_gauss_spatial_iid(const CVector& mean, double epsilon_sq) {
  if (!std::isfinite(epsilon_sq) || epsilon_sq <= 0.0) {
    throw DomainError("prediction error eps^2 must be positive");
  }
  const double d_norm = mean.norm();
  FadingNumberReport report;
  report.kind = ReportKind::gauss_spatial_iid;
  const double memory_term = -std::log(epsilon_sq);
  report.value = chi_memoryless_gauss(d_norm) + memory_term;
  if (d_norm > 0.0) {
    report.direction = mean.conjugate() / d_norm;
  }
  report.diagnostics["d_star"] = d_norm;
  report.diagnostics["epsilon_sq"] = epsilon_sq;
  report.diagnostics["memory_term"] = memory_term;
  if (epsilon_sq > 1.0) {
    report.warnings.push_back(
        "eps^2 > 1: the formula assumes unit-variance components, whose prediction error is <= 1");
  }
  return report;
}

FadingNumberReport chi_gauss_spatial_iid(const GaussianVectorProcess& process) {
  const int nt = process.nt();
  if (!process.is_spatially_iid()) {
    throw DomainError("model is not spatially IID; use the general Gaussian bounds instead");
  }
  if ((process.covariance() - CMatrix::Identity(nt, nt)).norm() > kUnitVarianceTol) {
    throw DomainError(
        "spatially IID formula needs unit-variance components; normalise the model first");
  }
  const ScalarProjection component = project(process, CVector::Unit(nt, 0));
  const PredictionResult prediction = converged_prediction_error(component);
  FadingNumberReport report = chi_gauss_spatial_iid(process.mean(), prediction.error_variance);
  report.diagnostics["levinson_order"] = static_cast<double>(prediction.order_used);
  report.diagnostics["levinson_gap"] = prediction.convergence_gap;
  return report;
}

FadingNumberReport chi_gauss_upper_norm_ratio(const CVector& mean, const CMatrix& covariance,
                                       const CMatrix& sigma) {
  const DStar ds = d_star(mean, covariance);
  const EigenExtremes k_extremes = eigen_extremes(covariance);
  const EigenExtremes sigma_extremes = eigen_extremes(sigma);
  if (!(sigma_extremes.lambda_min > 0.0)) {
    throw RegularityError("prediction error covariance is singular: the process is not regular");
  }
  FadingNumberReport report;
  report.kind = ReportKind::gauss_upper_norm_ratio;
  report.value = chi_memoryless_gauss(ds.value) +
                 std::log(k_extremes.lambda_max / sigma_extremes.lambda_min);
  report.direction = ds.direction;
  report.diagnostics["d_star"] = ds.value;
  report.diagnostics["operator_norm_K"] = k_extremes.lambda_max;
  report.diagnostics["lambda_min"] = sigma_extremes.lambda_min;
  report.diagnostics["memory_bound"] = std::log(k_extremes.lambda_max / sigma_extremes.lambda_min);
  return report;
}

FadingNumberReport chi_gauss_upper_norm_ratio(const GaussianVectorProcess& process) {
  const MatrixPredictionResult sigma = converged_sigma(process);
  FadingNumberReport report =
      chi_gauss_upper_norm_ratio(process.mean(), process.covariance(), sigma.error_covariance);
  report.diagnostics["sigma_order"] = static_cast<double>(sigma.order_used);
  report.diagnostics["sigma_gap"] = sigma.convergence_gap;
  return report;
}

std::vector<Complex> project_samples(const CMatrix& path, const CVector& direction) {
  const Eigen::RowVectorXcd projected = direction.transpose() * path;
  return {projected.data(), projected.data() + projected.size()};
}

EntropyEstimate memoryless_bracket_estimate(std::span<const Complex> projected,
                                            const KnnOptions& knn) {
  const auto n = static_cast<double>(projected.size());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const Complex& g : projected) {
    const double l = std::log(std::norm(g));
    sum += l;
    sum_sq += l * l;
  }
  const double mean_log = sum / n;
  const double var_log = std::max(0.0, sum_sq / n - mean_log * mean_log) * n / (n - 1.0);
  const EntropyEstimate h = knn_differential_entropy(projected, knn);
  return {std::log(kPi) + mean_log - h.value,
          std::sqrt(var_log / n + h.standard_error * h.standard_error)};
}

FadingNumberReport chi_memoryless_general(const GeneralFadingProcess& process,
                                          const MemorylessGeneralConfig& config) {
  process.require_certificates();
  if (config.samples < 1000) {
    throw PreconditionError("memoryless evaluator needs at least 1000 samples");
  }
  const CMatrix path = process.sample_path(config.samples, config.seed);
  const std::size_t search_n = std::min(config.samples, std::max<std::size_t>(1000, config.search_samples));
  const CMatrix search_path = path.leftCols(static_cast<Eigen::Index>(search_n));

  auto objective = [&](const CVector& x) {
    const std::vector<Complex> g = project_samples(search_path, x);
    double mean_log = 0.0;
    for (const Complex& z : g) {
      mean_log += std::log(std::norm(z));
    }
    mean_log /= static_cast<double>(g.size());
    return std::log(kPi) + mean_log -
           knn_entropy_point_estimate(complex_scalars_to_points(g), config.knn.k,
                                      config.knn.workers);
  };
  const SphereSearchResult search = maximize_on_sphere(process.nt(), objective, config.search);

  const std::vector<Complex> g = project_samples(path, search.direction);
  const EntropyEstimate full = memoryless_bracket_estimate(g, config.knn);

  FadingNumberReport report;
  report.kind = ReportKind::memoryless_general;
  report.value = full.value;
  report.direction = search.direction;
  report.diagnostics["stderr"] = full.standard_error;
  report.diagnostics["search_value"] = search.value;
  report.diagnostics["evaluations"] = search.evaluations;
  report.diagnostics["samples"] = static_cast<double>(config.samples);
  report.diagnostics["knn_k"] = config.knn.k;
  if (!search.converged) {
    if (config.fail_on_budget) {
      throw OptimizerBudgetError("direction search exhausted its budget", report);
    }
    report.warnings.push_back("direction search exhausted its budget; best-so-far reported");
  }
  return report;
}

}  // namespace fading

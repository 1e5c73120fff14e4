#include "fading/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fading/errors.hpp"
#include "fading/random.hpp"
#include "fading/special_functions.hpp"

namespace fading {
namespace {

constexpr int kIsotropyProbes = 5;
constexpr double kIsotropyLevel = 0.01;

void require_unit(const CVector& direction, int nt) {
  if (direction.size() != nt) {
    throw PreconditionError("direction length differs from nt");
  }
  if (std::abs(direction.norm() - 1.0) > 1e-12) {
    throw PreconditionError("direction is not a unit vector");
  }
}

double gaussian_entropy(double variance) { return std::log(kPi * std::exp(1.0) * variance); }

// Windows of a sample path: window j has its present at column
// j (kappa + 1) + kappa and its past in the kappa columns before it.
struct Windows {
  std::vector<Complex> present;
  PointSet joint;
  PointSet past;
};

Windows build_windows(const CMatrix& path, const std::vector<CVector>& directions,
                      std::size_t windows) {
  const std::size_t kappa = directions.size() - 1;
  const std::size_t stride = kappa + 1;
  if (static_cast<std::size_t>(path.cols()) < windows * stride) {
    throw PreconditionError("sample path too short for the requested windows");
  }
  Windows out;
  out.present.reserve(windows);
  out.joint.dim = 2 * stride;
  out.past.dim = 2 * kappa;
  out.joint.coords.reserve(windows * out.joint.dim);
  out.past.coords.reserve(windows * out.past.dim);
  for (std::size_t j = 0; j < windows; ++j) {
    const auto now = static_cast<Eigen::Index>(j * stride + kappa);
    for (std::size_t l = 0; l <= kappa; ++l) {
      const Complex g =
          (path.col(now - static_cast<Eigen::Index>(l)).transpose() * directions[l])(0, 0);
      if (l == 0) {
        out.present.push_back(g);
      } else {
        out.past.coords.push_back(g.real());
        out.past.coords.push_back(g.imag());
      }
      out.joint.coords.push_back(g.real());
      out.joint.coords.push_back(g.imag());
    }
  }
  return out;
}

struct MeanLog {
  double mean;
  double standard_error;
};

MeanLog mean_log_magnitude_sq(std::span<const Complex> samples) {
  const auto n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (const Complex& g : samples) {
    sum += std::log(std::norm(g));
  }
  const double mean = sum / n;
  double ss = 0.0;
  for (const Complex& g : samples) {
    const double d = std::log(std::norm(g)) - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

// Monte Carlo bracket on a given path; directions[0] is the present.
BoundEvaluation mc_bracket(const CMatrix& path, const std::vector<CVector>& directions,
                           std::size_t windows, const KnnOptions& knn) {
  const std::size_t kappa = directions.size() - 1;
  const Windows w = build_windows(path, directions, windows);
  const MeanLog ml = mean_log_magnitude_sq(w.present);
  const EntropyEstimate h = kappa == 0 ? knn_differential_entropy(w.present, knn)
                                       : knn_conditional_entropy(w.joint, w.past, knn);
  BoundEvaluation out;
  out.bracket_value = std::log(kPi) + ml.mean - h.value;
  out.standard_error = std::sqrt(ml.standard_error * ml.standard_error +
                                 h.standard_error * h.standard_error);
  out.kappa = kappa;
  out.direction_sequence = directions;
  out.method = BoundMethod::monte_carlo_knn;
  out.diagnostics["mean_log_magnitude_sq"] = ml.mean;
  out.diagnostics["conditional_entropy"] = h.value;
  out.diagnostics["samples"] = static_cast<double>(windows);
  out.diagnostics["knn_k"] = knn.k;
  return out;
}

// Point estimate used inside direction searches.
double mc_bracket_point(const CMatrix& path, const std::vector<CVector>& directions,
                        std::size_t windows, const KnnOptions& knn) {
  const std::size_t kappa = directions.size() - 1;
  const Windows w = build_windows(path, directions, windows);
  const MeanLog ml = mean_log_magnitude_sq(w.present);
  double h = 0.0;
  if (kappa == 0) {
    h = knn_entropy_point_estimate(complex_scalars_to_points(w.present), knn.k, knn.workers);
  } else {
    h = knn_entropy_point_estimate(w.joint, knn.k, knn.workers) -
        knn_entropy_point_estimate(w.past, knn.k, knn.workers);
  }
  return std::log(kPi) + ml.mean - h;
}

void copy_diagnostics(const BoundEvaluation& eval, FadingNumberReport& report) {
  for (const auto& [key, value] : eval.diagnostics) {
    report.diagnostics[key] = value;
  }
  report.diagnostics["kappa"] = static_cast<double>(eval.kappa);
  report.diagnostics["stderr"] = eval.standard_error;
}

std::size_t search_windows(const MonteCarloConfig& mc) {
  return std::min(mc.samples, std::max<std::size_t>(1000, mc.search_samples));
}

std::vector<CVector> repeated(const CVector& x, std::size_t kappa) {
  return std::vector<CVector>(kappa + 1, x);
}

// Analytic upper-bound bracket: the conditional variance of G_0 given the
// per-time projections is the Schur complement of their joint covariance.
double gaussian_upper_value(const GaussianVectorProcess& process,
                               const std::vector<CMatrix>& lags,
                               const std::vector<CVector>& directions, double* conditional_variance) {
  const std::size_t size = directions.size();
  std::vector<CVector> w;
  w.reserve(size);
  for (const auto& x : directions) {
    w.push_back(x.conjugate());
  }
  // M(i, j) = Cov(G_{-i}, G_{-j}) = w_i^H C(j - i) w_j.
  CMatrix m(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = i; j < size; ++j) {
      const Complex v = w[i].dot(lags[j - i] * w[j]);
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = std::conj(v);
    }
  }
  const double variance = m(0, 0).real();
  double conditional = variance;
  if (size > 1) {
    const auto k = static_cast<Eigen::Index>(size - 1);
    const CMatrix past = m.bottomRightCorner(k, k);
    const CVector cross = m.block(1, 0, k, 1);
    Eigen::LLT<CMatrix> llt(past);
    if (llt.info() != Eigen::Success) {
      throw IllPosedCovarianceError("covariance of the projected past is not positive definite");
    }
    conditional = variance - cross.dot(llt.solve(cross)).real();
  }
  if (!(conditional > 0.0)) {
    throw RegularityError("conditional variance of the present projection vanished");
  }
  if (conditional_variance != nullptr) {
    *conditional_variance = conditional;
  }
  const Complex mean = process.mean().transpose() * directions[0];
  return std::log(kPi) + noncentral_log_magnitude_sq_mean(std::norm(mean), variance) -
         gaussian_entropy(conditional);
}

SphereSearchOptions coordinate_options(const SphereSearchOptions& base, std::size_t coordinate,
                                       int sweep) {
  SphereSearchOptions out = base;
  out.restarts = 2;
  out.seed = derive_seed(base.seed, (static_cast<std::uint64_t>(sweep) << 32) + coordinate);
  return out;
}

}  // namespace

std::string_view to_string(BoundMethod method) {
  return method == BoundMethod::gaussian_analytic ? "gaussian_analytic" : "monte_carlo_knn";
}

GaussianBracket::GaussianBracket(GaussianVectorProcess process, std::optional<std::size_t> kappa,
                                 ConvergenceOptions convergence)
    : process_(std::move(process)), kappa_(kappa), convergence_(convergence) {
  ensure_lags(kappa_ ? *kappa_ : convergence_.initial_order);
}

void GaussianBracket::ensure_lags(std::size_t max_lag) {
  if (lags_.size() > max_lag) {
    return;
  }
  lags_ = process_.matrix_autocovariance(std::max(max_lag, 2 * lags_.size()));
}

std::vector<Complex> GaussianBracket::projected_autocovariance(const CVector& w,
                                                               std::size_t max_lag) {
  ensure_lags(max_lag);
  std::vector<Complex> c(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) {
    c[k] = w.dot(lags_[k] * w);
  }
  c[0] = c[0].real();
  return c;
}

GaussianBracket::Terms GaussianBracket::terms(const CVector& direction) {
  require_unit(direction, process_.nt());
  const CVector w = direction.conjugate();
  Terms t{};
  const Complex mean = process_.mean().transpose() * direction;
  t.mean_sq = std::norm(mean);
  if (kappa_) {
    t.prediction = levinson_prediction_error(projected_autocovariance(w, *kappa_));
  } else {
    t.prediction = converged_prediction_error(
        [&](std::size_t lag) { return projected_autocovariance(w, lag); }, convergence_);
  }
  t.variance = t.prediction.error_by_order.front();
  t.value = std::log(kPi) + noncentral_log_magnitude_sq_mean(t.mean_sq, t.variance) -
            gaussian_entropy(t.prediction.error_variance);
  return t;
}

double GaussianBracket::operator()(const CVector& direction) { return terms(direction).value; }

BoundEvaluation GaussianBracket::evaluate(const CVector& direction) {
  const Terms t = terms(direction);
  BoundEvaluation out;
  out.bracket_value = t.value;
  out.direction_sequence = {direction};
  out.kappa = t.prediction.order_used;
  out.standard_error = 0.0;
  out.method = BoundMethod::gaussian_analytic;
  out.diagnostics["mean_sq"] = t.mean_sq;
  out.diagnostics["variance"] = t.variance;
  out.diagnostics["epsilon_sq"] = t.prediction.error_variance;
  out.diagnostics["memory_term"] = std::log(t.variance / t.prediction.error_variance);
  out.diagnostics["levinson_order"] = static_cast<double>(t.prediction.order_used);
  out.diagnostics["levinson_gap"] = t.prediction.convergence_gap;
  out.diagnostics["infinite_past"] = kappa_ ? 0.0 : 1.0;
  return out;
}

double GaussianBracket::memory_term(const CVector& direction) {
  const Terms t = terms(direction);
  return std::log(t.variance / t.prediction.error_variance);
}

BoundEvaluation lower_bracket(const GaussianVectorProcess& process, const CVector& direction,
                                 std::optional<std::size_t> kappa) {
  GaussianBracket bracket(process, kappa);
  return bracket.evaluate(direction);
}

BoundEvaluation lower_bracket(const GeneralFadingProcess& process, const CVector& direction,
                                 std::size_t kappa, const MonteCarloConfig& config) {
  process.require_certificates();
  require_unit(direction, process.nt());
  const CMatrix path = process.sample_path(config.samples * (kappa + 1), config.seed);
  return mc_bracket(path, repeated(direction, kappa), config.samples, config.knn);
}

FadingNumberReport best_lower_bound(const GaussianVectorProcess& process,
                                  const OptimizerConfig& config) {
  GaussianBracket bracket(process, config.kappa, config.convergence);
  std::vector<CVector> warm;
  if (process.mean().norm() > 0.0) {
    warm.push_back(d_star(process.mean(), process.covariance()).direction);
  }
  const SphereSearchResult search = maximize_on_sphere(
      process.nt(), [&](const CVector& x) { return bracket(x); }, config.search, warm);
  const BoundEvaluation eval = bracket.evaluate(search.direction);

  FadingNumberReport report;
  report.kind = ReportKind::best_lower_bound;
  report.value = eval.bracket_value;
  report.direction = search.direction;
  copy_diagnostics(eval, report);
  report.diagnostics["evaluations"] = search.evaluations;
  report.diagnostics["restarts"] = config.search.restarts;
  if (!search.converged) {
    report.warnings.push_back("direction search exhausted its budget; best-so-far reported");
  }
  return report;
}

FadingNumberReport best_lower_bound(const GeneralFadingProcess& process,
                                  const OptimizerConfig& config, const MonteCarloConfig& mc) {
  process.require_certificates();
  if (!config.kappa) {
    throw PreconditionError("the Monte Carlo path needs a finite kappa");
  }
  const std::size_t kappa = *config.kappa;
  const CMatrix path = process.sample_path(mc.samples * (kappa + 1), mc.seed);
  const std::size_t search_n = search_windows(mc);
  const SphereSearchResult search = maximize_on_sphere(
      process.nt(),
      [&](const CVector& x) { return mc_bracket_point(path, repeated(x, kappa), search_n, mc.knn); },
      mc.search);
  const BoundEvaluation eval = mc_bracket(path, repeated(search.direction, kappa), mc.samples, mc.knn);

  FadingNumberReport report;
  report.kind = ReportKind::best_lower_bound;
  report.value = eval.bracket_value;
  report.direction = search.direction;
  copy_diagnostics(eval, report);
  report.diagnostics["evaluations"] = search.evaluations;
  report.diagnostics["search_value"] = search.value;
  if (!search.converged) {
    report.warnings.push_back("direction search exhausted its budget; best-so-far reported");
  }
  return report;
}

BoundEvaluation upper_bracket(const GaussianVectorProcess& process,
                                 const std::vector<CVector>& directions) {
  if (directions.empty()) {
    throw PreconditionError("direction sequence is empty");
  }
  for (const auto& x : directions) {
    require_unit(x, process.nt());
  }
  const auto lags = process.matrix_autocovariance(directions.size() - 1);
  double conditional = 0.0;
  BoundEvaluation out;
  out.bracket_value = gaussian_upper_value(process, lags, directions, &conditional);
  out.direction_sequence = directions;
  out.kappa = directions.size() - 1;
  out.method = BoundMethod::gaussian_analytic;
  out.diagnostics["conditional_variance"] = conditional;
  return out;
}

BoundEvaluation upper_bracket(const GeneralFadingProcess& process,
                                 const std::vector<CVector>& directions,
                                 const MonteCarloConfig& config) {
  process.require_certificates();
  if (directions.empty()) {
    throw PreconditionError("direction sequence is empty");
  }
  for (const auto& x : directions) {
    require_unit(x, process.nt());
  }
  const CMatrix path = process.sample_path(config.samples * directions.size(), config.seed);
  return mc_bracket(path, directions, config.samples, config.knn);
}

FadingNumberReport upper_bound_estimate(const GaussianVectorProcess& process, std::size_t kappa,
                                  UpperBoundMode mode, const OptimizerConfig& config) {
  if (kappa < 1) {
    throw PreconditionError("the upper bound needs kappa >= 1");
  }
  OptimizerConfig constant_config = config;
  constant_config.kappa = kappa;
  FadingNumberReport report = best_lower_bound(process, constant_config);
  report.kind = ReportKind::upper_bound_estimate;
  report.diagnostics["mode_coordinate_ascent"] = 0.0;

  // kappa-convergence curve of the constant-direction value.
  for (std::size_t k = std::max<std::size_t>(1, kappa / 4); k < kappa; k *= 2) {
    report.diagnostics["kappa_curve_" + std::to_string(k)] =
        lower_bracket(process, *report.direction, k).bracket_value;
  }
  report.diagnostics["kappa_curve_" + std::to_string(kappa)] = report.value;
  if (mode == UpperBoundMode::constant_direction || process.nt() == 1) {
    return report;
  }

  const auto lags = process.matrix_autocovariance(kappa);
  std::vector<CVector> directions = repeated(*report.direction, kappa);
  const double constant_value = report.value;
  double value = gaussian_upper_value(process, lags, directions, nullptr);
  double last_improvement = 0.0;
  int sweeps = 0;
  int evaluations = 0;
  for (; sweeps < config.max_sweeps; ++sweeps) {
    const double sweep_start = value;
    for (std::size_t l = 0; l <= kappa; ++l) {
      std::vector<CVector> trial = directions;
      auto objective = [&](const CVector& x) {
        trial[l] = x;
        return gaussian_upper_value(process, lags, trial, nullptr);
      };
      const std::vector<CVector> warm{directions[l]};
      const SphereSearchResult sub = maximize_on_sphere(
          process.nt(), objective, coordinate_options(config.search, l, sweeps), warm);
      evaluations += sub.evaluations;
      if (sub.value > value) {
        value = sub.value;
        directions[l] = sub.direction;
      }
    }
    last_improvement = value - sweep_start;
    if (last_improvement < config.sweep_tolerance) {
      ++sweeps;
      break;
    }
  }
  report.value = value;
  report.direction = directions.front();
  report.diagnostics["mode_coordinate_ascent"] = 1.0;
  report.diagnostics["constant_direction_value"] = constant_value;
  report.diagnostics["improvement_over_constant"] = value - constant_value;
  report.diagnostics["sweeps"] = sweeps;
  report.diagnostics["last_sweep_gap"] = last_improvement;
  report.diagnostics["coordinate_evaluations"] = evaluations;
  double max_angle = 0.0;
  for (const auto& x : directions) {
    max_angle = std::max(max_angle, direction_angle(x, directions.front()));
  }
  report.diagnostics["max_direction_angle"] = max_angle;
  if (value - constant_value > 1e-6) {
    report.warnings.push_back("coordinate ascent left the constant-direction stationary point");
  }
  if (last_improvement >= config.sweep_tolerance) {
    report.warnings.push_back("coordinate ascent hit the sweep limit; best-so-far reported");
  }
  return report;
}

FadingNumberReport upper_bound_estimate(const GeneralFadingProcess& process, std::size_t kappa,
                                  UpperBoundMode mode, const OptimizerConfig& config,
                                  const MonteCarloConfig& mc) {
  if (kappa < 1) {
    throw PreconditionError("the upper bound needs kappa >= 1");
  }
  OptimizerConfig constant_config = config;
  constant_config.kappa = kappa;
  FadingNumberReport report = best_lower_bound(process, constant_config, mc);
  report.kind = ReportKind::upper_bound_estimate;
  report.diagnostics["mode_coordinate_ascent"] = 0.0;
  if (mode == UpperBoundMode::constant_direction || process.nt() == 1) {
    return report;
  }

  const CMatrix path = process.sample_path(mc.samples * (kappa + 1), mc.seed);
  const std::size_t search_n = search_windows(mc);
  std::vector<CVector> directions = repeated(*report.direction, kappa);
  double value = mc_bracket_point(path, directions, search_n, mc.knn);
  const double constant_search_value = value;
  double last_improvement = 0.0;
  int sweeps = 0;
  for (; sweeps < config.max_sweeps; ++sweeps) {
    const double sweep_start = value;
    for (std::size_t l = 0; l <= kappa; ++l) {
      std::vector<CVector> trial = directions;
      auto objective = [&](const CVector& x) {
        trial[l] = x;
        return mc_bracket_point(path, trial, search_n, mc.knn);
      };
      const std::vector<CVector> warm{directions[l]};
      const SphereSearchResult sub = maximize_on_sphere(
          process.nt(), objective, coordinate_options(mc.search, l, sweeps), warm);
      if (sub.value > value) {
        value = sub.value;
        directions[l] = sub.direction;
      }
    }
    last_improvement = value - sweep_start;
    if (last_improvement < config.sweep_tolerance) {
      ++sweeps;
      break;
    }
  }
  const BoundEvaluation eval = mc_bracket(path, directions, mc.samples, mc.knn);
  const double constant_value = report.value;
  report.value = eval.bracket_value;
  report.direction = directions.front();
  copy_diagnostics(eval, report);
  report.diagnostics["mode_coordinate_ascent"] = 1.0;
  report.diagnostics["constant_direction_value"] = constant_value;
  report.diagnostics["search_improvement_over_constant"] = value - constant_search_value;
  report.diagnostics["sweeps"] = sweeps;
  report.diagnostics["last_sweep_gap"] = last_improvement;
  if (value - constant_search_value > 3.0 * eval.standard_error) {
    report.warnings.push_back("coordinate ascent left the constant-direction stationary point");
  }
  return report;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw PreconditionError("KS statistic needs non-empty samples");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) {
      ++i;
    }
    while (j < b.size() && b[j] <= x) {
      ++j;
    }
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_value(std::size_t n, std::size_t m, double alpha) {
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return c * std::sqrt((nn + mm) / (nn * mm));
}

FadingNumberReport isotropic_fading_number(const GaussianVectorProcess& process,
                                           const CVector& reference_direction,
                                           std::optional<std::size_t> kappa, std::uint64_t seed) {
  const int nt = process.nt();
  require_unit(reference_direction, nt);
  const double scale = std::sqrt(process.covariance().trace().real());
  if (process.mean().norm() > 1e-12 * scale || !process.is_spatially_iid()) {
    throw IsotropyViolation(
        "Gaussian model is not isotropic: it needs zero mean and identity-proportional lag "
        "covariances");
  }
  GaussianBracket bracket(process, kappa);
  const BoundEvaluation eval = bracket.evaluate(reference_direction);
  Engine engine = make_engine(seed, 0x150);
  double lo = eval.bracket_value;
  double hi = eval.bracket_value;
  for (int probe = 0; probe < kIsotropyProbes; ++probe) {
    const double v = bracket(random_unit_vector(nt, engine));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double spread = hi - lo;
  if (spread >= 1e-6) {
    throw IsotropyViolation("bracket depends on the direction (spread " + std::to_string(spread) +
                            ")");
  }
  FadingNumberReport report;
  report.kind = ReportKind::isotropic;
  report.value = eval.bracket_value;
  report.direction = reference_direction;
  copy_diagnostics(eval, report);
  report.diagnostics["direction_spread"] = spread;
  return report;
}

FadingNumberReport isotropic_fading_number(const GeneralFadingProcess& process,
                                           const CVector& reference_direction, std::size_t kappa,
                                           const MonteCarloConfig& config) {
  process.require_certificates();
  const int nt = process.nt();
  require_unit(reference_direction, nt);
  Engine engine = make_engine(config.seed, 0x150);
  std::vector<CVector> probes;
  for (int i = 0; i < kIsotropyProbes; ++i) {
    probes.push_back(random_unit_vector(nt, engine));
  }

  // Marginal screen: each probe direction gets its own independent path.
  const std::size_t check_n = std::min<std::size_t>(config.samples, 20000);
  auto marginal = [&](const CVector& x, std::uint64_t stream) {
    const CMatrix path = process.sample_path(check_n, derive_seed(config.seed, stream));
    const std::vector<Complex> g = project_samples(path, x);
    std::pair<std::vector<double>, std::vector<double>> out;
    for (const Complex& z : g) {
      out.first.push_back(std::norm(z));
      out.second.push_back(z.real());
    }
    return out;
  };
  const auto reference = marginal(reference_direction, 1000);
  const double per_test_level = kIsotropyLevel / (2.0 * kIsotropyProbes);
  const double critical = ks_critical_value(check_n, check_n, per_test_level);
  double worst_ks = 0.0;
  for (int i = 0; i < kIsotropyProbes; ++i) {
    const auto sample = marginal(probes[static_cast<std::size_t>(i)], 1001 + static_cast<std::uint64_t>(i));
    worst_ks = std::max({worst_ks, ks_statistic(reference.first, sample.first),
                         ks_statistic(reference.second, sample.second)});
  }
  if (worst_ks > critical) {
    throw IsotropyViolation("projected laws differ across directions (KS " +
                            std::to_string(worst_ks) + " > " + std::to_string(critical) + ")");
  }

  const CMatrix path = process.sample_path(config.samples * (kappa + 1), config.seed);
  const BoundEvaluation eval = mc_bracket(path, repeated(reference_direction, kappa),
                                          config.samples, config.knn);
  double lo = eval.bracket_value;
  double hi = eval.bracket_value;
  for (const auto& x : probes) {
    const double v = mc_bracket(path, repeated(x, kappa), config.samples, config.knn).bracket_value;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double spread = hi - lo;
  const double tolerance = std::max(3.0 * eval.standard_error, 1e-6);
  if (spread >= tolerance) {
    throw IsotropyViolation("bracket depends on the direction (spread " + std::to_string(spread) +
                            " >= " + std::to_string(tolerance) + ")");
  }
  FadingNumberReport report;
  report.kind = ReportKind::isotropic;
  report.value = eval.bracket_value;
  report.direction = reference_direction;
  copy_diagnostics(eval, report);
  report.diagnostics["direction_spread"] = spread;
  report.diagnostics["ks_statistic"] = worst_ks;
  report.diagnostics["ks_critical"] = critical;
  return report;
}

double memory_term_gauss(const GaussianVectorProcess& process, const CVector& direction) {
  GaussianBracket bracket(process, std::nullopt);
  return bracket.memory_term(direction);
}

}  // namespace fading

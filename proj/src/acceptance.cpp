#include "fading/acceptance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "fading/bounds.hpp"
#include "fading/capacity_sim.hpp"
#include "fading/errors.hpp"
#include "fading/fading_number.hpp"
#include "fading/prediction.hpp"
#include "fading/random.hpp"
#include "fading/report.hpp"
#include "fading/special_functions.hpp"
#include "fading/sphere_search.hpp"

namespace fading {
namespace {

std::string num(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 10);
  return {buf, res.ptr};
}

// Ei(-s) = gamma + log s + sum_{n>=1} (-s)^n / (n n!) in extended precision.
long double ei_neg_series(long double s) {
  long double term = 1.0L;
  long double sum = 0.0L;
  for (int n = 1; n < 200; ++n) {
    term *= -s / n;
    const long double add = term / n;
    sum += add;
    if (std::fabs(add) < 1e-22L * std::fabs(sum)) {
      break;
    }
  }
  return 0.57721566490153286060651209008240243L + std::log(s) + sum;
}

CMatrix random_complex_matrix(int rows, int cols, Engine& engine) {
  CMatrix m(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      m(r, c) = standard_complex_normal(engine);
    }
  }
  return m;
}

CVector random_complex_vector(int n, Engine& engine, double scale) {
  CVector v(n);
  for (int i = 0; i < n; ++i) {
    v(i) = scale * standard_complex_normal(engine);
  }
  return v;
}

CMatrix random_covariance(int n, Engine& engine) {
  const CMatrix b = random_complex_matrix(n, n, engine);
  return b * b.adjoint() / static_cast<double>(n) + 0.1 * CMatrix::Identity(n, n);
}

// Stable because the coefficient norms sum to less than one.
GaussianVectorProcess random_gaussian_model(int nt, int order, double mean_scale,
                                            Engine& engine) {
  std::vector<CMatrix> ar;
  for (int i = 0; i < order; ++i) {
    const CMatrix g = random_complex_matrix(nt, nt, engine);
    const double norm = Eigen::JacobiSVD<CMatrix>(g).singularValues()(0);
    const double target = (0.3 + 0.6 * uniform01(engine)) * 0.9 / order;
    ar.push_back(g * (target / norm));
  }
  return GaussianVectorProcess(random_complex_vector(nt, engine, mean_scale), ar,
                               random_covariance(nt, engine));
}

GaussianVectorProcess spatially_iid_ar(CVector mean, std::vector<Complex> coeffs, double q) {
  const int nt = static_cast<int>(mean.size());
  std::vector<CMatrix> ar;
  for (const Complex& a : coeffs) {
    ar.push_back(a * CMatrix::Identity(nt, nt));
  }
  return GaussianVectorProcess(std::move(mean), ar, q * CMatrix::Identity(nt, nt));
}

CriterionResult ac1(const AcceptanceOptions& opt) {
  CriterionResult r{1, "special functions", true, ""};
  const double e1 = exp_integral_ei_neg(1.0);
  const double e05 = exp_integral_ei_neg(0.5);
  const double o1 = static_cast<double>(ei_neg_series(1.0L));
  const double o05 = static_cast<double>(ei_neg_series(0.5L));
  const double err_oracle = std::max(std::abs(e1 - o1), std::abs(e05 - o05));
  const bool quoted = std::abs(e1 - -0.2193839344) <= 5e-11 && std::abs(e05 - -0.5597736) <= 5e-8;
  r.passed = err_oracle <= 1e-9 && quoted;

  Engine engine = make_engine(opt.seed, 101);
  constexpr std::size_t n = 1000000;
  double worst_z = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Complex mu = std::polar(3.0 * uniform01(engine), 2.0 * kPi * uniform01(engine));
    const double var = 0.2 + 2.8 * uniform01(engine);
    const double sd = std::sqrt(var);
    Engine draws = make_engine(opt.seed, 1000 + static_cast<std::uint64_t>(trial));
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double l = std::log(std::norm(mu + sd * standard_complex_normal(draws)));
      sum += l;
      sum_sq += l * l;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / (n - 1.0));
    const double expected = noncentral_log_magnitude_sq_mean(std::norm(mu), var);
    worst_z = std::max(worst_z, std::abs(mean - expected) / se);
  }
  r.passed = r.passed && worst_z <= 3.0;
  r.detail = "Ei(-1)=" + num(e1) + " Ei(-0.5)=" + num(e05) + " max|err| vs series " +
             num(err_oracle) + " (tol 1e-9); Monte Carlo worst |z|=" + num(worst_z) +
             " over 20 pairs at N=1e6 (tol 3)";
  return r;
}

CriterionResult ac2(const AcceptanceOptions& opt) {
  CriterionResult r{2, "d* closed form vs brute force", true, ""};
  Engine engine = make_engine(opt.seed, 201);
  double worst_excess = -std::numeric_limits<double>::infinity();
  double worst_polished_gap = 0.0;
  double worst_raw_gap = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int nt = 2 + trial % 3;
    const CVector d = random_complex_vector(nt, engine, 1.0);
    const CMatrix k = random_covariance(nt, engine);
    const DStar closed = d_star(d, k);
    double best = 0.0;
    CVector best_x;
    for (int i = 0; i < 100000; ++i) {
      const CVector x = random_unit_vector(nt, engine);
      const double q = d_star_quotient(d, k, x);
      if (q > best) {
        best = q;
        best_x = x;
      }
    }
    // Uniform probes cannot land within 1e-3 of the peak once the sphere has
    // more than two complex dimensions, so the best probe is polished locally.
    SphereSearchOptions polish;
    polish.restarts = 0;
    const std::vector<CVector> warm{best_x};
    const SphereSearchResult refined = maximize_on_sphere(
        nt, [&](const CVector& x) { return d_star_quotient(d, k, x); }, polish, warm);
    worst_excess = std::max(worst_excess, std::max(best, refined.value) - closed.value);
    worst_raw_gap = std::max(worst_raw_gap, closed.value - best);
    worst_polished_gap = std::max(worst_polished_gap, closed.value - refined.value);
  }
  const bool bound_ok = worst_excess <= 1e-12;
  const bool probe_ok = worst_polished_gap <= 1e-3;

  double worst_identity = 0.0;
  double worst_complex_angle = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int nt = 2 + trial % 3;
    CVector d(nt);
    for (int i = 0; i < nt; ++i) {
      d(i) = 2.0 * uniform01(engine) - 1.0;
    }
    const DStar ds = d_star(d, CMatrix::Identity(nt, nt));
    worst_identity = std::max({worst_identity, std::abs(ds.value - d.norm()) / d.norm(),
                               (ds.direction - d / d.norm()).norm()});
    const CVector dc = random_complex_vector(nt, engine, 1.0);
    const DStar dsc = d_star(dc, CMatrix::Identity(nt, nt));
    worst_complex_angle =
        std::max(worst_complex_angle, direction_angle(dsc.direction, dc.conjugate() / dc.norm()));
  }
  const bool identity_ok = worst_identity <= 1e-15 && worst_complex_angle <= 1e-12;
  r.passed = bound_ok && probe_ok && identity_ok;
  r.detail = "max(probe - d*)=" + num(worst_excess) + " (tol 1e-12); max(d* - polished probe)=" +
             num(worst_polished_gap) + " (tol 1e-3, unpolished " + num(worst_raw_gap) +
             "); K=I real d: max deviation " + num(worst_identity) +
             ", complex d angle to conj(d)/|d| " + num(worst_complex_angle);
  return r;
}

CriterionResult ac3(const AcceptanceOptions&) {
  CriterionResult r{3, "prediction consistency", true, ""};
  const CVector zero = CVector::Zero(1);
  const std::vector<GaussianVectorProcess> models{
      GaussianVectorProcess::spatially_iid_ar1(zero, 0.5),
      GaussianVectorProcess::spatially_iid_ar1(zero, std::polar(0.8, 0.7)),
      spatially_iid_ar(zero, {0.5, -0.3}, 1.0),
      spatially_iid_ar(zero, {Complex(0.6, 0.2), Complex(-0.2, 0.1)}, 2.0),
  };
  double worst = 0.0;
  for (const GaussianVectorProcess& m : models) {
    const ScalarProjection g = project(m, CVector::Ones(1));
    const double levinson = converged_prediction_error(g).error_variance;
    const double szego =
        szego_prediction_error([&](double lambda) { return g.spectral_density(lambda); });
    worst = std::max(worst, std::abs(szego - levinson) / levinson);
  }
  const double eps =
      converged_prediction_error(project(models[0], CVector::Ones(1))).error_variance;
  const double rel = std::abs(eps - 0.75) / 0.75;
  r.passed = worst <= 1e-8 && rel <= 1e-9;
  r.detail = "max relative Szego/Levinson gap " + num(worst) + " (tol 1e-8); AR(1) 0.5 eps^2=" +
             num(eps) + " relative error " + num(rel) + " (tol 1e-9)";
  return r;
}

CriterionResult ac4(const AcceptanceOptions& opt) {
  CriterionResult r{4, "spatially IID pipeline equality", true, ""};
  CVector d(2);
  d << 0.6, 0.8;
  const GaussianVectorProcess model = GaussianVectorProcess::spatially_iid_ar1(d, 0.5);
  OptimizerConfig config;
  config.search.seed = opt.seed;
  const FadingNumberReport lower = best_lower_bound(model, config);
  const FadingNumberReport closed = chi_gauss_spatial_iid(model);
  const double angle = direction_angle(*lower.direction, d / d.norm());
  const double gap = std::abs(lower.value - closed.value);
  const double quoted_gap = std::abs(closed.value - -0.4929341);
  r.passed = gap <= 1e-6 && quoted_gap <= 1e-6 && angle <= 1e-3;
  r.detail = "lower-bound search " + num(lower.value) + " vs closed form " + num(closed.value) +
             " (|diff| " + num(gap) + ", tol 1e-6; vs -0.4929341: " + num(quoted_gap) +
             "); direction angle " + num(angle) + " (tol 1e-3)";
  return r;
}

CriterionResult ac5(const AcceptanceOptions& opt) {
  CriterionResult r{5, "bound ordering", true, ""};
  Engine engine = make_engine(opt.seed, 501);
  OptimizerConfig config;
  config.search.seed = opt.seed;
  config.search.restarts = 8;
  double worst_violation = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 20; ++trial) {
    const int nt = 2 + trial % 2;
    const int order = trial % 3;
    const GaussianVectorProcess model = random_gaussian_model(nt, order, 1.0, engine);
    const double lower = best_lower_bound(model, config).value;
    const double upper = chi_gauss_upper_norm_ratio(model).value;
    worst_violation = std::max(worst_violation, lower - upper);
  }
  double worst_tight = 0.0;
  const std::vector<GaussianVectorProcess> iid{
      GaussianVectorProcess::spatially_iid_ar1(random_complex_vector(2, engine, 1.0), 0.5),
      GaussianVectorProcess::spatially_iid_ar1(random_complex_vector(3, engine, 1.0),
                                               std::polar(0.7, -1.1)),
      spatially_iid_ar(random_complex_vector(2, engine, 1.5), {0.5, -0.3}, 0.5),
      spatially_iid_ar(random_complex_vector(3, engine, 0.5), {Complex(0.3, 0.3)}, 2.0),
      GaussianVectorProcess::white(random_complex_vector(4, engine, 1.0),
                                   3.0 * CMatrix::Identity(4, 4)),
  };
  for (const GaussianVectorProcess& model : iid) {
    const double lower = best_lower_bound(model, config).value;
    const double upper = chi_gauss_upper_norm_ratio(model).value;
    worst_tight = std::max(worst_tight, std::abs(lower - upper));
  }
  r.passed = worst_violation <= 1e-6 && worst_tight <= 1e-9;
  r.detail = "max(lower - upper) over 20 random models " + num(worst_violation) +
             " (tol 1e-6); max |lower - upper| on 5 spatially IID models " + num(worst_tight) +
             " (tol 1e-9)";
  return r;
}

CriterionResult ac6(const AcceptanceOptions& opt) {
  CriterionResult r{6, "isotropic coincidence", true, ""};
  const std::vector<GaussianVectorProcess> models{
      GaussianVectorProcess::spatially_iid_ar1(CVector::Zero(2), 0.5),
      GaussianVectorProcess::spatially_iid_ar1(CVector::Zero(3), std::polar(0.8, 1.3)),
      spatially_iid_ar(CVector::Zero(2), {0.5, -0.3}, 1.0),
      GaussianVectorProcess::white(CVector::Zero(4), CMatrix::Identity(4, 4)),
  };
  OptimizerConfig config;
  config.search.seed = opt.seed;
  config.search.restarts = 4;
  double worst_spread = 0.0;
  double first_value = 0.0;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const GaussianVectorProcess& m = models[i];
    const double iso =
        isotropic_fading_number(m, CVector::Unit(m.nt(), 0), std::nullopt, opt.seed).value;
    const double lower = best_lower_bound(m, config).value;
    const double upper =
        upper_bound_estimate(m, 64, UpperBoundMode::coordinate_ascent, config).value;
    worst_spread = std::max(worst_spread,
                            std::max({iso, lower, upper}) - std::min({iso, lower, upper}));
    if (i == 0) {
      first_value = iso;
    }
  }
  const double expected = -1.0 - kEulerGamma + std::log(4.0 / 3.0);
  const double err = std::abs(first_value - expected);
  const double quoted = std::abs(first_value - -1.2895335);
  r.passed = worst_spread <= 1e-6 && err <= 1e-6 && quoted <= 1e-6;
  r.detail = "max spread of isotropic/lower/upper(kappa=64) " + num(worst_spread) +
             " (tol 1e-6); AR(1) 0.5 value " + num(first_value) + ", |diff| to -1-gamma+log(4/3) " +
             num(err) + " (tol 1e-6)";
  return r;
}

CriterionResult ac7(const AcceptanceOptions& opt) {
  CriterionResult r{7, "Monte Carlo vs analytic bracket", true, ""};
  Engine engine = make_engine(opt.seed, 701);
  constexpr std::size_t kappa = 1;
  MonteCarloConfig mc;
  mc.samples = 100000;
  mc.knn.workers = opt.workers;
  double worst = 0.0;
  double worst_se = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int nt = 2 + trial % 2;
    const GaussianVectorProcess model = random_gaussian_model(nt, 1 + trial % 2, 1.0, engine);
    const CVector x = random_unit_vector(nt, engine);
    const double analytic = lower_bracket(model, x, kappa).bracket_value;
    mc.seed = derive_seed(opt.seed, 7000 + static_cast<std::uint64_t>(trial));
    const BoundEvaluation est =
        lower_bracket(GeneralFadingProcess::from_gaussian(model), x, kappa, mc);
    worst = std::max(worst, std::abs(est.bracket_value - analytic));
    worst_se = std::max(worst_se, est.standard_error);
  }
  r.passed = worst <= 0.03;
  r.detail = "max |kNN - analytic| over 10 models at kappa=1, N=1e5: " + num(worst) +
             " (tol 0.03); largest reported stderr " + num(worst_se);
  return r;
}

CriterionResult ac8(const AcceptanceOptions& opt) {
  CriterionResult r{8, "memoryless general evaluator", true, ""};
  const GaussianVectorProcess model =
      GaussianVectorProcess::white(CVector::Zero(2), CMatrix::Identity(2, 2));
  MemorylessGeneralConfig config;
  config.seed = opt.seed;
  config.search.seed = opt.seed;
  config.knn.workers = opt.workers;
  // The objective is flat here, so a stalled simplex is expected.
  config.fail_on_budget = false;
  const FadingNumberReport report =
      chi_memoryless_general(GeneralFadingProcess::from_gaussian(model), config);
  const double expected = -1.0 - kEulerGamma;
  const double err = std::abs(report.value - expected);
  r.passed = err <= 0.02;
  r.detail = "estimate " + num(report.value) + " vs -1-gamma, |diff| " + num(err) +
             " (tol 0.02); stderr " + num(report.diagnostics.at("stderr"));
  return r;
}

CriterionResult ac9(const AcceptanceOptions& opt) {
  CriterionResult r{9, "capacity trend", true, ""};
  const GaussianVectorProcess model =
      GaussianVectorProcess::white(CVector::Zero(1), CMatrix::Identity(1, 1));
  const std::vector<double> grid{40.0, 60.0, 80.0, 100.0};
  const SimulationTable table = capacity_sweep(model, CVector::Ones(1), grid, 1.0, opt.seed);
  bool increasing = true;
  double highest = -std::numeric_limits<double>::infinity();
  std::string gaps;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (i > 0 && !(table.rows[i].mi_minus_loglog > table.rows[i - 1].mi_minus_loglog)) {
      increasing = false;
    }
    highest = std::max(highest, table.rows[i].mi_minus_loglog);
    gaps += (i ? "," : "") + num(table.rows[i].mi_minus_loglog);
  }
  const double ceiling = -1.0 - kEulerGamma + 0.1;

  double worst_z = 0.0;
  for (const double snr_db : {40.0, 100.0}) {
    const double es = std::pow(10.0, snr_db / 10.0);
    const std::vector<Complex> x =
        achievability_input_samples(es, 100000, derive_seed(opt.seed, 900));
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const Complex& v : x) {
      const double h = std::log(kPi * std::exp(1.0) * (std::norm(v) + 1.0));
      sum += h;
      sum_sq += h * h;
    }
    const double n = static_cast<double>(x.size());
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / (n - 1.0));
    worst_z = std::max(worst_z, std::abs(mean - conditional_output_entropy(1.0, es, 1.0)) / se);
  }
  r.passed = increasing && highest <= ceiling && worst_z <= 3.0;
  r.detail = "gaps at 40/60/80/100 dB: " + gaps + (increasing ? " (increasing)" : " (NOT increasing)") +
             "; max " + num(highest) + " vs ceiling " + num(ceiling) +
             "; h(Y|X) quadrature vs Monte Carlo worst |z| " + num(worst_z) + " (tol 3)";
  return r;
}

CriterionResult ac10(const AcceptanceOptions& opt) {
  CriterionResult r{10, "determinism", true, ""};
  Engine engine = make_engine(opt.seed, 1001);
  const GaussianVectorProcess model = random_gaussian_model(2, 1, 1.0, engine);
  const CVector x = random_unit_vector(2, engine);
  MonteCarloConfig mc;
  mc.samples = 20000;
  mc.seed = opt.seed;
  const GeneralFadingProcess general = GeneralFadingProcess::from_gaussian(model);
  mc.knn.workers = 1;
  const BoundEvaluation one = lower_bracket(general, x, 2, mc);
  mc.knn.workers = 4;
  const BoundEvaluation four = lower_bracket(general, x, 2, mc);
  const std::string report_one = render_report("determinism", {}, opt.seed, to_json(one));
  const std::string report_four = render_report("determinism", {}, opt.seed, to_json(four));
  const bool workers_ok = report_one == report_four;

  const std::vector<double> grid{40.0, 60.0};
  QuadratureConfig quad;
  quad.radial_nodes = 1024;
  quad.input_nodes = 128;
  const std::string csv_a = to_csv(capacity_sweep(model, x, grid, 1.0, opt.seed, quad));
  const std::string csv_b = to_csv(capacity_sweep(model, x, grid, 1.0, opt.seed, quad));
  const bool sweep_ok = csv_a == csv_b;
  const bool path_ok = sample_path(model, 1000, opt.seed) == sample_path(model, 1000, opt.seed);
  r.passed = workers_ok && sweep_ok && path_ok;
  r.detail = std::string("Monte Carlo report with 1 vs 4 workers ") +
             (workers_ok ? "identical" : "DIFFERENT") + "; repeated sweep CSV " +
             (sweep_ok ? "identical" : "DIFFERENT") + "; repeated sample path " +
             (path_ok ? "identical" : "DIFFERENT");
  return r;
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
  using Fn = CriterionResult (*)(const AcceptanceOptions&);
  static const Fn table[] = {ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10};
  if (id < 1 || id > 10) {
    throw PreconditionError("acceptance criteria are numbered 1 to 10");
  }
  try {
    return table[id - 1](options);
  } catch (const std::exception& e) {
    return {id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what()};
  }
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 10; ++id) {
    if (options.only.empty() ||
        std::find(options.only.begin(), options.only.end(), id) != options.only.end()) {
      out.push_back(run_criterion(id, options));
    }
  }
  return out;
}

std::string format_result(const CriterionResult& result) {
  return "AC" + std::to_string(result.id) + (result.passed ? " PASS " : " FAIL ") +
         result.title + ": " + result.detail;
}

}  // namespace fading

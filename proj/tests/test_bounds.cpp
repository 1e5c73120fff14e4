#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fading/bounds.hpp"
#include "fading/errors.hpp"
#include "fading/random.hpp"
#include "fading/special_functions.hpp"
#include "fading/sphere_search.hpp"
#include "oracles.hpp"

using namespace fading;

namespace {


CVector e1(int nt) { return CVector::Unit(nt, 0); }

GaussianVectorProcess random_ar1(int nt, Engine& e) {
  CMatrix g(nt, nt);
  CMatrix b(nt, nt);
  CVector mean(nt);
  for (int i = 0; i < nt; ++i) {
    mean(i) = standard_complex_normal(e);
    for (int j = 0; j < nt; ++j) {
      g(i, j) = standard_complex_normal(e);
      b(i, j) = standard_complex_normal(e);
    }
  }
  const double norm = Eigen::JacobiSVD<CMatrix>(g).singularValues()(0);
  return GaussianVectorProcess(mean, {g * (0.7 / norm)},
                               b * b.adjoint() + 0.2 * CMatrix::Identity(nt, nt));
}

}  // namespace

TEST_CASE("spatially IID AR(1) bracket matches the closed form") {
  CVector d = CVector::Zero(2);
  d(0) = 0.6;
  d(1) = 0.8;
  const auto p = GaussianVectorProcess::spatially_iid_ar1(d, 0.5);
  const CVector x = d / d.norm();
  for (std::size_t kappa : {64u, 128u}) {
    const BoundEvaluation b = lower_bracket(p, x, kappa);
    CHECK(b.bracket_value == doctest::Approx(-0.4929341).epsilon(1e-7));
    CHECK(b.standard_error == 0.0);
    CHECK(b.method == BoundMethod::gaussian_analytic);
    CHECK(b.direction_sequence.size() == 1);
  }
  CHECK(lower_bracket(p, x, std::nullopt).bracket_value ==
        doctest::Approx(chi_gauss_spatial_iid(d, 0.75).value).epsilon(1e-12));
}

TEST_CASE("kappa = 0 is the memoryless bracket") {
  Engine e = make_engine(21, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = random_ar1(2 + trial % 2, e);
    const CVector x = random_unit_vector(p.nt(), e);
    const ScalarProjection g = project(p, x);
    const double expected = std::log(kPi) +
                            noncentral_log_magnitude_sq_mean(std::norm(g.mean()), g.variance()) -
                            std::log(kPi * std::exp(1.0) * g.variance());
    CHECK(lower_bracket(p, x, 0).bracket_value == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("white processes ignore the past") {
  CMatrix k(2, 2);
  k << 2.0, Complex(0.3, 0.4), Complex(0.3, -0.4), 1.0;
  CVector d(2);
  d << Complex(1.0, 0.5), 0.2;
  const auto white = GaussianVectorProcess::white(d, k);
  const CVector x = d_star(d, k).direction;
  const double zero = lower_bracket(white, x, 0).bracket_value;
  for (std::size_t kappa : {1u, 5u, 40u}) {
    CHECK(lower_bracket(white, x, kappa).bracket_value == doctest::Approx(zero).epsilon(1e-12));
    CHECK(upper_bound_estimate(white, kappa, UpperBoundMode::coordinate_ascent).value ==
          doctest::Approx(zero).epsilon(1e-9));
  }
  CHECK(best_lower_bound(white).value == doctest::Approx(chi_memoryless_gauss(d_star(d, k).value)).epsilon(1e-9));
}

TEST_CASE("bracket is nondecreasing in kappa and converges") {
  Engine e = make_engine(22, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = random_ar1(2, e);
    const CVector x = random_unit_vector(2, e);
    double previous = lower_bracket(p, x, 0).bracket_value;
    for (std::size_t kappa = 1; kappa <= 64; kappa *= 2) {
      const double v = lower_bracket(p, x, kappa).bracket_value;
      CHECK(v >= previous - 1e-12);
      previous = v;
    }
    CHECK(std::abs(lower_bracket(p, x, std::nullopt).bracket_value - previous) < 1e-6);
  }
}

TEST_CASE("lower bound search finds the mean direction for spatially IID models") {
  CVector d(3);
  d << Complex(0.2, 0.5), -0.7, Complex(0.0, 0.3);
  const auto p = GaussianVectorProcess::spatially_iid_ar1(d, 0.5);
  const FadingNumberReport r = best_lower_bound(p);
  REQUIRE(r.direction);
  CHECK(direction_angle(*r.direction, d.conjugate() / d.norm()) < 1e-3);
  CHECK(std::abs(r.value - chi_gauss_spatial_iid(d, 0.75).value) < 1e-6);
  CHECK(r.kind == ReportKind::best_lower_bound);
}

TEST_CASE("nt = 1: the supremum is the SISO bracket") {
  CVector d(1);
  d << Complex(0.4, -0.3);
  const auto p = GaussianVectorProcess::spatially_iid_ar1(d, Complex(0.3, 0.4));
  const CVector one = CVector::Ones(1);
  CHECK(best_lower_bound(p).value ==
        doctest::Approx(lower_bracket(p, one, std::nullopt).bracket_value).epsilon(1e-12));
}

TEST_CASE("upper bound modes") {
  Engine e = make_engine(23, 0);
  for (int trial = 0; trial < 4; ++trial) {
    const auto p = random_ar1(2, e);
    OptimizerConfig opt;
    opt.kappa = 6;
    opt.search.restarts = 4;
    const double lower = best_lower_bound(p, opt).value;
    const FadingNumberReport constant = upper_bound_estimate(p, 6, UpperBoundMode::constant_direction, opt);
    CHECK(std::abs(constant.value - lower) < 1e-9);
    const FadingNumberReport ascent = upper_bound_estimate(p, 6, UpperBoundMode::coordinate_ascent, opt);
    CHECK(ascent.value >= constant.value - 1e-12);
    CHECK(ascent.diagnostics.count("improvement_over_constant") == 1);
  }
  // Spatially IID: time-varying directions gain nothing.
  CVector d = CVector::Zero(2);
  d(1) = 1.0;
  const auto iid = GaussianVectorProcess::spatially_iid_ar1(d, 0.5);
  const FadingNumberReport c = upper_bound_estimate(iid, 8, UpperBoundMode::constant_direction);
  const FadingNumberReport a = upper_bound_estimate(iid, 8, UpperBoundMode::coordinate_ascent);
  CHECK(std::abs(a.value - c.value) < 1e-6);
  CHECK_THROWS_AS(upper_bound_estimate(iid, 0, UpperBoundMode::constant_direction), PreconditionError);
}

TEST_CASE("upper bracket with constant directions is the lower bracket") {
  Engine e = make_engine(24, 0);
  const auto p = random_ar1(3, e);
  const CVector x = random_unit_vector(3, e);
  const std::vector<CVector> seq(5, x);
  CHECK(upper_bracket(p, seq).bracket_value ==
        doctest::Approx(lower_bracket(p, x, 4).bracket_value).epsilon(1e-12));
}

TEST_CASE("memory term") {
  CVector d = CVector::Zero(2);
  d(0) = 1.0;
  const auto p = GaussianVectorProcess::spatially_iid_ar1(d, 0.5);
  Engine e = make_engine(25, 0);
  const CVector a = random_unit_vector(2, e);
  const CVector b = random_unit_vector(2, e);
  CHECK(memory_term_gauss(p, a) == doctest::Approx(0.2876821).epsilon(1e-7));
  CHECK(std::abs(memory_term_gauss(p, a) - memory_term_gauss(p, b)) < 1e-9);
  const auto white = GaussianVectorProcess::white(d, CMatrix::Identity(2, 2));
  CHECK(std::abs(memory_term_gauss(white, a)) < 1e-15);
}

TEST_CASE("isotropic fading number") {
  const auto p = GaussianVectorProcess::spatially_iid_ar1(CVector::Zero(3), 0.5);
  const double expected = -1.0 - kEulerGamma + std::log(4.0 / 3.0);
  const FadingNumberReport r = isotropic_fading_number(p, e1(3), std::nullopt);
  CHECK(r.value == doctest::Approx(-1.2895335).epsilon(1e-7));
  CHECK(r.value == doctest::Approx(expected).epsilon(1e-12));
  Engine e = make_engine(26, 0);
  const CVector rotated = random_unitary(3, e) * e1(3);
  CHECK(std::abs(isotropic_fading_number(p, rotated, std::nullopt).value - r.value) < 1e-12);
  CHECK(std::abs(best_lower_bound(p).value - r.value) < 1e-9);

  CVector d = CVector::Zero(3);
  d(0) = 1.0;
  CHECK_THROWS_AS(isotropic_fading_number(GaussianVectorProcess::spatially_iid_ar1(d, 0.5), e1(3),
                                          std::nullopt),
                  IsotropyViolation);
}

TEST_CASE("Monte Carlo isotropic check on a scale mixture") {
  const auto base = GaussianVectorProcess::white(CVector::Zero(2), CMatrix::Identity(2, 2));
  const auto mix = GeneralFadingProcess::ar_scale_mixture(base, {{0.5, 0.5}, {0.4, 1.6}});
  MonteCarloConfig mc;
  mc.samples = 20000;
  mc.seed = 5;
  const FadingNumberReport r = isotropic_fading_number(mix, e1(2), 1, mc);
  CHECK(std::isfinite(r.value));
  CHECK(r.diagnostics.at("stderr") > 0.0);

  // A strongly non-isotropic law must be rejected.
  CMatrix k = CMatrix::Identity(2, 2);
  k(1, 1) = 9.0;
  const auto skewed = GeneralFadingProcess::from_gaussian(GaussianVectorProcess::white(CVector::Zero(2), k));
  CHECK_THROWS_AS(isotropic_fading_number(skewed, e1(2), 1, mc), IsotropyViolation);
}

TEST_CASE("Monte Carlo bracket agrees with the analytic one") {
  Engine e = make_engine(27, 0);
  const auto p = random_ar1(2, e);
  const CVector x = random_unit_vector(2, e);
  MonteCarloConfig mc;
  mc.samples = 50000;
  mc.seed = 9;
  const BoundEvaluation m = lower_bracket(GeneralFadingProcess::from_gaussian(p), x, 1, mc);
  const BoundEvaluation a = lower_bracket(p, x, 1);
  CHECK(m.method == BoundMethod::monte_carlo_knn);
  CHECK(m.standard_error > 0.0);
  CHECK(std::abs(m.bracket_value - a.bracket_value) < 0.03);

  MonteCarloConfig four = mc;
  four.knn.workers = 4;
  const BoundEvaluation m4 = lower_bracket(GeneralFadingProcess::from_gaussian(p), x, 1, four);
  CHECK(m4.bracket_value == m.bracket_value);
  CHECK(m4.standard_error == m.standard_error);
}

TEST_CASE("Kolmogorov-Smirnov helpers") {
  CHECK(ks_statistic({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_statistic({1, 2, 3}, {4, 5, 6}) == 1.0);
  CHECK(ks_statistic({1, 2, 3, 4}, {2.5}) == doctest::Approx(0.5));
  // c(0.05) = 1.3581 for the asymptotic distribution.
  CHECK(ks_critical_value(100, 100, 0.05) == doctest::Approx(1.3581 * std::sqrt(0.02)).epsilon(1e-3));
  CHECK_THROWS_AS(ks_statistic({}, {1.0}), PreconditionError);
}

TEST_CASE("preconditions") {
  const auto p = GaussianVectorProcess::spatially_iid_ar1(CVector::Zero(2), 0.5);
  CVector bad(2);
  bad << 1.0, 1.0;
  CHECK_THROWS_AS(lower_bracket(p, bad, 2), PreconditionError);
  CHECK_THROWS_AS(lower_bracket(p, e1(3), 2), PreconditionError);
  MonteCarloConfig mc;
  OptimizerConfig infinite;
  CHECK_THROWS_AS(best_lower_bound(GeneralFadingProcess::from_gaussian(p), infinite, mc),
                  PreconditionError);
}

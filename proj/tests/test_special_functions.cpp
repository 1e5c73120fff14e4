#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "fading/errors.hpp"
#include "fading/random.hpp"
#include "fading/special_functions.hpp"
#include "oracles.hpp"

using namespace fading;

namespace {

struct Frozen {
  double s;
  double ei;
};

// Ei(-s) from 40-digit arithmetic.
constexpr Frozen kEi[] = {
    {1e-10, -22.44863526513892398},
    {1e-3, -6.331539364136149332},
    {0.5, -0.55977359477616081175},
    {1.0, -0.21938393439552027368},
    {5.9, -0.00040390350894312939127},
    {6.0, -0.0003600824521626586593},
    {6.1, -0.00032108702794965470242},
    {10.0, -4.1569689296853242774e-6},
    {30.0, -3.0215520106888125448e-15},
    {100.0, -3.6835977616820321802e-46},
    {700.0, -1.4065187662340329228e-307},
};

constexpr Frozen kLogMinusEi[] = {
    {1e-12, -0.57721566490053286061},
    {1e-6, -0.57721466490178286055},
    {0.3, -0.29829615265008928019},
    {0.99, 0.21304948993667579572},
    {1.0, 0.21938393439552027368},
    {2.0, 0.74204769126800642898},
    {50.0, 3.9120230054281460586},
};

}  // namespace

TEST_CASE("Ei(-s) matches frozen high-precision values") {
  for (const Frozen& f : kEi) {
    CAPTURE(f.s);
    CHECK(exp_integral_ei_neg(f.s) == doctest::Approx(f.ei).epsilon(1e-13));
  }
}

TEST_CASE("Ei(-s) agrees with the extended precision series") {
  for (double s = 0.05; s <= 6.0; s += 0.05) {
    CAPTURE(s);
    const double oracle = static_cast<double>(oracle::ei_neg_series(s));
    CHECK(std::abs(exp_integral_ei_neg(s) - oracle) <= 1e-10 * std::abs(oracle));
  }
}

TEST_CASE("Ei(-s) is continuous across the series/continued fraction switch") {
  const double below = exp_integral_ei_neg(std::nextafter(6.0, 0.0));
  const double at = exp_integral_ei_neg(6.0);
  const double above = exp_integral_ei_neg(std::nextafter(6.0, 10.0));
  CHECK(std::abs(below - at) <= 1e-11 * std::abs(at));
  CHECK(std::abs(above - at) <= 1e-11 * std::abs(at));
}

TEST_CASE("Ei(-s) rejects nonpositive and non-finite arguments") {
  CHECK_THROWS_AS(exp_integral_ei_neg(0.0), DomainError);
  CHECK_THROWS_AS(exp_integral_ei_neg(-1.0), DomainError);
  CHECK_THROWS_AS(exp_integral_ei_neg(std::numeric_limits<double>::quiet_NaN()), DomainError);
  CHECK_THROWS_AS(exp_integral_ei_neg(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("Ei(-s) is increasing and negative") {
  double prev = exp_integral_ei_neg(1e-6);
  for (double s = 1e-3; s < 50.0; s *= 1.3) {
    const double v = exp_integral_ei_neg(s);
    CHECK(v < 0.0);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("log s - Ei(-s) matches frozen values and its limit at zero") {
  for (const Frozen& f : kLogMinusEi) {
    CAPTURE(f.s);
    CHECK(log_minus_ei_neg(f.s) == doctest::Approx(f.ei).epsilon(1e-13));
  }
  CHECK(log_minus_ei_neg(0.0) == doctest::Approx(-kEulerGamma).epsilon(1e-15));
  CHECK_THROWS_AS(log_minus_ei_neg(-0.1), DomainError);
}

TEST_CASE("log s - Ei(-s) is continuous at the branch switch") {
  const double a = log_minus_ei_neg(std::nextafter(1.0, 0.0));
  const double b = log_minus_ei_neg(1.0);
  CHECK(std::abs(a - b) <= 1e-14);
}

TEST_CASE("noncentral log-magnitude mean: limits and scaling") {
  CHECK(noncentral_log_magnitude_sq_mean(0.0, 1.0) == doctest::Approx(-kEulerGamma).epsilon(1e-15));
  // E log|G|^2 shifts by log a under G -> sqrt(a) G.
  const double base = noncentral_log_magnitude_sq_mean(0.7, 1.3);
  CHECK(noncentral_log_magnitude_sq_mean(0.7 * 5.0, 1.3 * 5.0) ==
        doctest::Approx(base + std::log(5.0)).epsilon(1e-13));
  // High Rice factor: close to log |mu|^2.
  CHECK(noncentral_log_magnitude_sq_mean(1e4, 1.0) == doctest::Approx(std::log(1e4)).epsilon(1e-4));
  CHECK_THROWS_AS(noncentral_log_magnitude_sq_mean(1.0, 0.0), DomainError);
}

TEST_CASE("noncentral log-magnitude mean matches Monte Carlo") {
  Engine engine = make_engine(11, 0);
  const Complex mu(0.8, -0.6);
  const double var = 0.5;
  const int n = 400000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double l = std::log(std::norm(mu + std::sqrt(var) * standard_complex_normal(engine)));
    sum += l;
    sum_sq += l * l;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / (n - 1.0));
  CHECK(std::abs(mean - noncentral_log_magnitude_sq_mean(std::norm(mu), var)) < 4.0 * se);
}

TEST_CASE("small-argument expansion bound") {
  for (double s = 1e-6; s <= 0.1; s *= 1.7) {
    CAPTURE(s);
    // Plus the rounding of the reference expression, whose size is |log s|.
    const double rounding = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(std::log(s));
    CHECK(std::abs(exp_integral_ei_neg(s) - (kEulerGamma + std::log(s) - s)) <= s * s / 4.0 + rounding);
  }
}

TEST_CASE("noncentral mean is continuous at zero mean") {
  CHECK(std::abs(noncentral_log_magnitude_sq_mean(1e-12, 1.0) + kEulerGamma) <= 1e-5);
  CHECK(noncentral_log_magnitude_sq_mean(1.0, 1.0) == doctest::Approx(0.2193839344).epsilon(1e-9));
}

TEST_CASE("Euler gamma constant") {
  CHECK(kEulerGamma == doctest::Approx(0.57721566490153286).epsilon(1e-15));
}

#include "fading/special_functions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fading/errors.hpp"

namespace fading {
namespace {

constexpr double kSeriesCrossover = 6.0;
constexpr int kMaxTerms = 500;

// sum_{n>=1} (-s)^n / (n n!)
double alternating_series(double s) {
  double term = 1.0;
  double sum = 0.0;
  for (int n = 1; n <= kMaxTerms; ++n) {
    term *= -s / n;
    const double contribution = term / n;
    sum += contribution;
    if (std::abs(contribution) <= std::numeric_limits<double>::epsilon() * std::abs(sum)) {
      return sum;
    }
  }
  throw NumericError("exponential integral series did not converge for s = " + std::to_string(s));
}

// E1(s) by the modified Lentz continued fraction, s > 1.
double e1_continued_fraction(double s) {
  constexpr double tiny = 1e-300;
  double b = s + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxTerms; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) <= std::numeric_limits<double>::epsilon()) {
      return h * std::exp(-s);
    }
  }
  throw NumericError("exponential integral continued fraction did not converge for s = " +
                     std::to_string(s));
}

}  // namespace

double exp_integral_ei_neg(double s) {
  if (!std::isfinite(s) || s <= 0.0) {
    throw DomainError("Ei(-s) requires finite s > 0, got " + std::to_string(s));
  }
  if (s <= kSeriesCrossover) {
    return kEulerGamma + std::log(s) + alternating_series(s);
  }
  return -e1_continued_fraction(s);
}

double log_minus_ei_neg(double s) {
  if (!std::isfinite(s) || s < 0.0) {
    throw DomainError("log(s) - Ei(-s) requires finite s >= 0, got " + std::to_string(s));
  }
  // log s cancels analytically against the series, which is well conditioned
  // up to s = 1.
  if (s < 1.0) {
    return -kEulerGamma - alternating_series(s);
  }
  return std::log(s) - exp_integral_ei_neg(s);
}

double noncentral_log_magnitude_sq_mean(double mean_sq, double variance) {
  if (!std::isfinite(variance) || variance <= 0.0) {
    throw DomainError("variance must be finite and positive, got " + std::to_string(variance));
  }
  if (!std::isfinite(mean_sq) || mean_sq < 0.0) {
    throw DomainError("mean_sq must be finite and nonnegative, got " + std::to_string(mean_sq));
  }
  return std::log(variance) + log_minus_ei_neg(mean_sq / variance);
}

}  // namespace fading

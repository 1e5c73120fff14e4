#include "fading/sphere_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fading/errors.hpp"

namespace fading {
namespace {

struct LocalResult {
  std::vector<double> angles;
  double value;
  bool converged;
};

class CountingObjective {
 public:
  CountingObjective(int nt, const std::function<double(const CVector&)>& f) : nt_(nt), f_(f) {}

  double operator()(std::span<const double> angles) {
    ++evaluations;
    return f_(direction_from_angles(angles, nt_));
  }

  int evaluations = 0;

 private:
  int nt_;
  const std::function<double(const CVector&)>& f_;
};

RVector central_gradient(CountingObjective& f, const std::vector<double>& x, double h) {
  RVector g(static_cast<Eigen::Index>(x.size()));
  std::vector<double> probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    g(static_cast<Eigen::Index>(i)) = (up - down) / (2.0 * h);
  }
  return g;
}

// BFGS ascent with an Armijo backtracking line search.
LocalResult bfgs_ascent(CountingObjective& f, std::vector<double> x,
                        const SphereSearchOptions& options) {
  const auto n = static_cast<Eigen::Index>(x.size());
  double value = f(x);
  RVector g = central_gradient(f, x, options.finite_difference_step);
  RMatrix inverse_hessian = RMatrix::Identity(n, n);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (g.norm() <= options.gradient_tolerance) {
      return {x, value, true};
    }
    RVector direction = inverse_hessian * g;
    if (direction.dot(g) <= 0.0) {
      inverse_hessian.setIdentity();
      direction = g;
    }
    double step = std::min(1.0, 0.5 / direction.norm());
    std::vector<double> trial(x.size());
    double trial_value = value;
    bool accepted = false;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      for (Eigen::Index i = 0; i < n; ++i) {
        trial[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + step * direction(i);
      }
      trial_value = f(trial);
      if (trial_value >= value + 1e-4 * step * direction.dot(g)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No ascent along a verified ascent direction: we are at the noise floor.
      return {x, value, g.norm() <= std::sqrt(options.gradient_tolerance)};
    }
    const RVector g_next = central_gradient(f, trial, options.finite_difference_step);
    RVector s(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      s(i) = trial[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)];
    }
    // Minimising -f: y = grad(-f)_next - grad(-f)
    const RVector y = g - g_next;
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      const RMatrix identity = RMatrix::Identity(n, n);
      const RMatrix left = identity - s * y.transpose() / sy;
      inverse_hessian = left * inverse_hessian * left.transpose() + s * s.transpose() / sy;
    }
    x = trial;
    value = trial_value;
    g = g_next;
  }
  return {x, value, g.norm() <= options.gradient_tolerance};
}

LocalResult nelder_mead_ascent(CountingObjective& f, const std::vector<double>& start,
                               const SphereSearchOptions& options) {
  const std::size_t n = start.size();
  std::vector<std::vector<double>> simplex(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) {
    simplex[i + 1][i] += 0.3;
  }
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    values[i] = f(simplex[i]);
  }
  std::vector<std::size_t> order(n + 1);
  const int budget = options.max_iterations * static_cast<int>(n + 1);
  for (int iter = 0; iter < budget; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[n - 1];
    if (values[best] - values[worst] <= options.value_tolerance) {
      return {simplex[best], values[best], true};
    }
    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        centroid[i] += simplex[order[k]][i] / static_cast<double>(n);
      }
    }
    auto along = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t i = 0; i < n; ++i) {
        p[i] = centroid[i] + t * (simplex[worst][i] - centroid[i]);
      }
      return p;
    };
    auto reflected = along(-1.0);
    const double reflected_value = f(reflected);
    if (reflected_value > values[best]) {
      auto expanded = along(-2.0);
      const double expanded_value = f(expanded);
      if (expanded_value > reflected_value) {
        simplex[worst] = std::move(expanded);
        values[worst] = expanded_value;
      } else {
        simplex[worst] = std::move(reflected);
        values[worst] = reflected_value;
      }
      continue;
    }
    if (reflected_value > values[second_worst]) {
      simplex[worst] = std::move(reflected);
      values[worst] = reflected_value;
      continue;
    }
    auto contracted = along(0.5);
    const double contracted_value = f(contracted);
    if (contracted_value > values[worst]) {
      simplex[worst] = std::move(contracted);
      values[worst] = contracted_value;
      continue;
    }
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == best) {
        continue;
      }
      for (std::size_t i = 0; i < n; ++i) {
        simplex[k][i] = simplex[best][i] + 0.5 * (simplex[k][i] - simplex[best][i]);
      }
      values[k] = f(simplex[k]);
    }
  }
  const auto best = static_cast<std::size_t>(
      std::max_element(values.begin(), values.end()) - values.begin());
  return {simplex[best], values[best], false};
}

}  // namespace

CVector direction_from_angles(std::span<const double> angles, int nt) {
  if (angles.size() != sphere_parameter_count(nt)) {
    throw PreconditionError("wrong number of sphere angles");
  }
  const auto m = static_cast<std::size_t>(nt - 1);
  CVector x(nt);
  double sine_product = 1.0;
  for (std::size_t j = 0; j < static_cast<std::size_t>(nt); ++j) {
    double magnitude = sine_product;
    if (j < m) {
      magnitude *= std::cos(angles[j]);
      sine_product *= std::sin(angles[j]);
    }
    const double phase = j == 0 ? 0.0 : angles[m + j - 1];
    x(static_cast<Eigen::Index>(j)) = std::polar(magnitude, phase);
  }
  // Negative cosines only flip signs; renormalise against rounding.
  return x / x.norm();
}

std::vector<double> angles_from_direction(const CVector& direction) {
  const auto nt = static_cast<int>(direction.size());
  const auto m = static_cast<std::size_t>(nt - 1);
  std::vector<double> angles(sphere_parameter_count(nt), 0.0);
  Eigen::Index reference = 0;
  while (reference + 1 < direction.size() && std::abs(direction(reference)) == 0.0) {
    ++reference;
  }
  const Complex unphase = std::polar(1.0, -std::arg(direction(reference)));
  const CVector x = direction * unphase;
  for (std::size_t j = 0; j < m; ++j) {
    const double tail = x.tail(nt - static_cast<Eigen::Index>(j) - 1).norm();
    angles[j] = std::atan2(tail, std::abs(x(static_cast<Eigen::Index>(j))));
  }
  for (std::size_t j = 1; j < static_cast<std::size_t>(nt); ++j) {
    angles[m + j - 1] = std::arg(x(static_cast<Eigen::Index>(j)));
  }
  return angles;
}

CVector random_unit_vector(int nt, Engine& engine) {
  CVector v(nt);
  for (int i = 0; i < nt; ++i) {
    v(i) = standard_complex_normal(engine);
  }
  return v / v.norm();
}

CMatrix random_unitary(int nt, Engine& engine) {
  CMatrix z(nt, nt);
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nt; ++j) {
      z(i, j) = standard_complex_normal(engine);
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < nt; ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0.0) {
      q.col(i) *= d / std::abs(d);
    }
  }
  return q;
}

double direction_angle(const CVector& a, const CVector& b) {
  // Chord length after phase alignment; acos of the overlap loses half the
  // digits near zero.
  const CVector ua = a / a.norm();
  const CVector ub = b / b.norm();
  const Complex overlap = ua.dot(ub);
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  const double chord = (ub - phase * ua).norm();
  return 2.0 * std::asin(std::min(1.0, 0.5 * chord));
}

SphereSearchResult maximize_on_sphere(int nt, const std::function<double(const CVector&)>& objective,
                                      const SphereSearchOptions& options,
                                      std::span<const CVector> warm_starts) {
  if (nt < 1) {
    throw PreconditionError("nt must be positive");
  }
  CountingObjective f(nt, objective);
  SphereSearchResult best;
  if (nt == 1) {
    best.direction = CVector::Ones(1);
    best.value = f(std::vector<double>{});
    best.evaluations = f.evaluations;
    best.converged = true;
    return best;
  }

  std::vector<std::vector<double>> starts;
  for (const auto& w : warm_starts) {
    starts.push_back(angles_from_direction(w / w.norm()));
  }
  Engine engine = make_engine(options.seed, 0x5e7a);
  for (int r = 0; r < options.restarts; ++r) {
    starts.push_back(angles_from_direction(random_unit_vector(nt, engine)));
  }
  if (starts.empty()) {
    throw PreconditionError("sphere search needs at least one starting point");
  }

  bool have_best = false;
  std::vector<double> best_angles;
  for (const auto& start : starts) {
    const LocalResult local = options.method == SphereMethod::bfgs
                                  ? bfgs_ascent(f, start, options)
                                  : nelder_mead_ascent(f, start, options);
    if (!have_best || local.value > best.value) {
      have_best = true;
      best.value = local.value;
      best.converged = local.converged;
      best_angles = local.angles;
    }
  }
  best.direction = direction_from_angles(best_angles, nt);
  best.evaluations = f.evaluations;
  return best;
}

}  // namespace fading

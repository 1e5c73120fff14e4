#include "fading/capacity_sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "fading/errors.hpp"

namespace fading {
namespace {

constexpr double kE = 2.71828182845904523536028747135266250;

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
Rule gauss_legendre(std::size_t order) {
  Rule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const auto n = static_cast<double>(order);
  for (std::size_t i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= order; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) {
        p1 = x;
        p0 = 1.0;
      }
      derivative = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / derivative;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

struct Feature {
  double center;
  double width;
};

// Composite Gauss-Legendre on [lo, hi] with `panels` equal panels, plus
// geometrically graded breakpoints around features narrower than a panel.
Rule composite_rule(double lo, double hi, std::size_t panels, const Rule& base,
                    std::span<const Feature> features) {
  const double spacing = (hi - lo) / static_cast<double>(panels);
  std::vector<double> breaks;
  breaks.reserve(panels + 1 + 64 * features.size());
  for (std::size_t i = 0; i <= panels; ++i) {
    breaks.push_back(lo + spacing * static_cast<double>(i));
  }
  for (const Feature& f : features) {
    if (!(f.center >= lo && f.center <= hi) || !(f.width > 0.0) || f.width >= spacing) {
      continue;
    }
    breaks.push_back(f.center);
    for (double w = f.width; w < spacing; w *= 2.0) {
      if (f.center - w > lo) breaks.push_back(f.center - w);
      if (f.center + w < hi) breaks.push_back(f.center + w);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [&](double a, double b) { return b - a <= 1e-14 * (hi - lo); }),
               breaks.end());
  Rule rule;
  rule.nodes.reserve((breaks.size() - 1) * base.nodes.size());
  rule.weights.reserve(rule.nodes.capacity());
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double half = 0.5 * (breaks[p + 1] - breaks[p]);
    const double mid = 0.5 * (breaks[p + 1] + breaks[p]);
    for (std::size_t q = 0; q < base.nodes.size(); ++q) {
      rule.nodes.push_back(mid + half * base.nodes[q]);
      rule.weights.push_back(half * base.weights[q]);
    }
  }
  return rule;
}

// log(I0(z) e^{-z}) for z >= 0.
double log_bessel_i0_scaled(double z) {
  if (z < 500.0) {
    return std::log(std::cyl_bessel_i(0.0, z)) - z;
  }
  const double inv = 1.0 / z;
  return -0.5 * std::log(2.0 * kPi * z) +
         std::log1p(inv * (0.125 + inv * (9.0 / 128.0 + inv * (225.0 / 3072.0))));
}

void check_channel(double es, double noise_var) {
  if (!std::isfinite(es) || !(es > kE)) {
    throw DomainError("peak power es must exceed e, got " + std::to_string(es));
  }
  if (!std::isfinite(noise_var) || !(noise_var > 0.0)) {
    throw DomainError("noise variance must be positive");
  }
}

std::size_t panel_count(std::size_t nodes, double range, const QuadratureConfig& config) {
  const std::size_t requested = nodes / std::max<std::size_t>(1, config.panel_order);
  const auto needed = static_cast<std::size_t>(std::ceil(range / config.max_panel_width));
  return std::max<std::size_t>({1, requested, needed});
}

MutualInformation mi_once(Complex h_mean, double h_var, double es, double noise_var,
                          const QuadratureConfig& config, bool check_tail) {
  const double a = std::log(std::log(es));
  const double b = std::log(es);
  const double input_density = 1.0 / (b - a);
  const double m = std::abs(h_mean);
  const Rule base = gauss_legendre(config.panel_order);
  const std::size_t input_panels = panel_count(config.input_nodes, b - a, config);
  const Rule plain_input = composite_rule(a, b, input_panels, base, {});

  const double t_lo = std::log(noise_var) - config.lower_margin;
  const double t_hi = std::log(es * (m * m + h_var) + noise_var) + config.upper_margin;
  std::vector<Feature> radial_features;
  if (m > 0.0) {
    for (const double u : {a, b}) {
      const double rho = m * std::exp(0.5 * u);
      const double s = std::sqrt(h_var * std::exp(u) + noise_var);
      radial_features.push_back({u + 2.0 * std::log(m), 2.0 * s / rho});
    }
  }
  const Rule radial = composite_rule(t_lo, t_hi,
                                     panel_count(config.radial_nodes, t_hi - t_lo, config), base,
                                     radial_features);
  const double input_spacing = (b - a) / static_cast<double>(input_panels);

  double entropy = 0.0;
  double mass = 0.0;
  std::vector<double> log_terms;
  for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
    const double t = radial.nodes[i];
    const double rho = std::exp(0.5 * t);
    const Rule* input = &plain_input;
    Rule graded;
    if (m > 0.0) {
      // The conditional density peaks near |X| |h_mean| = |Y|; resolve it
      // when it is narrower than an input panel.
      const double u_star = t - 2.0 * std::log(m);
      const double s = std::sqrt(h_var * std::exp(u_star) + noise_var);
      const double width = 2.0 * s / rho;
      // Just outside [a, b] the integrand is a steep tail against the
      // nearer endpoint.
      if (u_star > a - 8.0 * width && u_star < b + 8.0 * width && width < input_spacing) {
        const Feature f{std::clamp(u_star, a, b), width};
        graded = composite_rule(a, b, input_panels, base, std::span<const Feature>(&f, 1));
        input = &graded;
      }
    }
    log_terms.resize(input->nodes.size());
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < input->nodes.size(); ++j) {
      const double u = input->nodes[j];
      const double s2 = h_var * std::exp(u) + noise_var;
      double log_f = -std::log(kPi * s2);
      if (m > 0.0) {
        const double mu = m * std::exp(0.5 * u);
        log_f += -(rho - mu) * (rho - mu) / s2 + log_bessel_i0_scaled(2.0 * rho * mu / s2);
      } else {
        log_f += -rho * rho / s2;
      }
      log_terms[j] = std::log(input->weights[j] * input_density) + log_f;
      peak = std::max(peak, log_terms[j]);
    }
    if (!std::isfinite(peak)) {
      continue;
    }
    double sum = 0.0;
    for (const double lt : log_terms) {
      sum += std::exp(lt - peak);
    }
    const double log_p = peak + std::log(sum);
    const double p = std::exp(log_p);
    const double jacobian = kPi * std::exp(t);
    mass += radial.weights[i] * jacobian * p;
    entropy -= radial.weights[i] * jacobian * p * log_p;
  }

  MutualInformation out;
  out.output_entropy = entropy;
  out.conditional_entropy = conditional_output_entropy(h_var, es, noise_var, config);
  out.tail_mass = std::abs(1.0 - mass);
  if (check_tail && out.tail_mass > config.tail_tolerance) {
    throw NumericError("output density quadrature misses probability mass " +
                       std::to_string(out.tail_mass));
  }
  out.mi_nats = out.output_entropy - out.conditional_entropy;
  return out;
}

}  // namespace

Complex achievability_input_sample(double es, Engine& engine) {
  if (!std::isfinite(es) || !(es > kE)) {
    throw DomainError("peak power es must exceed e, got " + std::to_string(es));
  }
  const double lo = std::log(std::log(es));
  const double hi = std::log(es);
  const double log_power = lo + (hi - lo) * uniform01(engine);
  const double power = std::min(std::exp(log_power), es);
  const double phase = 2.0 * kPi * uniform01(engine);
  return std::polar(std::sqrt(power), phase);
}

Complex achievability_input_sample(double es, std::uint64_t seed) {
  Engine engine = make_engine(seed, 0);
  return achievability_input_sample(es, engine);
}

std::vector<Complex> achievability_input_samples(double es, std::size_t n, std::uint64_t seed) {
  Engine engine = make_engine(seed, 0);
  std::vector<Complex> out(n);
  for (auto& x : out) {
    x = achievability_input_sample(es, engine);
  }
  return out;
}

double conditional_output_entropy(double h_var, double es, double noise_var,
                                  const QuadratureConfig& config) {
  check_channel(es, noise_var);
  if (!std::isfinite(h_var) || h_var < 0.0) {
    throw DomainError("fading variance must be nonnegative");
  }
  const double a = std::log(std::log(es));
  const double b = std::log(es);
  const Rule base = gauss_legendre(config.panel_order);
  const Rule rule =
      composite_rule(a, b, panel_count(config.input_nodes, b - a, config), base, {});
  double sum = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    sum += rule.weights[j] * std::log(kPi * kE * (h_var * std::exp(rule.nodes[j]) + noise_var));
  }
  return sum / (b - a);
}

MutualInformation mi_memoryless_scalar_gauss(Complex h_mean, double h_var, double es,
                                             double noise_var, const QuadratureConfig& config) {
  check_channel(es, noise_var);
  if (!std::isfinite(h_var) || h_var < 0.0) {
    throw DomainError("fading variance must be nonnegative");
  }
  if (h_var == 0.0 && h_mean == Complex(0.0)) {
    throw DomainError("fading is identically zero");
  }
  MutualInformation out = mi_once(h_mean, h_var, es, noise_var, config, true);
  if (config.estimate_error) {
    QuadratureConfig coarse = config;
    coarse.radial_nodes = std::max(config.panel_order, config.radial_nodes / 2);
    coarse.input_nodes = std::max(config.panel_order, config.input_nodes / 2);
    coarse.max_panel_width = 2.0 * config.max_panel_width;
    out.standard_error =
        std::abs(out.mi_nats - mi_once(h_mean, h_var, es, noise_var, coarse, false).mi_nats);
  }
  // A degenerate input range can leave a negative rounding residue.
  if (out.mi_nats < 0.0 && out.mi_nats > -1e-9) {
    out.mi_nats = 0.0;
  }
  return out;
}

SimulationTable capacity_sweep(const GaussianVectorProcess& process, const CVector& direction,
                               std::span<const double> snr_grid_db, double noise_var,
                               std::uint64_t seed, const QuadratureConfig& quad,
                               const OptimizerConfig& reference) {
  if (snr_grid_db.empty()) {
    throw PreconditionError("SNR grid is empty");
  }
  if (!std::is_sorted(snr_grid_db.begin(), snr_grid_db.end())) {
    throw PreconditionError("SNR grid must be sorted");
  }
  const ScalarProjection projection = project(process, direction);
  SimulationTable table;
  table.noise_var = noise_var;
  table.seed = seed;
  table.direction = direction;
  table.memory_term = memory_term_gauss(process, direction);
  OptimizerConfig ref_config = reference;
  ref_config.search.seed = seed;
  table.reference_chi = best_lower_bound(process, ref_config).value;

  for (const double snr_db : snr_grid_db) {
    const double snr = std::pow(10.0, snr_db / 10.0);
    const double es = snr * noise_var;
    if (!(snr > 1.0)) {
      throw DomainError("log log SNR needs SNR > 1");
    }
    const MutualInformation mi =
        mi_memoryless_scalar_gauss(projection.mean(), projection.variance(), es, noise_var, quad);
    SimulationRow row;
    row.snr_db = snr_db;
    row.es = es;
    row.mi_nats = mi.mi_nats + table.memory_term;
    row.mi_minus_loglog = row.mi_nats - std::log(std::log(snr));
    row.standard_error = mi.standard_error;
    table.rows.push_back(row);
  }
  return table;
}

std::string to_csv(const SimulationTable& table) {
  std::string out = "snr_db,es,mi_nats,mi_minus_loglog,stderr\n";
  auto append = [&out](double v, char sep) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
    out.append(buf, res.ptr);
    out.push_back(sep);
  };
  for (const SimulationRow& row : table.rows) {
    append(row.snr_db, ',');
    append(row.es, ',');
    append(row.mi_nats, ',');
    append(row.mi_minus_loglog, ',');
    append(row.standard_error, '\n');
  }
  return out;
}

}  // namespace fading

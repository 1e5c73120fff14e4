#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fading/bounds.hpp"
#include "fading/process_models.hpp"
#include "fading/random.hpp"
#include "fading/types.hpp"

namespace fading {

/// One draw of the peak-constrained input: uniform phase and log|X|^2
/// uniform on [log log es, log es]. Throws DomainError unless es > e.
Complex achievability_input_sample(double es, Engine& engine);
Complex achievability_input_sample(double es, std::uint64_t seed);
std::vector<Complex> achievability_input_samples(double es, std::size_t n, std::uint64_t seed);

struct QuadratureConfig {
  /// Nodes on the log|Y|^2 axis.
  std::size_t radial_nodes = 4096;
  /// Nodes on the log|X|^2 axis.
  std::size_t input_nodes = 512;
  /// Gauss-Legendre order inside each panel.
  std::size_t panel_order = 16;
  /// Panels never get wider than this (nats on either axis); wide input
  /// ranges at extreme SNR get more nodes than requested.
  double max_panel_width = 0.25;
  /// The log|Y|^2 grid spans [log(noise_var) - lower_margin,
  /// log(es (|m|^2 + v) + noise_var) + upper_margin].
  double lower_margin = 60.0;
  double upper_margin = 20.0;
  /// Maximum probability mass the grid may miss.
  double tail_tolerance = 1e-10;
  /// Repeat with half the nodes and report the difference as the error.
  bool estimate_error = true;
};

struct MutualInformation {
  double mi_nats = 0.0;
  /// Quadrature error estimate: |I(N) - I(N/2)|. The computation is
  /// deterministic, so this is the only uncertainty.
  double standard_error = 0.0;
  double output_entropy = 0.0;
  double conditional_entropy = 0.0;
  double tail_mass = 0.0;
};

/// h(Y|X) = E[log(pi e (|X|^2 h_var + noise_var))] under the achievability
/// input, by Gauss-Legendre quadrature over log|X|^2.
double conditional_output_entropy(double h_var, double es, double noise_var,
                                  const QuadratureConfig& config = {});

/// I(X; Y) for Y = H X + Z with H ~ CN(h_mean, h_var), Z ~ CN(0, noise_var)
/// and the achievability input. h(Y) comes from radial quadrature of the
/// circularly symmetric output density; the input phase integrates out in
/// closed form through a Bessel I0 factor.
MutualInformation mi_memoryless_scalar_gauss(Complex h_mean, double h_var, double es,
                                             double noise_var, const QuadratureConfig& config = {});

struct SimulationRow {
  double snr_db = 0.0;
  double es = 0.0;
  double mi_nats = 0.0;
  double mi_minus_loglog = 0.0;
  double standard_error = 0.0;
};

struct SimulationTable {
  std::vector<SimulationRow> rows;
  double reference_chi = 0.0;
  std::string input_kind = "log_uniform_peak";
  double memory_term = 0.0;
  double noise_var = 1.0;
  std::uint64_t seed = 0;
  CVector direction;
};

/// Beam-forms along `direction`, computes the memoryless scalar mutual
/// information of the projected channel at each SNR and adds the Gaussian
/// memory term. reference_chi is the lower-bound supremum for the model.
SimulationTable capacity_sweep(const GaussianVectorProcess& process, const CVector& direction,
                               std::span<const double> snr_grid_db, double noise_var,
                               std::uint64_t seed, const QuadratureConfig& quad = {},
                               const OptimizerConfig& reference = {});

/// Header `snr_db,es,mi_nats,mi_minus_loglog,stderr`, 12 significant digits,
/// independent of the global locale.
std::string to_csv(const SimulationTable& table);

}  // namespace fading

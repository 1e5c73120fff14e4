#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fading/random.hpp"
#include "fading/types.hpp"

namespace fading {

/// Number of real angles describing a unit vector in C^nt modulo a global
/// phase: nt - 1 polar angles and nt - 1 relative phases.
inline std::size_t sphere_parameter_count(int nt) { return 2 * static_cast<std::size_t>(nt) - 2; }

CVector direction_from_angles(std::span<const double> angles, int nt);
std::vector<double> angles_from_direction(const CVector& direction);

/// Uniformly distributed on the complex unit sphere.
CVector random_unit_vector(int nt, Engine& engine);

/// Haar-distributed nt x nt unitary.
CMatrix random_unitary(int nt, Engine& engine);

/// Angle between two unit vectors after removing the relative phase,
/// arccos |<a, b>|.
double direction_angle(const CVector& a, const CVector& b);

enum class SphereMethod { bfgs, nelder_mead };

struct SphereSearchOptions {
  SphereMethod method = SphereMethod::bfgs;
  int restarts = 16;
  int max_iterations = 200;
  double gradient_tolerance = 1e-9;
  double finite_difference_step = 1e-6;
  /// Nelder-Mead only: stop when the simplex values agree to this.
  double value_tolerance = 1e-6;
  std::uint64_t seed = 0;
};

struct SphereSearchResult {
  CVector direction;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Maximises `objective` over unit vectors in C^nt. Warm starts are tried
/// first, then `restarts` random starting points; the best local optimum
/// wins and ties keep the first one found.
SphereSearchResult maximize_on_sphere(int nt, const std::function<double(const CVector&)>& objective,
                                      const SphereSearchOptions& options,
                                      std::span<const CVector> warm_starts = {});

}  // namespace fading

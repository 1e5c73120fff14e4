#pragma once

#include <cstdint>
#include <random>

#include "fading/types.hpp"

namespace fading {

using Engine = std::mt19937_64;

/// Seed for sub-stream `stream` of a root seed. Counter-based: the value
/// depends only on (root, stream), so work split across any number of
/// workers draws the same numbers.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

/// Engine positioned at the start of sub-stream `stream`.
Engine make_engine(std::uint64_t root, std::uint64_t stream);

/// Standard circularly symmetric complex Gaussian, E|Z|^2 = 1.
Complex standard_complex_normal(Engine& engine);

/// Uniform on [0, 1).
double uniform01(Engine& engine);

}  // namespace fading

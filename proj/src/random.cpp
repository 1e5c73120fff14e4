#include "fading/random.hpp"

#include <cmath>

namespace fading {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  return splitmix64(splitmix64(root) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

Engine make_engine(std::uint64_t root, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(derive_seed(root, stream)),
                    static_cast<std::uint32_t>(derive_seed(root, stream) >> 32)};
  return Engine(seq);
}

double uniform01(Engine& engine) {
  // 53 random bits; identical across standard libraries, unlike
  // std::uniform_real_distribution.
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

Complex standard_complex_normal(Engine& engine) {
  // Box-Muller with both outputs used for the real and imaginary parts.
  double u1 = uniform01(engine);
  while (u1 <= 0.0) {
    u1 = uniform01(engine);
  }
  const double u2 = uniform01(engine);
  const double radius = std::sqrt(-std::log(u1));
  const double angle = 2.0 * kPi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace fading

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "fading/process_models.hpp"

namespace fading {

/// A process read from a model file. The Gaussian part is always present;
/// `mixture` turns it into a scale-mixture process for the Monte Carlo paths.
struct FadingModel {
  std::string name;
  GaussianVectorProcess gaussian;
  std::optional<ScaleMixture> mixture;

  bool is_gaussian() const { return !mixture.has_value(); }
  GeneralFadingProcess to_general() const;
};

/// Parses a JSON model description:
///
///   {
///     "name": "optional label",
///     "nt": 2,
///     "mean": [1, [0.5, -0.5]],
///     "ar": [ [[0.5, 0], [0, 0.5]] ],
///     "innovation_covariance": [[0.75, 0], [0, 0.75]],
///     "innovation_law": {"type": "scale_mixture", "weights": [0.5, 0.5], "scales": [0.2, 1.8]}
///   }
///
/// A complex entry is either a number or a [re, im] pair. "ar" may be empty or
/// omitted, in which case the innovation covariance is K. Unknown keys are
/// rejected. Errors throw ModelError naming the line and column (syntax) or
/// the field path (content).
FadingModel parse_model(std::string_view text, std::string_view source = "<model>");

FadingModel load_model(const std::filesystem::path& path);

}  // namespace fading

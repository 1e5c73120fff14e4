#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "fading/bounds.hpp"
#include "fading/capacity_sim.hpp"
#include "fading/fading_number.hpp"

namespace fading {

inline constexpr std::string_view kLibraryVersion = "0.1.0";

/// Presentation units. Everything is computed in nats; bits only rescale the
/// printed values by 1 / log 2.
enum class Units { nats, bits };

double to_units(double nats, Units units);

nlohmann::ordered_json to_json(const CVector& v);
nlohmann::ordered_json to_json(const FadingNumberReport& report, Units units = Units::nats);
nlohmann::ordered_json to_json(const BoundEvaluation& evaluation, Units units = Units::nats);
nlohmann::ordered_json to_json(const SimulationTable& table, Units units = Units::nats);

/// The full report document: version, seed, the command echo and the result.
std::string render_report(std::string_view command, const nlohmann::ordered_json& config_echo,
                          std::uint64_t seed, const nlohmann::ordered_json& result);

/// Stand-alone SVG line chart of mi_minus_loglog against snr_db with the
/// reference value as a dashed horizontal line.
std::string render_svg(const SimulationTable& table, Units units = Units::nats);

/// Writes bytes verbatim; throws Error when the file cannot be written.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace fading

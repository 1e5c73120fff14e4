#include "fading/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "fading/errors.hpp"

namespace fading {

using nlohmann::ordered_json;

namespace {

// Diagnostics holding information quantities; the rest are counts, orders
// and eigenvalues and stay unscaled.
bool is_information_key(const std::string& key) {
  static const char* const keys[] = {"memory_term",
                                     "memory_bound",
                                     "search_value",
                                     "stderr",
                                     "improvement_over_constant",
                                     "search_improvement_over_constant",
                                     "last_sweep_gap",
                                     "direction_spread",
                                     "constant_direction_value",
                                     "conditional_entropy",
                                     "mean_log_magnitude_sq"};
  for (const char* k : keys) {
    if (key == k) return true;
  }
  return key.rfind("kappa_curve_", 0) == 0;
}

ordered_json diagnostics_json(const std::map<std::string, double>& diagnostics, Units units) {
  ordered_json out = ordered_json::object();
  for (const auto& [key, value] : diagnostics) {
    out[key] = is_information_key(key) ? to_units(value, units) : value;
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
  return {buf, res.ptr};
}

}  // namespace

double to_units(double nats, Units units) {
  return units == Units::bits ? nats / std::log(2.0) : nats;
}

ordered_json to_json(const CVector& v) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back({v(i).real(), v(i).imag()});
  }
  return out;
}

ordered_json to_json(const FadingNumberReport& report, Units units) {
  ordered_json out;
  out["kind"] = std::string(to_string(report.kind));
  out["units"] = units == Units::bits ? "bits" : "nats";
  out["value"] = to_units(report.value, units);
  out["direction"] = report.direction ? to_json(*report.direction) : ordered_json(nullptr);
  out["diagnostics"] = diagnostics_json(report.diagnostics, units);
  out["warnings"] = report.warnings;
  return out;
}

ordered_json to_json(const BoundEvaluation& evaluation, Units units) {
  ordered_json out;
  out["method"] = std::string(to_string(evaluation.method));
  out["units"] = units == Units::bits ? "bits" : "nats";
  out["bracket_value"] = to_units(evaluation.bracket_value, units);
  out["standard_error"] = to_units(evaluation.standard_error, units);
  out["kappa"] = evaluation.kappa;
  ordered_json dirs = ordered_json::array();
  for (const CVector& d : evaluation.direction_sequence) {
    dirs.push_back(to_json(d));
  }
  out["direction_sequence"] = dirs;
  out["diagnostics"] = diagnostics_json(evaluation.diagnostics, units);
  return out;
}

ordered_json to_json(const SimulationTable& table, Units units) {
  ordered_json out;
  out["input_kind"] = table.input_kind;
  out["units"] = units == Units::bits ? "bits" : "nats";
  out["reference_chi"] = to_units(table.reference_chi, units);
  out["memory_term"] = to_units(table.memory_term, units);
  out["noise_var"] = table.noise_var;
  out["direction"] = to_json(table.direction);
  ordered_json rows = ordered_json::array();
  for (const SimulationRow& r : table.rows) {
    rows.push_back({{"snr_db", r.snr_db},
                    {"es", r.es},
                    {"mi", to_units(r.mi_nats, units)},
                    {"mi_minus_loglog", to_units(r.mi_minus_loglog, units)},
                    {"stderr", to_units(r.standard_error, units)}});
  }
  out["rows"] = rows;
  return out;
}

std::string render_report(std::string_view command, const ordered_json& config_echo,
                          std::uint64_t seed, const ordered_json& result) {
  ordered_json doc;
  doc["library"] = "fading";
  doc["version"] = std::string(kLibraryVersion);
  doc["command"] = std::string(command);
  doc["seed"] = seed;
  doc["config"] = config_echo;
  doc["result"] = result;
  return doc.dump(2) + "\n";
}

std::string render_svg(const SimulationTable& table, Units units) {
  constexpr double width = 640.0;
  constexpr double height = 400.0;
  constexpr double left = 70.0;
  constexpr double right = 20.0;
  constexpr double top = 30.0;
  constexpr double bottom = 50.0;
  const double ref = to_units(table.reference_chi, units);

  double x_lo = 0.0, x_hi = 1.0, y_lo = ref, y_hi = ref;
  if (!table.rows.empty()) {
    x_lo = table.rows.front().snr_db;
    x_hi = table.rows.back().snr_db;
  }
  for (const SimulationRow& r : table.rows) {
    y_lo = std::min(y_lo, to_units(r.mi_minus_loglog, units));
    y_hi = std::max(y_hi, to_units(r.mi_minus_loglog, units));
  }
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  const double pad = std::max(0.05, 0.1 * (y_hi - y_lo));
  y_lo -= pad;
  y_hi += pad;
  auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * (width - left - right); };
  auto py = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * (height - top - bottom); };
  const std::string unit = units == Units::bits ? "bits" : "nats";

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
         "viewBox=\"0 0 640 400\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(height - bottom) + "\" x2=\"" +
         fmt(width - right) + "\" y2=\"" + fmt(height - bottom) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(left) + "\" y2=\"" +
         fmt(height - bottom) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double x = x_lo + (x_hi - x_lo) * i / 4.0;
    const double y = y_lo + (y_hi - y_lo) * i / 4.0;
    svg += "<text x=\"" + fmt(px(x)) + "\" y=\"" + fmt(height - bottom + 18) +
           "\" text-anchor=\"middle\">" + fmt(x) + "</text>\n";
    svg += "<text x=\"" + fmt(left - 6) + "\" y=\"" + fmt(py(y) + 4) + "\" text-anchor=\"end\">" +
           fmt(y) + "</text>\n";
  }
  svg += "<text x=\"" + fmt((left + width - right) / 2) + "\" y=\"" + fmt(height - 10) +
         "\" text-anchor=\"middle\">SNR [dB]</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt((top + height - bottom) / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         fmt((top + height - bottom) / 2) + ")\">I - log log SNR [" + unit + "]</text>\n";
  svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(py(ref)) + "\" x2=\"" + fmt(width - right) +
         "\" y2=\"" + fmt(py(ref)) + "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
  svg += "<text x=\"" + fmt(width - right - 4) + "\" y=\"" + fmt(py(ref) - 6) +
         "\" text-anchor=\"end\" fill=\"gray\">reference " + fmt(ref) + "</text>\n";
  std::string points;
  for (const SimulationRow& r : table.rows) {
    if (!points.empty()) points += ' ';
    points += fmt(px(r.snr_db)) + "," + fmt(py(to_units(r.mi_minus_loglog, units)));
  }
  svg += "<polyline points=\"" + points + "\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\"/>\n";
  for (const SimulationRow& r : table.rows) {
    svg += "<circle cx=\"" + fmt(px(r.snr_db)) + "\" cy=\"" +
           fmt(py(to_units(r.mi_minus_loglog, units))) + "\" r=\"3\" fill=\"steelblue\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) {
    throw Error("write failed for " + path.string());
  }
}

}  // namespace fading

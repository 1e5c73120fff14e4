// fading_cli: fading-number calculations on model files.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fading/acceptance.hpp"
#include "fading/bounds.hpp"
#include "fading/capacity_sim.hpp"
#include "fading/errors.hpp"
#include "fading/fading_number.hpp"
#include "fading/model_file.hpp"
#include "fading/report.hpp"

namespace {

using fading::Units;
using nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::string model_path;
  std::uint64_t seed = 1;
  std::optional<std::size_t> kappa;
  std::size_t mc_samples = 100000;
  std::vector<double> snr_grid_db;
  std::string output_path;
  bool emit_plot = false;
  bool bits = false;
  std::string mode = "coordinate";
  unsigned workers = 1;
  double noise_var = 1.0;
};

ordered_json echo(const RunConfig& c) {
  ordered_json j;
  j["command"] = c.command;
  j["model"] = c.model_path;
  j["seed"] = c.seed;
  j["kappa"] = c.kappa ? ordered_json(*c.kappa) : ordered_json(nullptr);
  j["mc_samples"] = c.mc_samples;
  j["snr_grid_db"] = c.snr_grid_db;
  j["mode"] = c.mode;
  j["noise_var"] = c.noise_var;
  j["workers"] = c.workers;
  j["units"] = c.bits ? "bits" : "nats";
  return j;
}

fading::MonteCarloConfig mc_config(const RunConfig& c) {
  fading::MonteCarloConfig mc;
  mc.samples = c.mc_samples;
  mc.search_samples = std::min<std::size_t>(c.mc_samples, 20000);
  mc.seed = c.seed;
  mc.knn.workers = c.workers;
  mc.search.seed = c.seed;
  return mc;
}

fading::OptimizerConfig optimizer_config(const RunConfig& c) {
  fading::OptimizerConfig opt;
  opt.kappa = c.kappa;
  opt.search.seed = c.seed;
  return opt;
}

std::filesystem::path sibling(const std::string& out, const char* extension) {
  std::filesystem::path p(out);
  p.replace_extension(extension);
  return p;
}

void emit(const RunConfig& c, const ordered_json& result) {
  const std::string text = fading::render_report(c.command, echo(c), c.seed, result);
  if (c.output_path.empty()) {
    std::cout << text;
  } else {
    fading::write_file(c.output_path, text);
  }
}

fading::FadingModel require_model(const RunConfig& c) {
  if (c.model_path.empty()) {
    throw fading::ModelError(c.command + " needs --model <path>");
  }
  return fading::load_model(c.model_path);
}

int run(const RunConfig& c) {
  const Units units = c.bits ? Units::bits : Units::nats;

  if (c.command == "selftest") {
    fading::AcceptanceOptions options;
    options.seed = c.seed;
    options.workers = c.workers;
    ordered_json results = ordered_json::array();
    bool all = true;
    for (int id = 1; id <= 10; ++id) {
      const fading::CriterionResult r = fading::run_criterion(id, options);
      std::cout << fading::format_result(r) << std::endl;
      results.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
      all = all && r.passed;
    }
    if (!c.output_path.empty()) {
      fading::write_file(c.output_path,
                         fading::render_report(c.command, echo(c), c.seed, results));
    }
    return all ? 0 : 2;
  }

  const fading::FadingModel model = require_model(c);
  const fading::GaussianVectorProcess& gauss = model.gaussian;
  ordered_json result;
  result["model_name"] = model.name;
  result["gaussian"] = model.is_gaussian();

  if (c.command == "dstar") {
    const fading::DStar ds = fading::d_star(gauss.mean(), gauss.covariance());
    result["d_star"] = ds.value;
    result["direction"] = fading::to_json(ds.direction);
    result["chi_memoryless"] = fading::to_units(fading::chi_memoryless_gauss(ds.value), units);
  } else if (c.command == "chi-gauss") {
    const fading::DStar ds = fading::d_star(gauss.mean(), gauss.covariance());
    fading::FadingNumberReport memoryless;
    memoryless.kind = fading::ReportKind::memoryless_gauss;
    memoryless.value = fading::chi_memoryless_gauss(ds.value);
    memoryless.direction = ds.direction;
    memoryless.diagnostics["d_star"] = ds.value;
    if (gauss.memory_depth() == 0) {
      result["fading_number"] = fading::to_json(memoryless, units);
    } else {
      result["memoryless_marginal"] = fading::to_json(memoryless, units);
      result["lower"] = fading::to_json(fading::best_lower_bound(gauss, optimizer_config(c)), units);
      result["upper"] = fading::to_json(fading::chi_gauss_upper_norm_ratio(gauss), units);
    }
  } else if (c.command == "chi-iid-memory") {
    result["fading_number"] = fading::to_json(fading::chi_gauss_spatial_iid(gauss), units);
  } else if (c.command == "bound-lower") {
    if (model.is_gaussian()) {
      result["lower"] = fading::to_json(fading::best_lower_bound(gauss, optimizer_config(c)), units);
    } else {
      fading::OptimizerConfig opt = optimizer_config(c);
      opt.kappa = c.kappa.value_or(1);
      result["lower"] =
          fading::to_json(fading::best_lower_bound(model.to_general(), opt, mc_config(c)), units);
    }
  } else if (c.command == "bound-upper") {
    const std::size_t kappa = c.kappa.value_or(8);
    const auto mode = c.mode == "constant" ? fading::UpperBoundMode::constant_direction
                                           : fading::UpperBoundMode::coordinate_ascent;
    fading::OptimizerConfig opt = optimizer_config(c);
    opt.kappa = kappa;
    if (model.is_gaussian()) {
      result["upper"] = fading::to_json(fading::upper_bound_estimate(gauss, kappa, mode, opt), units);
    } else {
      result["upper"] = fading::to_json(
          fading::upper_bound_estimate(model.to_general(), kappa, mode, opt, mc_config(c)), units);
    }
  } else if (c.command == "isotropic") {
    const fading::CVector reference = fading::CVector::Unit(gauss.nt(), 0);
    if (model.is_gaussian()) {
      result["fading_number"] = fading::to_json(
          fading::isotropic_fading_number(gauss, reference, c.kappa, c.seed), units);
    } else {
      result["fading_number"] = fading::to_json(
          fading::isotropic_fading_number(model.to_general(), reference, c.kappa.value_or(1),
                                          mc_config(c)),
          units);
    }
  } else if (c.command == "sweep") {
    if (!model.is_gaussian()) {
      throw fading::DomainError("sweep supports Gaussian models only");
    }
    if (c.snr_grid_db.empty()) {
      throw fading::PreconditionError("sweep needs --snr-grid");
    }
    const fading::OptimizerConfig opt = optimizer_config(c);
    const fading::FadingNumberReport best = fading::best_lower_bound(gauss, opt);
    const fading::SimulationTable table = fading::capacity_sweep(
        gauss, *best.direction, c.snr_grid_db, c.noise_var, c.seed, {}, opt);
    result["table"] = fading::to_json(table, units);
    const std::string csv = fading::to_csv(table);
    if (c.output_path.empty()) {
      // The table is the whole result; the JSON report needs --out.
      std::cout << csv;
      return 0;
    }
    {
      fading::write_file(sibling(c.output_path, ".csv"), csv);
      if (c.emit_plot) {
        fading::write_file(sibling(c.output_path, ".svg"), fading::render_svg(table, units));
      }
    }
  } else {
    throw fading::PreconditionError("unknown command " + c.command);
  }
  emit(c, result);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fading numbers of MISO fading channels with memory"};
  app.require_subcommand(1);
  RunConfig config;

  std::size_t kappa = 0;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"dstar", "d* and its maximizing direction"},
      {"chi-gauss", "Gaussian fading number: exact when memoryless, bounds otherwise"},
      {"chi-iid-memory", "spatially IID Gaussian fading with memory"},
      {"bound-upper", "finite-past upper-bound estimate"},
      {"bound-lower", "lower bound maximised over beam directions"},
      {"isotropic", "fading number of an isotropic process"},
      {"sweep", "high-SNR mutual information of the achievability input"},
      {"selftest", "run the acceptance suite"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--model", config.model_path, "model file (JSON)");
    sub->add_option("--seed", config.seed, "root random seed")->check(CLI::NonNegativeNumber);
    sub->add_option("--kappa", kappa, "past depth")->check(CLI::PositiveNumber);
    sub->add_option("--mc-samples", config.mc_samples, "Monte Carlo windows")
        ->check(CLI::Range(std::size_t{1000}, std::size_t{100000000}));
    sub->add_option("--snr-grid", config.snr_grid_db, "comma separated SNRs in dB")
        ->delimiter(',');
    sub->add_option("--out", config.output_path, "report path (stdout if omitted)");
    sub->add_flag("--plot", config.emit_plot, "also write an SVG chart (sweep)");
    sub->add_flag("--bits", config.bits, "print information values in bits");
    sub->add_option("--mode", config.mode, "upper-bound mode")
        ->check(CLI::IsMember({"constant", "coordinate"}));
    sub->add_option("--workers", config.workers, "kNN worker threads")
        ->check(CLI::Range(1u, 256u));
    sub->add_option("--noise-var", config.noise_var, "noise variance (sweep)")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  for (CLI::App* sub : app.get_subcommands()) {
    config.command = sub->get_name();
    if (sub->count("--kappa") > 0) {
      config.kappa = kappa;
    }
  }

  try {
    return run(config);
  } catch (const fading::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const fading::EstimationError& e) {
    std::cerr << "estimation error: " << e.what() << "\n";
    return 2;
  } catch (const fading::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

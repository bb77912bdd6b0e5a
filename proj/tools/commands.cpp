#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <ostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ballsde/analysis.hpp"
#include "ballsde/io.hpp"
#include "ballsde/noise.hpp"
#include "ballsde/schemes.hpp"

#ifndef BALLSDE_VERSION
#define BALLSDE_VERSION "unknown"
#endif

namespace ballsde::cli {

namespace {

using nlohmann::json;

std::size_t single_steps(const ExperimentConfig& config, std::size_t fallback) {
  if (config.steps.empty()) return fallback;
  if (config.steps.size() != 1) throw Error(ErrorKind::Config, "--steps takes a single value for this command");
  if (config.steps.front() == 0) throw Error(ErrorKind::Config, "--steps must be positive");
  return config.steps.front();
}

void prepare_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_json(const std::filesystem::path& file, const json& j) {
  auto out = open_output(file);
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::Io, "write failed for " + file.string());
}

void write_manifest(const ExperimentConfig& config, const std::string& command, const ModelParams& model,
                    json extra) {
  json j;
  j["command"] = command;
  j["version"] = BALLSDE_VERSION;
  j["model_file"] = config.model_file.string();
  j["model"] = model_to_json(model);
  j["seed"] = config.seed;
  j["regime"] = regime_to_json(validate(model));
  for (auto& [key, value] : extra.items()) j[key] = value;
  write_json(config.out_dir / "manifest.json", j);
}

void warn_regime(const RegimeReport& regime, std::ostream& err) {
  if (!regime.pathwise_unique) {
    err << "warning: kappa/nu^2 = " << regime.ratio << " <= sqrt(2)-1, pathwise uniqueness is not guaranteed\n";
  }
}

void write_table(const std::filesystem::path& stem, Format format, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows) {
  if (format == Format::Json) {
    json j = json::object();
    for (std::size_t c = 0; c < header.size(); ++c) {
      std::vector<double> column;
      for (const auto& row : rows) column.push_back(row[c]);
      j[header[c]] = column;
    }
    write_json(stem.string() + ".json", j);
    return;
  }
  auto out = open_output(stem.string() + ".csv");
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::Io, "write failed for " + stem.string());
}

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::RegimeViolation: return kRegimeViolation;
    case ErrorKind::Io: return kIoError;
    default: return kConfigError;
  }
}

ModelParams resolve_model(const ExperimentConfig& config) {
  if (config.model_file.empty()) throw Error(ErrorKind::Config, "--model is required");
  ModelParams p = load_model(config.model_file);
  if (config.kappa) p.kappa = *config.kappa;
  if (config.nu) p.nu = *config.nu;
  if (config.T) p.T = *config.T;
  return p;
}

int cmd_validate(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  const ModelParams model = resolve_model(config);
  const RegimeReport regime = validate(model);
  warn_regime(regime, err);
  if (!regime.backward_solvable) err << "warning: kappa/nu^2 <= 1/2, the backward scheme is not solvable\n";
  out << regime_to_json(regime).dump(2) << '\n';
  return kSuccess;
}

int cmd_simulate(const ExperimentConfig& config, std::ostream& err) {
  const ModelParams model = resolve_model(config);
  const RegimeReport regime = validate(model);
  warn_regime(regime, err);
  if (!regime.backward_solvable) {
    throw Error(ErrorKind::RegimeViolation, "simulate needs kappa/nu^2 > 1/2");
  }
  const std::size_t n = single_steps(config, 10000);
  prepare_out_dir(config.out_dir);
  const TimeGrid grid(model.T, n);
  json files = json::array();
  for (std::size_t i = 0; i < config.count; ++i) {
    const std::string tag = "seed" + std::to_string(config.seed) + "_path" + std::to_string(i);
    const BrownianPath noise = sample_path({config.seed, i}, grid, model.d, model.m());
    const BackwardPath backward = simulate_backward(model, noise);
    {
      auto out = open_output(config.out_dir / ("backward_" + tag + ".csv"));
      write_backward_csv(out, backward);
    }
    {
      auto out = open_output(config.out_dir / ("projected_" + tag + ".csv"));
      write_projected_csv(out, project_path(backward));
    }
    files.push_back("backward_" + tag + ".csv");
    files.push_back("projected_" + tag + ".csv");
    if (config.dump_noise) {
      write_path_binary(noise, config.out_dir / ("noise_" + tag + ".bin"));
      files.push_back("noise_" + tag + ".bin");
    }
  }
  write_manifest(config, "simulate", model, {{"steps", n}, {"count", config.count}, {"files", files}});
  return kSuccess;
}

int cmd_converge(const ExperimentConfig& config, std::ostream& err) {
  const ModelParams model = resolve_model(config);
  const RegimeReport regime = validate(model);
  warn_regime(regime, err);
  if (!regime.backward_solvable) throw Error(ErrorKind::RegimeViolation, "converge needs kappa/nu^2 > 1/2");
  if (!regime.rate_theorem) err << "warning: kappa/nu^2 = " << regime.ratio << " <= 6, rate is not guaranteed\n";

  StrongErrorOptions options;
  options.n_values = config.steps.empty() ? std::vector<std::size_t>{8, 16, 32, 64, 128} : config.steps;
  std::sort(options.n_values.begin(), options.n_values.end());
  options.ref_n = config.ref_steps.value_or(64 * options.n_values.back());
  options.mc = {config.paths.value_or(10000), config.seed, config.threads};

  const StrongErrorResult result = strong_error(model, options);
  prepare_out_dir(config.out_dir);
  write_json(config.out_dir / "error_lifted.json", report_to_json(result.lifted));
  write_json(config.out_dir / "error_projected.json", report_to_json(result.projected));
  {
    auto out = open_output(config.out_dir / "error_lifted.csv");
    write_report_csv(out, result.lifted);
  }
  {
    auto out = open_output(config.out_dir / "error_projected.csv");
    write_report_csv(out, result.projected);
  }
  write_manifest(config, "converge", model,
                 {{"steps", options.n_values},
                  {"ref_steps", options.ref_n},
                  {"paths", options.mc.paths},
                  {"min_y0", result.min_y0}});
  return kSuccess;
}

int cmd_moments(const ExperimentConfig& config, std::ostream& err) {
  const ModelParams model = resolve_model(config);
  const RegimeReport regime = validate(model);
  warn_regime(regime, err);
  if (!regime.backward_solvable) throw Error(ErrorKind::RegimeViolation, "moments needs kappa/nu^2 > 1/2");
  if (config.order < 1) throw Error(ErrorKind::Config, "--order must be >= 1");
  if (config.samples < 1) throw Error(ErrorKind::Config, "--samples must be >= 1");

  const std::size_t n = single_steps(config, 2048);
  const std::size_t K = config.order;
  const TimeGrid grid(model.T, n);
  std::vector<std::size_t> sample_steps;
  for (std::size_t j = 0; j <= config.samples; ++j) sample_steps.push_back(j * n / config.samples);
  const MonteCarloOptions mc{config.paths.value_or(10000), config.seed, config.threads};
  const auto estimates = projected_moments_mc(model, n, sample_steps, K, mc);

  std::vector<std::string> header{"t", "analytic_m1"};
  for (std::size_t k = 1; k <= K; ++k) header.push_back("expm_m" + std::to_string(k));
  for (std::size_t k = 1; k <= K; ++k) {
    header.push_back("mc_m" + std::to_string(k));
    header.push_back("mc_m" + std::to_string(k) + "_se");
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t s = 0; s < sample_steps.size(); ++s) {
    const double t = grid.time(sample_steps[s]);
    std::vector<double> row{t, analytic_second_moment(model, t)};
    const auto exact = radial_moments(model, t, K);
    row.insert(row.end(), exact.begin() + 1, exact.end());
    for (const Estimate& e : estimates[s]) {
      row.push_back(e.mean);
      row.push_back(e.se);
    }
    rows.push_back(std::move(row));
  }
  prepare_out_dir(config.out_dir);
  write_table(config.out_dir / "moments", config.format, header, rows);
  write_manifest(config, "moments", model,
                 {{"steps", n}, {"paths", mc.paths}, {"order", K}, {"samples", config.samples}});
  return kSuccess;
}

int cmd_distance(const ExperimentConfig& config, std::ostream& err) {
  const ModelParams model = resolve_model(config);
  warn_regime(validate(model), err);
  const std::size_t n = single_steps(config, 312500);
  const DistanceReport report = distance_monotonicity(model, config.x0_a, config.x0_b, n, config.seed);

  prepare_out_dir(config.out_dir);
  std::vector<std::vector<double>> rows;
  rows.reserve(report.times.size());
  for (std::size_t k = 0; k < report.times.size(); ++k) rows.push_back({report.times[k], report.distance[k]});
  write_table(config.out_dir / "distance", config.format, {"t", "D"}, rows);
  const json summary{{"steps", n},
                     {"increases", report.increases},
                     {"max_increase", report.max_increase},
                     {"tolerance", report.tolerance},
                     {"exceedances", report.exceedances},
                     {"D0", report.distance.front()},
                     {"Dn", report.distance.back()}};
  write_json(config.out_dir / "distance_summary.json", summary);
  write_manifest(config, "distance", model, {{"x0_a", config.x0_a}, {"x0_b", config.x0_b}, {"summary", summary}});
  return kSuccess;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulation and diagnostics for polynomial diffusions on the unit ball"};
  app.require_subcommand(1);
  app.set_version_flag("--version", BALLSDE_VERSION);

  ExperimentConfig config;
  std::string format = "csv";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", config.model_file, "Model file (JSON)")->required();
    sub->add_option("--seed", config.seed, "Master seed");
    sub->add_option("--out", config.out_dir, "Output directory");
    sub->add_option("--threads", config.threads, "Worker threads (0: all cores)");
    sub->add_option("--kappa", config.kappa, "Override kappa");
    sub->add_option("--nu", config.nu, "Override nu");
    sub->add_option("--T", config.T, "Override horizon T");
    sub->add_option("--format", format, "Table format")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_steps = [&](CLI::App* sub, const char* help) {
    sub->add_option("--steps", config.steps, help)->delimiter(',');
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check a model and print its regime flags");
  add_common(validate_cmd);

  auto* simulate_cmd = app.add_subcommand("simulate", "Write backward and projected sample paths as CSV");
  add_common(simulate_cmd);
  add_steps(simulate_cmd, "Time steps n");
  simulate_cmd->add_option("--count", config.count, "Number of paths (path indices 0..count-1)");
  simulate_cmd->add_flag("--dump-noise", config.dump_noise, "Also write the Brownian increments (binary)");

  auto* converge_cmd = app.add_subcommand("converge", "Strong error ladder against a fine-grid reference");
  add_common(converge_cmd);
  add_steps(converge_cmd, "Comma separated n ladder");
  converge_cmd->add_option("--paths", config.paths, "Monte Carlo paths M");
  converge_cmd->add_option("--ref-steps", config.ref_steps, "Reference steps (default 64 x max n)");

  auto* moments_cmd = app.add_subcommand("moments", "Analytic, matrix-exponential and Monte Carlo moments");
  add_common(moments_cmd);
  add_steps(moments_cmd, "Time steps n");
  moments_cmd->add_option("--paths", config.paths, "Monte Carlo paths M");
  moments_cmd->add_option("--order", config.order, "Highest moment order K of |X|^2");
  moments_cmd->add_option("--samples", config.samples, "Number of time intervals in the table");

  auto* distance_cmd = app.add_subcommand("distance", "Distance between two solutions driven by shared noise");
  add_common(distance_cmd);
  add_steps(distance_cmd, "Time steps n");
  distance_cmd->add_option("--x0a", config.x0_a, "First initial point")->delimiter(',');
  distance_cmd->add_option("--x0b", config.x0_b, "Second initial point")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }
  config.format = format == "json" ? Format::Json : Format::Csv;

  try {
    if (validate_cmd->parsed()) return cmd_validate(config, out, err);
    if (simulate_cmd->parsed()) return cmd_simulate(config, err);
    if (converge_cmd->parsed()) return cmd_converge(config, err);
    if (moments_cmd->parsed()) return cmd_moments(config, err);
    if (distance_cmd->parsed()) return cmd_distance(config, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kConfigError;
}

}  // namespace ballsde::cli

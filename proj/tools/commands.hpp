#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ballsde/error.hpp"
#include "ballsde/model.hpp"

namespace ballsde::cli {

enum ExitCode : int { kSuccess = 0, kConfigError = 2, kRegimeViolation = 3, kIoError = 4 };

int exit_code_for(ErrorKind kind) noexcept;

enum class Format { Csv, Json };

/// Resolved options shared by every subcommand. Unset optionals fall back to
/// per-command defaults.
struct ExperimentConfig {
  std::filesystem::path model_file;
  std::uint64_t seed = 1;
  std::optional<std::size_t> paths;
  std::vector<std::size_t> steps;
  std::optional<std::size_t> ref_steps;
  std::filesystem::path out_dir = ".";
  Format format = Format::Csv;
  unsigned threads = 0;

  // Model overrides, applied on top of the model file.
  std::optional<double> kappa;
  std::optional<double> nu;
  std::optional<double> T;

  // simulate
  std::size_t count = 1;
  bool dump_noise = false;
  // moments
  std::size_t order = 3;
  std::size_t samples = 10;
  // distance
  std::vector<double> x0_a{0.0, 0.0};
  std::vector<double> x0_b{-0.7, 0.2};
};

ModelParams resolve_model(const ExperimentConfig& config);

/// Each command returns an ExitCode; domain errors propagate as ballsde::Error.
int cmd_validate(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const ExperimentConfig& config, std::ostream& err);
int cmd_converge(const ExperimentConfig& config, std::ostream& err);
int cmd_moments(const ExperimentConfig& config, std::ostream& err);
int cmd_distance(const ExperimentConfig& config, std::ostream& err);

/// Parses argv and dispatches; maps errors to exit codes.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ballsde::cli

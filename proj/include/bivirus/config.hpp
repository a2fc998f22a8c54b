#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bivirus/control.hpp"
#include "bivirus/dynamics.hpp"
#include "bivirus/equilibria.hpp"
#include "bivirus/model.hpp"

namespace bivirus {

struct VerifyOptions {
  std::size_t random_models = 20;
  std::size_t max_nodes = 6;
  std::uint64_t seed = 1;
};

struct SensitivityOptions {
  double step = 1e-4;
};

struct ControlOptions {
  std::optional<FeedbackGains> gains;
  std::vector<double> magnitudes{1e-6, 1e-4, 1e-2};
  std::size_t random_directions = 10;
};

/// One experiment, as read from a JSON config file.
///
/// Rates are authored as decimal strings; when every rate of a virus is a
/// string its exact values are kept for equality tests. Plain JSON numbers are
/// accepted but compared in floating point.
struct ExperimentConfig {
  BiVirusModel model;
  std::vector<SystemState> initial_states;
  IntegratorConfig integrator;
  FixedPointConfig fixed_point;
  SensitivityOptions sensitivity;
  ControlOptions control;
  VerifyOptions verify;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> output_dir;
};

/// Throws ParseError naming the offending field, or the line and column for
/// malformed JSON.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace bivirus

// Experiment configuration: JSON schema, defaults and fail-fast validation.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rabi/core.hpp"
#include "rabi/fitting.hpp"

namespace rabi {

enum class ExperimentKind {
  Fig2Distinguishable,
  Fig3Indistinguishable,
  Fig5GammaRatio,
  MasterEqBaseline,
  OracleCrossCheck,
};

enum class OutputFormat { Csv, Json, Svg };

/// Which predictor generates the per-level series of the gamma-ratio run.
enum class LadderBaseline { Nested, MasterEquation };

std::string_view to_string(ExperimentKind k) noexcept;
std::string_view to_string(OutputFormat f) noexcept;
std::string_view to_string(LadderBaseline b) noexcept;
std::optional<OutputFormat> output_format_from_string(std::string_view s) noexcept;

struct ConfigIssue {
  std::string field;  // dotted path, e.g. "distinguishable.eta"
  int line = 0;       // 1-based line in the config text, 0 if unknown
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);

  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// Failure inside a computation (fit divergence, out-of-range evaluation).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Fig2Distinguishable;

  struct System {
    double omega = 1.0;
    Level initial_state = Level::Excited;
  } system;

  struct Distinguishable {
    double dt = 0.08;
    double eta = 0.99;
  } distinguishable;

  struct Indistinguishable {
    double dt = 0.7;
    double beta = 0.995;
    int max_events = 5;
  } indistinguishable;

  struct MasterEquation {
    double gamma_se = 0.02;
  } master_equation;

  /// Coordinate-time sampling grid for single-curve experiments. Unset
  /// values take experiment-specific defaults scaled by 1/omega.
  struct Grid {
    double t_max = 0.0;
    std::size_t n_points = 0;
  } grid;

  struct Fit {
    FitParamSet free = kDefaultFreeParams;
  } fit;

  struct Ladder {
    int n_max = 8;
    double lamb_dicke = kLambDicke;
    double omega0_dt = 0.2;  // Omega_{0,1} * dt, shared dt across levels
    double window = 40.0;    // fit window in units of 1/Omega_n
    std::size_t n_points = 300;
    LadderBaseline baseline = LadderBaseline::Nested;
  } ladder;

  struct Oracle {
    std::int64_t n_systems = 100000;
    std::vector<int> chain_n = {4, 10, 20};
    std::int64_t chain_samples = 100000;
    double z_limit = 5.0;
  } oracle;

  std::uint64_t seed = 1;

  struct Output {
    std::string dir = "out";
    std::string prefix;  // empty: experiment name
    std::vector<OutputFormat> formats = {OutputFormat::Csv, OutputFormat::Json};
  } output;

  std::string file_prefix() const;
};

/// Default config for an experiment, with its grid resolved.
ExperimentConfig default_config(ExperimentKind kind);

/// Parses and validates a config document. Unknown keys, wrong types and
/// out-of-range values are all collected into one ConfigError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Re-checks invariants (used after command-line overrides).
void validate_config(const ExperimentConfig& cfg);

}  // namespace rabi

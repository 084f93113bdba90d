// Figure-reproduction pipelines: predictor -> series -> fit -> summary.
#pragma once

#include <string>
#include <variant>
#include <vector>

#include "rabi/config.hpp"
#include "rabi/fitting.hpp"
#include "rabi/series.hpp"

namespace rabi {

/// A reference value the run is scored against.
struct AcceptanceTarget {
  std::string name;
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;

  bool pass() const;
};

struct FigureResult {
  ProbabilitySeries series;
  std::vector<double> fitted;  // fit model sampled on series.t
  DampedSinusoidFit fit;
  double omega = 1.0;          // reference frequency for gamma / omega
  std::vector<AcceptanceTarget> targets;
};

struct GammaRatioRow {
  int n = 0;
  double omega_n = 0.0;
  double gamma_n = 0.0;
  double ratio = 1.0;
};

struct GammaRatioResult {
  LadderBaseline baseline = LadderBaseline::Nested;
  double dt = 0.0;  // shared interference time scale
  std::vector<GammaRatioRow> rows;
  std::vector<DampedSinusoidFit> fits;
  PowerLawFit power_law;
  std::vector<AcceptanceTarget> targets;
};

struct ChainCheck {
  int n = 0;
  double table_value = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double z = 0.0;
};

struct OracleResult {
  ProbabilitySeries predicted;
  ProbabilitySeries montecarlo;
  std::vector<double> std_error;  // sqrt(p(1-p)/N) from the analytic p
  double max_abs_z = 0.0;
  std::vector<ChainCheck> chains;
  std::vector<AcceptanceTarget> targets;
};

using ExperimentResult = std::variant<FigureResult, GammaRatioResult, OracleResult>;

/// Predictor series only, no fit (Fig2, Fig3, MasterEqBaseline).
ProbabilitySeries simulate_series(const ExperimentConfig& cfg);

FigureResult run_figure_experiment(const ExperimentConfig& cfg);
GammaRatioResult run_gamma_ratio_experiment(const ExperimentConfig& cfg);
OracleResult run_oracle_check(const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

bool all_targets_pass(const ExperimentResult& result);

}  // namespace rabi

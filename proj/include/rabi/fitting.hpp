// Damped-sinusoid and power-law estimation.
//
// The decay model is
//
//   y(t) = offset + amplitude * exp(-gamma t) * cos(2 omega t + phase)
//
// which with offset = 1/2, amplitude = -1/2, phase = 0 is the usual
// (1/2)(1 - e^{-gamma t} cos 2 omega t) description of damped Rabi data.
#pragma once

#include <array>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rabi/series.hpp"

namespace rabi {

enum class FitParam { Gamma, Omega, Amplitude, Offset, Phase };

using FitParamSet = std::set<FitParam>;

std::string_view to_string(FitParam p) noexcept;
FitParam fit_param_from_string(std::string_view name);

inline const FitParamSet kDefaultFreeParams{FitParam::Gamma, FitParam::Omega};

struct DampedSinusoidParams {
  double gamma = 0.0;
  double omega = 1.0;
  double amplitude = -0.5;
  double offset = 0.5;
  double phase = 0.0;

  double get(FitParam p) const;
  void set(FitParam p, double v);
};

double damped_sinusoid(const DampedSinusoidParams& params, double t);

/// Partial derivatives of damped_sinusoid, ordered as FitParam.
std::array<double, 5> damped_sinusoid_gradient(const DampedSinusoidParams& params, double t);

struct DampedSinusoidFit {
  double gamma = 0.0;
  double omega_fit = 0.0;
  double amplitude = -0.5;
  double offset = 0.5;
  double phase = 0.0;
  double residual_rms = 0.0;
  FitParamSet free_params;
  int iterations = 0;
  /// Constant series: no oscillation to fit, gamma carries no information.
  bool degenerate = false;

  DampedSinusoidParams params() const { return {gamma, omega_fit, amplitude, offset, phase}; }
};

struct FitOptions {
  FitParamSet free_params = kDefaultFreeParams;
  int max_iterations = 200;
  double step_tolerance = 1e-9;
};

class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, DampedSinusoidParams last, double residual_rms)
      : std::runtime_error(what), last_(last), residual_rms_(residual_rms) {}

  const DampedSinusoidParams& last_iterate() const noexcept { return last_; }
  double residual_rms() const noexcept { return residual_rms_; }

 private:
  DampedSinusoidParams last_;
  double residual_rms_;
};

/// Levenberg-Marquardt least squares of the decay model. Fixed parameters
/// keep the defaults (offset 1/2, amplitude -1/2, phase 0); gamma starts
/// at 0 and omega at omega_hint. Needs >= 10 points spanning at least two
/// periods pi/omega_hint.
DampedSinusoidFit fit_damped_sinusoid(std::span<const double> t, std::span<const double> p,
                                      double omega_hint, const FitOptions& options = {});

inline DampedSinusoidFit fit_damped_sinusoid(const ProbabilitySeries& series, double omega_hint,
                                             const FitOptions& options = {}) {
  return fit_damped_sinusoid(series.t, series.p, omega_hint, options);
}

struct PowerLawFit {
  double exponent = 0.0;
  double residual_rms = 0.0;
  /// Only the n = 0 point: log(1+n) carries no slope information.
  bool degenerate = false;
};

/// Least squares of log(ratio) against exponent * log(1+n) (no intercept).
PowerLawFit fit_power_law(std::span<const std::pair<int, double>> ratios);

}  // namespace rabi

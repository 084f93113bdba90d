// Piecewise recursive predictor for distinguishable systems and
// interference events.
//
// An interference epoch occurs at every n*dt. At each epoch a fraction
// (1 - eta) of the ensemble is passively measured and restarts its Born
// evolution from the collapsed state. For n*dt <= t < (n+1)*dt:
//
//   p_0(t) = born(t)
//   p_n(t) = eta p_{n-1}(t)
//          + (1-eta) [cos^2(W(t - n dt)) p_{n-1}(n dt)
//                     + sin^2(W(t - n dt)) (1 - p_{n-1}(n dt))]
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rabi/core.hpp"
#include "rabi/series.hpp"

namespace rabi {

struct DistinguishableEnv {
  DistinguishableEnv(double dt, double eta);

  double dt;   // interference time scale
  double eta;  // survival probability per epoch
};

class PiecewisePredictor {
 public:
  PiecewisePredictor(RabiSystem system, DistinguishableEnv env, int n_max,
                     Level observed = Level::Ground);

  const RabiSystem& system() const noexcept { return system_; }
  const DistinguishableEnv& env() const noexcept { return env_; }
  Level observed() const noexcept { return observed_; }
  int n_max() const noexcept { return n_max_; }

  /// Largest coordinate time (exclusive) the predictor covers.
  double t_limit() const noexcept { return (n_max_ + 1) * env_.dt; }

  /// p_{n-1}(n dt) for n = 1..n_max; index 0 holds n = 1.
  std::span<const double> boundary_values() const noexcept { return boundary_; }

  /// Interval index n with n dt <= t < (n+1) dt.
  int interval(double t_coord) const;

  /// p_level(t_coord), evaluating any level <= n_max regardless of interval.
  double level_value(int level, double t_coord) const;

  Probability operator()(double t_coord) const;

 private:
  RabiSystem system_;
  DistinguishableEnv env_;
  Level observed_;
  int n_max_;
  std::vector<double> boundary_;
};

PiecewisePredictor build_predictor(const RabiSystem& system, const DistinguishableEnv& env,
                                   int n_max);

/// Smallest n_max whose range covers [0, t_max].
int required_intervals(const DistinguishableEnv& env, double t_max);

Probability predict_ground_prob(const PiecewisePredictor& pred, double t_coord);

ProbabilitySeries sample_series(const PiecewisePredictor& pred, std::span<const double> grid);

}  // namespace rabi

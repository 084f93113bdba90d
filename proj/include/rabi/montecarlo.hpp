// Stochastic cross-checks for both predictors. Nothing here calls the
// recursions: trajectories and binomial chains are sampled directly.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rabi/core.hpp"
#include "rabi/distinguishable.hpp"
#include "rabi/indistinguishable.hpp"
#include "rabi/series.hpp"

namespace rabi {

struct EnsembleConfig {
  std::int64_t n_systems = 10000;
  std::uint64_t seed = 0;
  std::vector<double> grid;
};

/// Passive preparations suffered by one trajectory.
struct TrajectoryRecord {
  std::vector<double> passive_prep_times;
  std::vector<Level> passive_prep_states;
};

/// Engine for trajectory `index`, independent of how trajectories are
/// split across workers.
std::mt19937_64 trajectory_engine(std::uint64_t master_seed, std::uint64_t index);

/// One history up to t_max: at every epoch n dt, with probability 1 - eta,
/// the system collapses to Ground with its current Born probability (else
/// Excited) and its evolution parameter restarts at zero.
TrajectoryRecord sample_trajectory(const RabiSystem& system, const DistinguishableEnv& env,
                                   double t_max, std::mt19937_64& engine);

/// Fraction of trajectories found in Ground at each grid time, one
/// independent Bernoulli readout per grid point per trajectory.
ProbabilitySeries simulate_distinguishable(const RabiSystem& system,
                                           const DistinguishableEnv& env,
                                           const EnsembleConfig& cfg);

struct ChainEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;

  Probability probability() const { return Probability(mean); }
};

/// Unbiased estimate of the nested table entry P^(i)_g[n]: draws
/// k_i ~ Bin(n, beta), k_{i-1} ~ Bin(k_i, beta), ... and averages the
/// corresponding product of cos^2/sin^2 transfer factors.
ChainEstimate simulate_indistinguishable_chain(const RabiSystem& system,
                                               const IndistinguishableEnv& env, int n,
                                               const EnsembleConfig& cfg);

}  // namespace rabi

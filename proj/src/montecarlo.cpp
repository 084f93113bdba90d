#include "rabi/montecarlo.hpp"

#include <cmath>
#include <stdexcept>

#include "rabi/parallel.hpp"

namespace rabi {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Probability of finding Ground a duration `elapsed` after preparation in `prep`.
double ground_after(double omega, Level prep, double elapsed) {
  const double c = std::cos(omega * elapsed);
  const double s = std::sin(omega * elapsed);
  return prep == Level::Ground ? c * c : s * s;
}

constexpr std::size_t kChainBlock = 1024;

}  // namespace

std::mt19937_64 trajectory_engine(std::uint64_t master_seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(master_seed) ^ index));
}

TrajectoryRecord sample_trajectory(const RabiSystem& system, const DistinguishableEnv& env,
                                   double t_max, std::mt19937_64& engine) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  TrajectoryRecord rec;
  Level prep = system.initial_state;
  double reset = 0.0;
  for (std::int64_t m = 1; static_cast<double>(m) * env.dt <= t_max; ++m) {
    const double epoch = static_cast<double>(m) * env.dt;
    if (unit(engine) < 1.0 - env.eta) {
      const double pg = ground_after(system.omega, prep, epoch - reset);
      prep = unit(engine) < pg ? Level::Ground : Level::Excited;
      reset = epoch;
      rec.passive_prep_times.push_back(epoch);
      rec.passive_prep_states.push_back(prep);
    }
  }
  return rec;
}

ProbabilitySeries simulate_distinguishable(const RabiSystem& system,
                                           const DistinguishableEnv& env,
                                           const EnsembleConfig& cfg) {
  if (cfg.n_systems < 1) throw std::invalid_argument("ensemble needs n_systems >= 1");
  const auto& grid = cfg.grid;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!(grid[j] >= 0.0) || (j > 0 && grid[j] < grid[j - 1])) {
      throw std::invalid_argument("ensemble grid must be sorted and non-negative");
    }
  }
  ProbabilitySeries out;
  out.source = "montecarlo-distinguishable";
  out.params = {{"omega", system.omega},
                {"dt", env.dt},
                {"eta", env.eta},
                {"n_systems", static_cast<double>(cfg.n_systems)},
                {"seed", static_cast<double>(cfg.seed)}};
  if (grid.empty()) return out;

  const auto n_traj = static_cast<std::size_t>(cfg.n_systems);
  const unsigned workers = detail::worker_count(n_traj / 256);
  std::vector<std::vector<std::int64_t>> counts(workers,
                                                std::vector<std::int64_t>(grid.size(), 0));
  const std::size_t chunk = (n_traj + workers - 1) / workers;

  detail::parallel_chunks(workers, [&](std::size_t wbegin, std::size_t wend) {
    for (std::size_t w = wbegin; w < wend; ++w) {
      auto& local = counts[w];
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const std::size_t end = std::min(n_traj, (w + 1) * chunk);
      for (std::size_t traj = w * chunk; traj < end; ++traj) {
        auto engine = trajectory_engine(cfg.seed, traj);
        Level prep = system.initial_state;
        double reset = 0.0;
        std::int64_t next_epoch = 1;
        for (std::size_t j = 0; j < grid.size(); ++j) {
          const double t = grid[j];
          while (static_cast<double>(next_epoch) * env.dt <= t) {
            const double epoch = static_cast<double>(next_epoch) * env.dt;
            if (unit(engine) < 1.0 - env.eta) {
              const double pg = ground_after(system.omega, prep, epoch - reset);
              prep = unit(engine) < pg ? Level::Ground : Level::Excited;
              reset = epoch;
            }
            ++next_epoch;
          }
          if (unit(engine) < ground_after(system.omega, prep, t - reset)) ++local[j];
        }
      }
    }
  }, 1);

  out.t = grid;
  out.p.assign(grid.size(), 0.0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    std::int64_t total = 0;
    for (const auto& local : counts) total += local[j];
    out.p[j] = static_cast<double>(total) / static_cast<double>(cfg.n_systems);
  }
  return out;
}

ChainEstimate simulate_indistinguishable_chain(const RabiSystem& system,
                                               const IndistinguishableEnv& env, int n,
                                               const EnsembleConfig& cfg) {
  if (cfg.n_systems < 1) throw std::invalid_argument("ensemble needs n_systems >= 1");
  if (n < 0) throw std::domain_error("chain index n must be non-negative");

  const double angle = system.omega * env.dt;
  const auto n_samples = static_cast<std::size_t>(cfg.n_systems);
  const std::size_t n_blocks = (n_samples + kChainBlock - 1) / kChainBlock;
  std::vector<double> block_sum(n_blocks, 0.0), block_sumsq(n_blocks, 0.0);

  detail::parallel_chunks(n_blocks, [&](std::size_t bbegin, std::size_t bend) {
    for (std::size_t b = bbegin; b < bend; ++b) {
      auto engine = trajectory_engine(cfg.seed, b);
      const std::size_t end = std::min(n_samples, (b + 1) * kChainBlock);
      double sum = 0.0;
      double sumsq = 0.0;
      for (std::size_t sample = b * kChainBlock; sample < end; ++sample) {
        // Row vector of coefficients on (P_g, P_e) at the current index.
        double a_g = 1.0;
        double a_e = 0.0;
        std::int64_t k = n;
        for (int level = env.max_events; level >= 1; --level) {
          std::binomial_distribution<std::int64_t> draw(k, env.beta);
          const std::int64_t kept = draw(engine);
          const double x = angle * static_cast<double>(k - kept);
          const double c2 = std::cos(x) * std::cos(x);
          const double s2 = std::sin(x) * std::sin(x);
          const double g = a_g * c2 + a_e * s2;
          const double e = a_g * s2 + a_e * c2;
          a_g = g;
          a_e = e;
          k = kept;
        }
        const double pg = ground_after(system.omega, system.initial_state,
                                       static_cast<double>(k) * env.dt);
        const double value = a_g * pg + a_e * (1.0 - pg);
        sum += value;
        sumsq += value * value;
      }
      block_sum[b] = sum;
      block_sumsq[b] = sumsq;
    }
  }, 4);

  double sum = 0.0;
  double sumsq = 0.0;
  for (std::size_t b = 0; b < n_blocks; ++b) {
    sum += block_sum[b];
    sumsq += block_sumsq[b];
  }
  const double count = static_cast<double>(n_samples);
  ChainEstimate est;
  est.samples = cfg.n_systems;
  est.mean = sum / count;
  if (n_samples > 1) {
    const double var = std::max(0.0, (sumsq - count * est.mean * est.mean) / (count - 1.0));
    est.std_error = std::sqrt(var / count);
  }
  return est;
}

}  // namespace rabi

// Binomial-weighted nested predictor for indistinguishable systems and
// interference events.
//
// At discrete time n dt, with at most i interference events,
//
//   P^(i)_g[n] = sum_k b(n,k,beta) ( cos^2(W(n-k)dt) P^(i-1)_g[k]
//                                  + sin^2(W(n-k)dt) P^(i-1)_e[k] )
//
// and P^(i)_e swaps the two inner terms. Level 0 is the Born law. The
// table is filled level by level, so each level costs O(n_max^2).
#pragma once

#include <complex>
#include <span>
#include <vector>

#include "rabi/core.hpp"
#include "rabi/series.hpp"

namespace rabi {

inline constexpr int kDefaultMaxEvents = 5;

struct IndistinguishableEnv {
  IndistinguishableEnv(double dt, double beta, int max_events = kDefaultMaxEvents);

  double dt;
  double beta;     // probability that an interval precedes an interference event
  int max_events;  // truncation order i
};

class NestedTable {
 public:
  NestedTable(RabiSystem system, IndistinguishableEnv env, int n_max);

  const RabiSystem& system() const noexcept { return system_; }
  const IndistinguishableEnv& env() const noexcept { return env_; }
  int n_max() const noexcept { return n_max_; }
  int levels() const noexcept { return static_cast<int>(ground_.size()); }

  std::span<const double> ground(int level) const { return ground_.at(level); }
  std::span<const double> excited(int level) const { return excited_.at(level); }
  std::span<const double> top_ground() const { return ground_.back(); }

 private:
  friend NestedTable excited_counterpart(const NestedTable& table);
  NestedTable(RabiSystem system, IndistinguishableEnv env, int n_max, bool swap_base);

  RabiSystem system_;
  IndistinguishableEnv env_;
  int n_max_;
  std::vector<std::vector<double>> ground_;
  std::vector<std::vector<double>> excited_;
};

NestedTable build_nested_table(const RabiSystem& system, const IndistinguishableEnv& env,
                               int n_max);

/// Smallest table size whose rescaled range covers [0, t_max].
int required_table_size(const IndistinguishableEnv& env, double t_max);

/// Top-level ground probability at coordinate time t, n -> t / (beta dt),
/// linearly interpolated between table entries.
Probability rescale_to_coordinate_time(const NestedTable& table, double t_coord);

ProbabilitySeries sample_series(const NestedTable& table, std::span<const double> grid);

/// Table built from the swapped base case (sin^2 <-> cos^2): its ground rows
/// are the excited-state probabilities of the original.
NestedTable excited_counterpart(const NestedTable& table);

/// Dominant-term approximation for beta near 1:
///   (1/4) (2 - z^N - conj(z)^N),  z = 1 - beta (1 - e^{-2i W dt}),  N = t/(beta dt)
Probability approx_closed_form(const RabiSystem& system, const IndistinguishableEnv& env,
                               double t_coord);

/// Leading-order decay rate of the approximation, 2 (1 - beta) W^2 dt.
double approx_gamma(const RabiSystem& system, const IndistinguishableEnv& env);

}  // namespace rabi

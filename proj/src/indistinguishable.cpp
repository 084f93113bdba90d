#include "rabi/indistinguishable.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rabi/parallel.hpp"

namespace rabi {

IndistinguishableEnv::IndistinguishableEnv(double dt_, double beta_, int max_events_)
    : dt(dt_), beta(beta_), max_events(max_events_) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::domain_error("interference time scale must be positive and finite");
  }
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw std::domain_error("interval probability beta must lie in (0, 1]");
  }
  if (max_events < 0) throw std::domain_error("max_events must be non-negative");
}

NestedTable::NestedTable(RabiSystem system, IndistinguishableEnv env, int n_max)
    : NestedTable(system, env, n_max, false) {}

NestedTable::NestedTable(RabiSystem system, IndistinguishableEnv env, int n_max, bool swap_base)
    : system_(system), env_(env), n_max_(n_max) {
  if (n_max < 0) throw std::domain_error("nested table needs n_max >= 0");
  const auto size = static_cast<std::size_t>(n_max + 1);

  std::vector<double> cos2(size), sin2(size);
  std::vector<double> base_g(size), base_e(size);
  for (std::size_t d = 0; d < size; ++d) {
    const double angle = system_.omega * static_cast<double>(d) * env_.dt;
    cos2[d] = std::cos(angle) * std::cos(angle);
    sin2[d] = std::sin(angle) * std::sin(angle);
    const double t = static_cast<double>(d) * env_.dt;
    base_g[d] = born_ground_prob(system_, t).value();
    base_e[d] = born_excited_prob(system_, t).value();
  }
  if (swap_base) std::swap(base_g, base_e);

  std::vector<std::vector<double>> rows(size);
  detail::parallel_chunks(size, [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) {
      rows[n] = binomial_row(static_cast<std::int64_t>(n), env_.beta);
    }
  });

  ground_.reserve(static_cast<std::size_t>(env_.max_events + 1));
  excited_.reserve(static_cast<std::size_t>(env_.max_events + 1));
  ground_.push_back(std::move(base_g));
  excited_.push_back(std::move(base_e));

  for (int level = 1; level <= env_.max_events; ++level) {
    const auto& prev_g = ground_.back();
    const auto& prev_e = excited_.back();
    std::vector<double> next_g(size), next_e(size);
    detail::parallel_chunks(size, [&](std::size_t begin, std::size_t end) {
      for (std::size_t n = begin; n < end; ++n) {
        const auto& w = rows[n];
        double g = 0.0;
        double e = 0.0;
        for (std::size_t k = 0; k <= n; ++k) {
          const double c = cos2[n - k];
          const double s = sin2[n - k];
          g += w[k] * (c * prev_g[k] + s * prev_e[k]);
          e += w[k] * (s * prev_g[k] + c * prev_e[k]);
        }
        next_g[n] = Probability(g).value();
        next_e[n] = Probability(e).value();
      }
    }, 16);
    ground_.push_back(std::move(next_g));
    excited_.push_back(std::move(next_e));
  }
}

NestedTable build_nested_table(const RabiSystem& system, const IndistinguishableEnv& env,
                               int n_max) {
  return NestedTable(system, env, n_max);
}

int required_table_size(const IndistinguishableEnv& env, double t_max) {
  if (!(t_max >= 0.0)) throw std::domain_error("t_max must be non-negative");
  return static_cast<int>(std::ceil(t_max / (env.beta * env.dt)));
}

Probability rescale_to_coordinate_time(const NestedTable& table, double t_coord) {
  if (!(t_coord >= 0.0)) throw std::domain_error("coordinate time must be non-negative");
  const auto& env = table.env();
  const double index = t_coord / (env.beta * env.dt);
  const double n_max = table.n_max();
  if (index > n_max * (1.0 + 1e-12)) {
    throw std::out_of_range("t=" + std::to_string(t_coord) + " needs table index " +
                            std::to_string(index) + " beyond n_max=" +
                            std::to_string(table.n_max()));
  }
  const auto row = table.top_ground();
  const double lo_d = std::min(std::floor(index), n_max);
  const auto lo = static_cast<std::size_t>(lo_d);
  const double frac = std::max(0.0, index - lo_d);
  if (lo == row.size() - 1 || frac == 0.0) return Probability(row[lo]);
  return Probability(row[lo] + frac * (row[lo + 1] - row[lo]));
}

ProbabilitySeries sample_series(const NestedTable& table, std::span<const double> grid) {
  ProbabilitySeries out;
  out.source = "indistinguishable";
  out.params = {{"omega", table.system().omega},
                {"dt", table.env().dt},
                {"beta", table.env().beta},
                {"max_events", static_cast<double>(table.env().max_events)},
                {"n_max", static_cast<double>(table.n_max())}};
  out.t.reserve(grid.size());
  out.p.reserve(grid.size());
  double last = 0.0;
  for (double t : grid) {
    if (t < last) throw std::invalid_argument("sample grid must be sorted");
    last = t;
    out.t.push_back(t);
    out.p.push_back(rescale_to_coordinate_time(table, t).value());
  }
  return out;
}

NestedTable excited_counterpart(const NestedTable& table) {
  return NestedTable(table.system_, table.env_, table.n_max_, true);
}

Probability approx_closed_form(const RabiSystem& system, const IndistinguishableEnv& env,
                               double t_coord) {
  if (!(t_coord >= 0.0)) throw std::domain_error("coordinate time must be non-negative");
  using cplx = std::complex<double>;
  const double theta = 2.0 * env.dt * system.omega;
  const double steps = t_coord / (env.beta * env.dt);
  const cplx z = 1.0 - env.beta * (1.0 - std::polar(1.0, -theta));
  // z^N + conj(z)^N = 2 Re z^N
  const double ground = 0.25 * (2.0 - 2.0 * std::pow(z, steps).real());
  return Probability(system.initial_state == Level::Excited ? ground : 1.0 - ground);
}

double approx_gamma(const RabiSystem& system, const IndistinguishableEnv& env) {
  return 2.0 * (1.0 - env.beta) * system.omega * system.omega * env.dt;
}

}  // namespace rabi

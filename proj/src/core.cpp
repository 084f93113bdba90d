#include "rabi/core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rabi {

std::string_view to_string(Level s) noexcept {
  return s == Level::Ground ? "ground" : "excited";
}

Probability::Probability(double value) {
  if (!(value >= -kProbabilitySlack && value <= 1.0 + kProbabilitySlack)) {
    throw std::domain_error("probability out of range: " + std::to_string(value));
  }
  value_ = value < 0.0 ? 0.0 : (value > 1.0 ? 1.0 : value);
}

RabiSystem::RabiSystem(double omega_, Level initial_state_)
    : omega(omega_), initial_state(initial_state_) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw std::domain_error("Rabi frequency must be positive and finite");
  }
}

Probability born_prob(const RabiSystem& system, Level observed, double t) {
  if (!(t >= 0.0)) {
    throw std::domain_error("evolution parameter must be non-negative");
  }
  const double s = std::sin(system.omega * t);
  const double c = std::cos(system.omega * t);
  return Probability(observed == system.initial_state ? c * c : s * s);
}

namespace detail {

double binomial_weight_direct(std::int64_t n, std::int64_t k, double beta) {
  double c = 1.0;
  for (std::int64_t j = 1; j <= k; ++j) {
    c = c * static_cast<double>(n - k + j) / static_cast<double>(j);
  }
  return c * std::pow(beta, static_cast<double>(k)) *
         std::pow(1.0 - beta, static_cast<double>(n - k));
}

double binomial_weight_log(std::int64_t n, std::int64_t k, double beta) {
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  double log_w = std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0);
  if (k > 0) log_w += dk * std::log(beta);
  if (n - k > 0) {
    if (beta == 1.0) return 0.0;
    log_w += (dn - dk) * std::log1p(-beta);
  }
  return std::exp(log_w);
}

}  // namespace detail

static void check_binomial_args(std::int64_t n, std::int64_t k, double beta) {
  if (n < 0 || k < 0 || k > n) {
    throw std::domain_error("binomial weight requires 0 <= k <= n");
  }
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw std::domain_error("binomial weight requires 0 < beta <= 1");
  }
}

double binomial_weight(std::int64_t n, std::int64_t k, double beta) {
  check_binomial_args(n, k, beta);
  return n > kBinomialDirectMax ? detail::binomial_weight_log(n, k, beta)
                                : detail::binomial_weight_direct(n, k, beta);
}

std::vector<double> binomial_row(std::int64_t n, double beta) {
  check_binomial_args(n, 0, beta);
  std::vector<double> row(static_cast<std::size_t>(n + 1));
  for (std::int64_t k = 0; k <= n; ++k) {
    row[static_cast<std::size_t>(k)] = binomial_weight(n, k, beta);
  }
  return row;
}

double laguerre_l1(int n, double x) {
  if (n < 0) throw std::domain_error("Laguerre degree must be non-negative");
  if (!std::isfinite(x)) throw std::domain_error("Laguerre argument must be finite");
  constexpr double alpha = 1.0;
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + alpha - x;
  for (int m = 2; m <= n; ++m) {
    const double next = ((2.0 * m + alpha - 1.0 - x) * cur - (m + alpha - 1.0) * prev) / m;
    prev = cur;
    cur = next;
  }
  return cur;
}

FrequencyLadder rabi_frequency_ladder(double base_omega, int n_max, double lamb_dicke) {
  if (n_max < 0) throw std::domain_error("ladder needs n_max >= 0");
  if (!(base_omega > 0.0) || !std::isfinite(base_omega)) {
    throw std::domain_error("ladder base frequency must be positive and finite");
  }
  FrequencyLadder ladder{base_omega, lamb_dicke, {}};
  ladder.entries.reserve(static_cast<std::size_t>(n_max + 1));
  const double x = lamb_dicke * lamb_dicke;
  const double prefactor = lamb_dicke * std::exp(-x / 2.0);
  for (int n = 0; n <= n_max; ++n) {
    const double omega_n = base_omega * prefactor * laguerre_l1(n, x) / std::sqrt(n + 1.0);
    ladder.entries.push_back({n, omega_n});
  }
  return ladder;
}

}  // namespace rabi

#include "rabi/distinguishable.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rabi {

DistinguishableEnv::DistinguishableEnv(double dt_, double eta_) : dt(dt_), eta(eta_) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::domain_error("interference time scale must be positive and finite");
  }
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::domain_error("survival probability eta must lie in [0, 1]");
  }
}

PiecewisePredictor::PiecewisePredictor(RabiSystem system, DistinguishableEnv env, int n_max,
                                       Level observed)
    : system_(system), env_(env), observed_(observed), n_max_(n_max) {
  if (n_max < 0) throw std::domain_error("predictor needs n_max >= 0");
  boundary_.reserve(static_cast<std::size_t>(n_max));
  // level_value(n, .) only touches boundary_[0..n-1], so the table can be
  // filled in order.
  for (int n = 1; n <= n_max; ++n) {
    boundary_.push_back(Probability(level_value(n - 1, n * env_.dt)).value());
  }
}

int PiecewisePredictor::interval(double t_coord) const {
  if (!(t_coord >= 0.0)) throw std::domain_error("coordinate time must be non-negative");
  auto n = static_cast<long long>(std::floor(t_coord / env_.dt));
  if (static_cast<double>(n + 1) * env_.dt <= t_coord) ++n;
  if (n > 0 && static_cast<double>(n) * env_.dt > t_coord) --n;
  if (n > n_max_) {
    throw std::out_of_range("t=" + std::to_string(t_coord) + " lies beyond the built range " +
                            std::to_string(t_limit()) + "; rebuild with n_max >= " +
                            std::to_string(n));
  }
  return static_cast<int>(n);
}

double PiecewisePredictor::level_value(int level, double t_coord) const {
  if (level < 0 || level > n_max_) throw std::out_of_range("predictor level out of range");
  const double w = system_.omega;
  double acc = born_prob(system_, observed_, t_coord).value();
  for (int m = 1; m <= level; ++m) {
    double since = t_coord - m * env_.dt;
    if (since < 0.0) {
      if (since < -1e-12 * env_.dt * m) {
        throw std::domain_error("level " + std::to_string(level) + " is undefined before " +
                                std::to_string(level * env_.dt));
      }
      since = 0.0;
    }
    const double c = std::cos(w * since);
    const double s = std::sin(w * since);
    const double b = boundary_[static_cast<std::size_t>(m - 1)];
    acc = env_.eta * acc + (1.0 - env_.eta) * (c * c * b + s * s * (1.0 - b));
  }
  return acc;
}

Probability PiecewisePredictor::operator()(double t_coord) const {
  return Probability(level_value(interval(t_coord), t_coord));
}

PiecewisePredictor build_predictor(const RabiSystem& system, const DistinguishableEnv& env,
                                   int n_max) {
  return PiecewisePredictor(system, env, n_max, Level::Ground);
}

int required_intervals(const DistinguishableEnv& env, double t_max) {
  if (!(t_max >= 0.0)) throw std::domain_error("t_max must be non-negative");
  return static_cast<int>(std::floor(t_max / env.dt)) + 1;
}

Probability predict_ground_prob(const PiecewisePredictor& pred, double t_coord) {
  const double p = pred(t_coord).value();
  return Probability(pred.observed() == Level::Ground ? p : 1.0 - p);
}

ProbabilitySeries sample_series(const PiecewisePredictor& pred, std::span<const double> grid) {
  ProbabilitySeries out;
  out.source = "distinguishable";
  out.params = {{"omega", pred.system().omega},
                {"dt", pred.env().dt},
                {"eta", pred.env().eta},
                {"n_max", static_cast<double>(pred.n_max())}};
  out.t.reserve(grid.size());
  out.p.reserve(grid.size());
  double last = 0.0;
  for (double t : grid) {
    if (t < last) throw std::invalid_argument("sample grid must be sorted");
    last = t;
    out.t.push_back(t);
    out.p.push_back(predict_ground_prob(pred, t).value());
  }
  return out;
}

}  // namespace rabi

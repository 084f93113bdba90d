#include "rabi/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace rabi {

std::string_view to_string(FitParam p) noexcept {
  switch (p) {
    case FitParam::Gamma: return "gamma";
    case FitParam::Omega: return "omega";
    case FitParam::Amplitude: return "amplitude";
    case FitParam::Offset: return "offset";
    case FitParam::Phase: return "phase";
  }
  return "?";
}

FitParam fit_param_from_string(std::string_view name) {
  for (auto p : {FitParam::Gamma, FitParam::Omega, FitParam::Amplitude, FitParam::Offset,
                 FitParam::Phase}) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown fit parameter '" + std::string(name) + "'");
}

double DampedSinusoidParams::get(FitParam p) const {
  switch (p) {
    case FitParam::Gamma: return gamma;
    case FitParam::Omega: return omega;
    case FitParam::Amplitude: return amplitude;
    case FitParam::Offset: return offset;
    case FitParam::Phase: return phase;
  }
  return 0.0;
}

void DampedSinusoidParams::set(FitParam p, double v) {
  switch (p) {
    case FitParam::Gamma: gamma = v; break;
    case FitParam::Omega: omega = v; break;
    case FitParam::Amplitude: amplitude = v; break;
    case FitParam::Offset: offset = v; break;
    case FitParam::Phase: phase = v; break;
  }
}

double damped_sinusoid(const DampedSinusoidParams& q, double t) {
  return q.offset + q.amplitude * std::exp(-q.gamma * t) * std::cos(2.0 * q.omega * t + q.phase);
}

std::array<double, 5> damped_sinusoid_gradient(const DampedSinusoidParams& q, double t) {
  const double env = std::exp(-q.gamma * t);
  const double arg = 2.0 * q.omega * t + q.phase;
  const double c = std::cos(arg);
  const double s = std::sin(arg);
  return {
      -t * q.amplitude * env * c,
      -2.0 * t * q.amplitude * env * s,
      env * c,
      1.0,
      -q.amplitude * env * s,
  };
}

namespace {

double sum_sq_residual(std::span<const double> t, std::span<const double> p,
                       const DampedSinusoidParams& q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = p[i] - damped_sinusoid(q, t[i]);
    sum += r * r;
  }
  return sum;
}

DampedSinusoidParams apply_step(DampedSinusoidParams q, const std::vector<FitParam>& free,
                                const Eigen::VectorXd& step) {
  for (std::size_t j = 0; j < free.size(); ++j) {
    q.set(free[j], q.get(free[j]) + step(static_cast<Eigen::Index>(j)));
  }
  q.gamma = std::max(0.0, q.gamma);
  return q;
}

}  // namespace

DampedSinusoidFit fit_damped_sinusoid(std::span<const double> t, std::span<const double> p,
                                      double omega_hint, const FitOptions& options) {
  if (t.size() != p.size()) throw std::invalid_argument("fit: t and p differ in length");
  if (t.size() < 10) throw std::invalid_argument("fit: need at least 10 points");
  if (!(omega_hint > 0.0)) throw std::invalid_argument("fit: omega_hint must be positive");
  const double span = t.back() - t.front();
  if (span < (1.0 - 1e-9) * 2.0 * std::numbers::pi / omega_hint) {
    throw std::invalid_argument("fit: series must span at least two oscillation periods");
  }

  DampedSinusoidFit result;
  result.free_params = options.free_params;

  const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
  if (*hi - *lo < 1e-14) {
    result.degenerate = true;
    result.gamma = 0.0;
    result.omega_fit = omega_hint;
    result.amplitude = 0.0;
    result.offset = *lo;
    return result;
  }

  const std::vector<FitParam> free(options.free_params.begin(), options.free_params.end());
  const auto m = static_cast<Eigen::Index>(t.size());
  const auto k = static_cast<Eigen::Index>(free.size());

  DampedSinusoidParams q;
  q.omega = omega_hint;
  double cost = sum_sq_residual(t, p, q);
  const auto rms = [&](double c) { return std::sqrt(c / static_cast<double>(t.size())); };

  auto finish = [&](int iterations) {
    result.gamma = q.gamma;
    result.omega_fit = q.omega;
    result.amplitude = q.amplitude;
    result.offset = q.offset;
    result.phase = q.phase;
    result.residual_rms = rms(cost);
    result.iterations = iterations;
    return result;
  };
  if (free.empty()) return finish(0);

  Eigen::MatrixXd jac(m, k);
  Eigen::VectorXd resid(m);
  double lambda = 1e-3;

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto ti = t[static_cast<std::size_t>(i)];
      const auto grad = damped_sinusoid_gradient(q, ti);
      for (Eigen::Index j = 0; j < k; ++j) {
        jac(i, j) = grad[static_cast<std::size_t>(free[static_cast<std::size_t>(j)])];
      }
      resid(i) = p[static_cast<std::size_t>(i)] - damped_sinusoid(q, ti);
    }
    const Eigen::MatrixXd normal = jac.transpose() * jac;
    const Eigen::VectorXd gradient = jac.transpose() * resid;

    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd damped = normal;
      for (Eigen::Index j = 0; j < k; ++j) {
        damped(j, j) += lambda * std::max(normal(j, j), 1e-12);
      }
      const Eigen::VectorXd step = damped.ldlt().solve(gradient);
      const DampedSinusoidParams trial = apply_step(q, free, step);
      const double trial_cost = sum_sq_residual(t, p, trial);
      if (std::isfinite(trial_cost) && trial_cost <= cost) {
        double step_norm = 0.0;
        double x_norm = 0.0;
        for (auto fp : free) {
          const double d = trial.get(fp) - q.get(fp);
          step_norm += d * d;
          x_norm += trial.get(fp) * trial.get(fp);
        }
        const bool improved = trial_cost < cost;
        q = trial;
        cost = trial_cost;
        lambda = std::max(lambda / 10.0, 1e-15);
        accepted = true;
        if (!improved ||
            std::sqrt(step_norm) <= options.step_tolerance * (std::sqrt(x_norm) + 1e-12)) {
          return finish(iter);
        }
      } else {
        lambda *= 10.0;
        // No descent direction left at working precision: stationary point.
        if (lambda > 1e16) return finish(iter);
      }
    }
  }
  throw FitError("damped-sinusoid fit did not converge in " +
                     std::to_string(options.max_iterations) + " iterations",
                 q, rms(cost));
}

PowerLawFit fit_power_law(std::span<const std::pair<int, double>> ratios) {
  if (ratios.empty()) throw std::invalid_argument("power-law fit needs at least one ratio");
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& [n, r] : ratios) {
    if (n < 0) throw std::domain_error("power-law fit: level index must be non-negative");
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw std::domain_error("power-law fit: ratios must be positive and finite");
    }
    const double x = std::log1p(static_cast<double>(n));
    sxy += x * std::log(r);
    sxx += x * x;
  }
  PowerLawFit fit;
  if (sxx == 0.0) {
    fit.degenerate = true;
    return fit;
  }
  fit.exponent = sxy / sxx;
  double ss = 0.0;
  for (const auto& [n, r] : ratios) {
    const double d = std::log(r) - fit.exponent * std::log1p(static_cast<double>(n));
    ss += d * d;
  }
  fit.residual_rms = std::sqrt(ss / static_cast<double>(ratios.size()));
  return fit;
}

}  // namespace rabi

#include "rabi/master_equation.hpp"

#include <cmath>
#include <stdexcept>

namespace rabi {

MasterEqParams::MasterEqParams(double omega_, double gamma_se_)
    : omega(omega_), gamma_se(gamma_se_) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw std::domain_error("Rabi frequency must be positive and finite");
  }
  if (!(gamma_se >= 0.0) || !std::isfinite(gamma_se)) {
    throw std::domain_error("spontaneous-emission rate must be non-negative and finite");
  }
}

double MasterEqParams::mu() const {
  const double q = gamma_se / 4.0;
  return std::sqrt(4.0 * omega * omega - q * q);
}

Probability master_eq_prob(const MasterEqParams& params, double t) {
  if (!(t >= 0.0)) throw std::domain_error("evolution parameter must be non-negative");
  const double w = params.omega;
  const double g = params.gamma_se;
  if (g >= 8.0 * w) {
    throw std::domain_error("overdamped master-equation regime (Gamma >= 8 Omega) unsupported");
  }
  const double mu = params.mu();
  const double prefactor = 4.0 * w * w / (g * g + 8.0 * w * w);
  const double envelope = std::exp(-0.75 * g * t);
  return Probability(prefactor *
                     (1.0 - envelope * (std::cos(mu * t) + 0.75 * g / mu * std::sin(mu * t))));
}

Probability master_eq_strong_driving(const MasterEqParams& params, double t) {
  if (!(t >= 0.0)) throw std::domain_error("evolution parameter must be non-negative");
  return Probability(0.5 * (1.0 - std::exp(-0.75 * params.gamma_se * t) *
                                      std::cos(2.0 * params.omega * t)));
}

}  // namespace rabi

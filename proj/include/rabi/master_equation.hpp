// On-resonance closed-form solution of the standard master equation,
// used as the comparison baseline.
#pragma once

#include "rabi/core.hpp"

namespace rabi {

struct MasterEqParams {
  MasterEqParams(double omega, double gamma_se);

  double omega;
  double gamma_se;  // spontaneous-emission rate Gamma

  /// mu = sqrt(4 W^2 - (Gamma/4)^2)
  double mu() const;
};

/// (4W^2/(Gamma^2 + 8W^2)) (1 - e^{-3 Gamma t/4} (cos mu t + (3 Gamma/(4 mu)) sin mu t)).
/// Throws std::domain_error for the overdamped regime Gamma >= 8W.
Probability master_eq_prob(const MasterEqParams& params, double t);

/// Strong-driving limit (1/2)(1 - e^{-3 Gamma t/4} cos 2 W t).
Probability master_eq_strong_driving(const MasterEqParams& params, double t);

}  // namespace rabi

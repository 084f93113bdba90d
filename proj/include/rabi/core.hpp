// Two-level Rabi primitives: Born probabilities, binomial weights,
// generalized Laguerre polynomials and the trapped-ion frequency ladder.
#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace rabi {

enum class Level { Ground, Excited };

constexpr Level other(Level s) noexcept {
  return s == Level::Ground ? Level::Excited : Level::Ground;
}

std::string_view to_string(Level s) noexcept;

/// Tolerance used when accepting accumulated rounding outside [0, 1].
inline constexpr double kProbabilitySlack = 1e-12;

/// A probability in [0, 1]. Values within kProbabilitySlack of the interval
/// are clamped; anything further out throws std::domain_error.
class Probability {
 public:
  constexpr Probability() = default;
  explicit Probability(double value);

  constexpr double value() const noexcept { return value_; }
  constexpr operator double() const noexcept { return value_; }

 private:
  double value_ = 0.0;
};

struct RabiSystem {
  RabiSystem(double omega, Level initial_state = Level::Excited);

  double omega;
  Level initial_state;
};

/// Born probability to find `observed` a duration t after preparation.
/// Prepared state survives as cos^2(omega t), the other level as sin^2.
Probability born_prob(const RabiSystem& system, Level observed, double t);

inline Probability born_ground_prob(const RabiSystem& system, double t) {
  return born_prob(system, Level::Ground, t);
}
inline Probability born_excited_prob(const RabiSystem& system, double t) {
  return born_prob(system, Level::Excited, t);
}

/// Binomial mass C(n,k) beta^k (1-beta)^(n-k), 0 < beta <= 1.
/// Direct product for n <= kBinomialDirectMax, log space above.
inline constexpr std::int64_t kBinomialDirectMax = 60;
double binomial_weight(std::int64_t n, std::int64_t k, double beta);

/// Whole row b(n, 0..n, beta).
std::vector<double> binomial_row(std::int64_t n, double beta);

namespace detail {
double binomial_weight_direct(std::int64_t n, std::int64_t k, double beta);
double binomial_weight_log(std::int64_t n, std::int64_t k, double beta);
}  // namespace detail

/// Generalized Laguerre polynomial L^{(1)}_n(x) by three-term recurrence.
double laguerre_l1(int n, double x);

inline constexpr double kLambDicke = 0.202;

struct LadderEntry {
  int n;
  double omega_n;  // Rabi frequency between |n> and |n+1>
};

struct FrequencyLadder {
  double base_omega;
  double lamb_dicke;
  std::vector<LadderEntry> entries;
};

/// Omega_{n,n+1} = base * eta e^{-eta^2/2} L^1_n(eta^2) / sqrt(n+1),
/// with eta the Lamb-Dicke parameter.
FrequencyLadder rabi_frequency_ladder(double base_omega, int n_max,
                                      double lamb_dicke = kLambDicke);

}  // namespace rabi

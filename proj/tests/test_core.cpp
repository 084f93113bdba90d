#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "rabi/core.hpp"

using namespace rabi;

namespace {

// C(n, k) * beta^k (1-beta)^(n-k) from exact integer factorials (n <= 20).
double binomial_by_factorials(int n, int k, double beta) {
  auto fact = [](int m) {
    std::uint64_t f = 1;
    for (int j = 2; j <= m; ++j) f *= static_cast<std::uint64_t>(j);
    return f;
  };
  const double c = static_cast<double>(fact(n) / (fact(k) * fact(n - k)));
  return c * std::pow(beta, k) * std::pow(1.0 - beta, n - k);
}

struct SeriesValue {
  double value;
  double abs_sum;  // sum of |terms|, the conditioning scale of the sum
};

// L^1_n(x) = sum_j (-1)^j C(n+1, n-j) x^j / j!
SeriesValue laguerre_series(int n, double x) {
  SeriesValue out{0.0, 0.0};
  for (int j = 0; j <= n; ++j) {
    double c = 1.0;  // C(n+1, n-j) = C(n+1, j+1)
    for (int m = 1; m <= j + 1; ++m) c = c * (n + 1 - (j + 1) + m) / m;
    double term = c;
    for (int m = 1; m <= j; ++m) term *= x / m;
    if (j % 2) term = -term;
    out.value += term;
    out.abs_sum += std::abs(term);
  }
  return out;
}

}  // namespace

TEST_CASE("Probability clamps rounding slack and rejects real violations") {
  CHECK(Probability(-5e-13).value() == 0.0);
  CHECK(Probability(1.0 + 5e-13).value() == 1.0);
  CHECK(Probability(0.25).value() == 0.25);
  CHECK_THROWS_AS(Probability(-1e-9), std::domain_error);
  CHECK_THROWS_AS(Probability(1.0 + 1e-9), std::domain_error);
  CHECK_THROWS_AS(Probability(std::nan("")), std::domain_error);
}

TEST_CASE("RabiSystem rejects non-positive or non-finite frequency") {
  CHECK_THROWS_AS(RabiSystem{0.0}, std::domain_error);
  CHECK_THROWS_AS(RabiSystem{-1.0}, std::domain_error);
  CHECK_THROWS_AS(RabiSystem{INFINITY}, std::domain_error);
  CHECK_NOTHROW(RabiSystem{1e-3, Level::Ground});
}

TEST_CASE("Born probability") {
  const RabiSystem excited(1.0);
  CHECK(born_ground_prob(excited, 0.0).value() == 0.0);
  CHECK(born_ground_prob(excited, std::numbers::pi / 2).value() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(born_ground_prob(RabiSystem(2.0), std::numbers::pi / 8).value() ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(born_ground_prob(excited, -1e-3), std::domain_error);

  const RabiSystem ground(1.3, Level::Ground);
  CHECK(born_ground_prob(ground, 0.0).value() == 1.0);
  CHECK(born_ground_prob(ground, 0.4).value() == doctest::Approx(std::cos(0.52) * std::cos(0.52)));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> t(0.0, 100.0);
  for (int i = 0; i < 200; ++i) {
    const double x = t(rng);
    CHECK(born_ground_prob(excited, x).value() + born_excited_prob(excited, x).value() ==
          doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("binomial weight: worked values and argument checks") {
  CHECK(binomial_weight(5, 5, 1.0) == 1.0);
  CHECK(binomial_weight(5, 3, 1.0) == 0.0);
  CHECK(binomial_weight(4, 2, 0.5) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(binomial_weight(0, 0, 0.3) == 1.0);
  CHECK(binomial_weight(200, 200, 1.0) == 1.0);
  CHECK(binomial_weight(200, 10, 1.0) == 0.0);

  CHECK_THROWS_AS(binomial_weight(3, 4, 0.5), std::domain_error);
  CHECK_THROWS_AS(binomial_weight(3, -1, 0.5), std::domain_error);
  CHECK_THROWS_AS(binomial_weight(3, 1, 0.0), std::domain_error);
  CHECK_THROWS_AS(binomial_weight(3, 1, 1.5), std::domain_error);
}

TEST_CASE("binomial weight matches factorial oracle for n <= 20") {
  for (double beta : {0.05, 0.3, 0.5, 0.77, 0.995, 1.0}) {
    for (int n = 0; n <= 20; ++n) {
      for (int k = 0; k <= n; ++k) {
        const double expected = binomial_by_factorials(n, k, beta);
        CHECK(binomial_weight(n, k, beta) == doctest::Approx(expected).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("binomial direct and log paths agree at the switchover") {
  for (double beta : {0.1, 0.5, 0.9, 0.995}) {
    for (std::int64_t n : {kBinomialDirectMax, kBinomialDirectMax + 1}) {
      for (std::int64_t k = 0; k <= n; ++k) {
        const double direct = detail::binomial_weight_direct(n, k, beta);
        const double logged = detail::binomial_weight_log(n, k, beta);
        if (direct < 1e-290) continue;
        CHECK(std::abs(direct - logged) <= 1e-12 * direct);
      }
    }
  }
}

TEST_CASE("binomial normalization up to n = 10^4") {
  for (double beta : {0.01, 0.5, 0.995, 1.0}) {
    for (std::int64_t n : {0, 1, 7, 60, 61, 500, 3000, 10000}) {
      double sum = 0.0;
      for (double w : binomial_row(n, beta)) sum += w;
      CHECK(std::abs(sum - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("binomial mirror symmetry b(n,k,beta) = b(n,n-k,1-beta)") {
  std::mt19937_64 rng(11);
  // Dyadic beta so that 1 - beta is exact.
  std::uniform_int_distribution<int> beta_dist(1, 1023);
  std::uniform_int_distribution<int> n_dist(0, 400);
  for (int trial = 0; trial < 300; ++trial) {
    const double beta = beta_dist(rng) / 1024.0;
    const int n = n_dist(rng);
    const int k = std::uniform_int_distribution<int>(0, n)(rng);
    const double a = binomial_weight(n, k, beta);
    const double b = binomial_weight(n, n - k, 1.0 - beta);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(a, 1e-300) + 1e-300);
  }
}

TEST_CASE("laguerre L1 worked values") {
  const double x = 0.202 * 0.202;
  CHECK(x == doctest::Approx(0.040804));
  CHECK(laguerre_l1(0, x) == 1.0);
  CHECK(laguerre_l1(1, x) == doctest::Approx(1.959196).epsilon(1e-14));
  CHECK(laguerre_l1(4, x) == doctest::Approx(laguerre_series(4, x).value).epsilon(1e-13));
  CHECK_THROWS_AS(laguerre_l1(-1, x), std::domain_error);
  CHECK_THROWS_AS(laguerre_l1(2, NAN), std::domain_error);
}

TEST_CASE("laguerre recurrence equals series oracle for n <= 30, |x| <= 1") {
  for (int n = 0; n <= 30; ++n) {
    for (int j = -20; j <= 20; ++j) {
      const double x = j / 20.0;
      const auto s = laguerre_series(n, x);
      // Relative to the absolute term sum: near a root the value itself is 0.
      CHECK(std::abs(laguerre_l1(n, x) - s.value) <= 1e-10 * std::max(1.0, s.abs_sum));
      if (x <= 0.0) CHECK(laguerre_l1(n, x) == doctest::Approx(s.value).epsilon(1e-10));
    }
  }
}

TEST_CASE("frequency ladder") {
  const auto ladder = rabi_frequency_ladder(1.0, 20);
  REQUIRE(ladder.entries.size() == 21);
  CHECK(ladder.lamb_dicke == kLambDicke);
  CHECK(ladder.entries[0].omega_n == doctest::Approx(0.202 * std::exp(-0.020402)).epsilon(1e-15));
  CHECK(ladder.entries[0].omega_n == doctest::Approx(0.19792).epsilon(1e-5));
  CHECK(ladder.entries[1].omega_n / ladder.entries[0].omega_n ==
        doctest::Approx((2.0 - 0.040804) / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(ladder.entries[1].omega_n / ladder.entries[0].omega_n ==
        doctest::Approx(1.38536).epsilon(1e-5));

  const double x = kLambDicke * kLambDicke;
  for (const auto& e : ladder.entries) {
    CHECK(laguerre_series(e.n, x).value > 0.0);
    CHECK(e.omega_n > 0.0);
    CHECK(e.omega_n == 1.0 * 0.202 * std::exp(-x / 2.0) * laguerre_l1(e.n, x) / std::sqrt(e.n + 1.0));
  }
  for (std::size_t n = 1; n < 9; ++n) {
    CHECK(ladder.entries[n].omega_n > ladder.entries[n - 1].omega_n);
  }
  CHECK_THROWS_AS(rabi_frequency_ladder(1.0, -1), std::domain_error);
}

TEST_CASE("frequency ladder scales linearly with base frequency") {
  const auto base = rabi_frequency_ladder(1.7, 12);
  for (double c : {0.25, 2.0, 3.3, 1e3}) {
    const auto scaled = rabi_frequency_ladder(1.7 * c, 12);
    for (std::size_t n = 0; n < base.entries.size(); ++n) {
      CHECK(scaled.entries[n].omega_n ==
            doctest::Approx(c * base.entries[n].omega_n).epsilon(1e-15));
    }
  }
}

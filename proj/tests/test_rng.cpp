#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "bandit/rng.hpp"

using namespace bandit;

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

template <class F>
Moments sample_moments(std::size_t n, F&& draw) {
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = draw();
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / static_cast<double>(n);
  return {mean, sum_sq / static_cast<double>(n) - mean * mean};
}

}  // namespace

TEST_CASE("identical (seed, stream) reproduces the exact draw sequence") {
  rng::RngStream a(123, 7);
  rng::RngStream b(123, 7);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());

  rng::SplitMix64 c(rng::derive_seed(9, 1, 2));
  rng::SplitMix64 d(rng::derive_seed(9, 1, 2));
  for (int i = 0; i < 1000; ++i) REQUIRE(c.next_u64() == d.next_u64());
}

TEST_CASE("distinct stream ids decorrelate") {
  rng::RngStream a(123, 0);
  rng::RngStream b(123, 1);
  std::size_t equal = 0;
  for (int i = 0; i < 1000; ++i) equal += a.next_u64() == b.next_u64();
  REQUIRE(equal == 0);
}

TEST_CASE("uniform01 moments") {
  rng::RngStream g(2024, 0);
  const std::size_t n = 200000;
  const auto m = sample_moments(n, [&] { return rng::uniform01(g); });
  // 3-sigma bands around 1/2 and 1/12.
  REQUIRE(std::abs(m.mean - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n));
  REQUIRE(std::abs(m.var - 1.0 / 12.0) < 0.05 / 12.0);
}

TEST_CASE("ziggurat normal matches the standard normal") {
  rng::RngStream g(99, 3);
  const std::size_t n = 400000;
  std::vector<double> draws(n);
  for (auto& v : draws) v = rng::normal(g);

  double sum = 0.0, sum_sq = 0.0;
  for (double v : draws) {
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  REQUIRE(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
  REQUIRE(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / n));

  // Empirical CDF against Phi at several points, including the ziggurat
  // wedge and tail regions.
  for (double z : {-3.0, -1.96, -1.0, -0.25, 0.5, 1.0, 2.0, 3.7}) {
    const double p = 0.5 * std::erfc(-z / std::sqrt(2.0));
    std::size_t below = 0;
    for (double v : draws) below += v < z;
    const double fraction = static_cast<double>(below) / n;
    const double se = std::sqrt(p * (1.0 - p) / n);
    INFO("z=" << z);
    REQUIRE(std::abs(fraction - p) < 4.0 * se + 1e-6);
  }
}

TEST_CASE("gamma draw moments across shapes") {
  rng::RngStream g(7, 11);
  const std::size_t n = 200000;
  for (double shape : {0.4, 1.0, 2.5, 17.0, 600.0}) {
    const auto m = sample_moments(n, [&] { return rng::gamma_draw(g, shape); });
    const double se_mean = std::sqrt(shape / n);
    INFO("shape=" << shape);
    REQUIRE(std::abs(m.mean - shape) < 4.0 * se_mean);
    REQUIRE(std::abs(m.var - shape) / shape < 0.08);
  }
}

TEST_CASE("beta draw moments and support") {
  rng::RngStream g(5, 2);
  const std::size_t n = 200000;
  const double a = 2.0, b = 1.0;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = rng::beta_draw(g, a, b);
    REQUIRE(v >= 0.0);
    REQUIRE(v <= 1.0);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  const double true_mean = a / (a + b);
  const double true_var = a * b / ((a + b) * (a + b) * (a + b + 1.0));  // 2/36
  REQUIRE(std::abs(mean - true_mean) < 3.0 * std::sqrt(true_var / n));
  REQUIRE(std::abs(var - true_var) / true_var < 0.08);
}

TEST_CASE("uniform_index stays in range and is roughly uniform") {
  rng::RngStream g(1, 1);
  std::vector<std::size_t> counts(5, 0);
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) ++counts[rng::uniform_index(g, 5)];
  for (auto c : counts) {
    REQUIRE(std::abs(static_cast<double>(c) / n - 0.2) < 3.0 * std::sqrt(0.2 * 0.8 / n));
  }
}

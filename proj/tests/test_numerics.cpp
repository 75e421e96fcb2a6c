#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bandit/numerics.hpp"
#include "bandit/rng.hpp"

using namespace bandit;
using namespace bandit::numerics;

TEST_CASE("standard normal cdf pins") {
  REQUIRE(std_normal_cdf(0.0) == 0.5);
  // High-precision reference: Phi(1.96) = 0.97500210485177956586.
  REQUIRE(std::abs(std_normal_cdf(1.96) - 0.9750021) < 1e-7);
  REQUIRE(std::abs(std_normal_cdf(1.96) - 0.97500210485177957) < 1e-12);
  REQUIRE(std_normal_cdf(40.0) == 1.0);
  REQUIRE(std_normal_cdf(-40.0) == 0.0);
}

TEST_CASE("standard normal symmetry and monotonicity") {
  rng::RngStream g(31, 0);
  double prev = -1.0;
  for (int i = 0; i < 200; ++i) {
    const double z = (rng::uniform01(g) - 0.5) * 16.0;
    REQUIRE(std::abs(std_normal_cdf(-z) - (1.0 - std_normal_cdf(z))) < 1e-14);
  }
  for (double z = -8.0; z <= 8.0; z += 0.05) {
    const double p = std_normal_cdf(z);
    REQUIRE(p >= prev);
    prev = p;
  }
}

TEST_CASE("truncated normal cdf") {
  SECTION("symmetric truncation about the mean gives 1/2") {
    for (double s : {0.05, 0.3, 2.0}) {
      TruncatedGaussianSpec spec{0.5, s, 0.0, 1.0};
      REQUIRE(std::abs(truncated_normal_cdf(0.5, spec) - 0.5) < 1e-14);
    }
  }
  SECTION("boundaries clamp to 0 and 1") {
    TruncatedGaussianSpec spec{0.3, 0.2, 0.0, 1.0};
    REQUIRE(truncated_normal_cdf(0.0, spec) == 0.0);
    REQUIRE(truncated_normal_cdf(-3.0, spec) == 0.0);
    REQUIRE(truncated_normal_cdf(1.0, spec) == 1.0);
    REQUIRE(truncated_normal_cdf(7.0, spec) == 1.0);
  }
  SECTION("deep tail pin against the high-precision oracle") {
    // mean 0.2, std 0.1 on [0,1] at x=0.8:
    // F = 0.99999999899044547849, 1-F = 1.0095545215149882e-9.
    TruncatedGaussianSpec spec{0.2, 0.1, 0.0, 1.0};
    const double f = truncated_normal_cdf(0.8, spec);
    REQUIRE(std::abs((1.0 - f) - 1.0095545215149882e-9) < 1e-10);
    const double sf = truncated_normal_sf(0.8, spec);
    REQUIRE(std::abs(sf - 1.0095545215149882e-9) < 1e-19);
  }
  SECTION("sf complements cdf") {
    TruncatedGaussianSpec spec{0.4, 0.25, 0.0, 1.0};
    for (double x : {0.05, 0.3, 0.5, 0.77, 0.96}) {
      REQUIRE(std::abs(truncated_normal_sf(x, spec) + truncated_normal_cdf(x, spec) - 1.0) < 1e-13);
    }
  }
  SECTION("std = 0 rejected; caller owns the point-mass convention") {
    TruncatedGaussianSpec spec{0.5, 0.0, 0.0, 1.0};
    REQUIRE_THROWS_AS(truncated_normal_cdf(0.5, spec), std::invalid_argument);
  }
  SECTION("invalid range rejected") {
    TruncatedGaussianSpec spec{0.5, 1.0, 1.0, 0.0};
    REQUIRE_THROWS_AS(truncated_normal_cdf(0.5, spec), std::invalid_argument);
  }
}

TEST_CASE("regularized incomplete beta anchors") {
  // References computed with 40-digit arithmetic.
  REQUIRE(std::abs(reg_inc_beta(2, 3, 0.3) - 0.3483) < 1e-13);
  REQUIRE(std::abs(reg_inc_beta(0.5, 0.5, 0.7) - 0.630989880434454617) < 1e-13);
  REQUIRE(std::abs(reg_inc_beta(5, 1, 0.2) - 0.00032) < 1e-15);
  REQUIRE(std::abs(reg_inc_beta(3, 2, 0.9) - 0.9477) < 1e-13);
  REQUIRE(std::abs(reg_inc_beta(800, 700, 0.55) - 0.902305395646815156) < 1e-10);
  REQUIRE(std::abs(reg_inc_beta(1500, 2, 0.999) - 0.557406909257256014) < 1e-10);
  // lgamma cancellation at huge shapes costs a few digits; still far inside
  // the 1e-8 CDF-space contract.
  REQUIRE(std::abs(reg_inc_beta(0.5, 500000, 1.64e-6) - 0.799674603873900859) < 5e-9);
}

TEST_CASE("beta quantile") {
  SECTION("uniform median") { REQUIRE(std::abs(beta_quantile(0.5, 1, 1) - 0.5) < 1e-12); }
  SECTION("Beta(2,1) median is sqrt(1/2)") {
    REQUIRE(std::abs(beta_quantile(0.5, 2, 1) - 0.70710678118654752) < 1e-6);
  }
  SECTION("reflection identity") {
    rng::RngStream g(17, 0);
    for (int i = 0; i < 50; ++i) {
      const double a = 0.5 + 10.0 * rng::uniform01(g);
      const double b = 0.5 + 10.0 * rng::uniform01(g);
      const double q = 0.01 + 0.98 * rng::uniform01(g);
      const double x = beta_quantile(q, a, b);
      const double y = beta_quantile(1.0 - q, b, a);
      REQUIRE(std::abs(x + y - 1.0) < 1e-7);
    }
  }
  SECTION("round trip within 1e-8 in CDF space, including large shapes") {
    rng::RngStream g(18, 0);
    for (int i = 0; i < 200; ++i) {
      const double a = std::exp(rng::uniform01(g) * std::log(2000.0));  // 1..2000
      const double b = std::exp(rng::uniform01(g) * std::log(2000.0));
      const double q = 0.001 + 0.998 * rng::uniform01(g);
      const double x = beta_quantile(q, a, b);
      REQUIRE(std::abs(beta_cdf(x, a, b) - q) < 1e-8);
    }
  }
  SECTION("domain errors") {
    REQUIRE_THROWS_AS(beta_quantile(0.0, 1, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(beta_quantile(1.0, 1, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(beta_quantile(0.5, 0.0, 1), std::invalid_argument);
  }
}

TEST_CASE("student t cdf anchors") {
  REQUIRE(std::abs(student_t_cdf(1.5, 7) - 0.911350756505014983) < 1e-12);
  REQUIRE(std::abs(student_t_cdf(-2.3, 3) - 0.0524941803222350064) < 1e-12);
  REQUIRE(student_t_cdf(0.0, 5) == 0.5);
}

TEST_CASE("student t quantile") {
  SECTION("median is the location") {
    REQUIRE(student_t_quantile(0.5, 3.0, 1.75, 2.0) == 1.75);
  }
  SECTION("dof=1 is Cauchy: Q(0.75) = tan(pi/4) = 1") {
    REQUIRE(std::abs(student_t_quantile(0.75, 1.0) - 1.0) < 1e-8);
  }
  SECTION("large dof approaches the normal quantile") {
    // Phi^{-1}(0.9) = 1.28155156554460047.
    REQUIRE(std::abs(student_t_quantile(0.9, 1e6) - 1.28155156554460047) < 1e-3);
  }
  SECTION("location-scale transform") {
    const double base = student_t_quantile(0.8, 9.0);
    REQUIRE(std::abs(student_t_quantile(0.8, 9.0, 3.0, 0.5) - (3.0 + 0.5 * base)) < 1e-12);
  }
  SECTION("round trip within 1e-8 in CDF space") {
    rng::RngStream g(19, 0);
    for (int i = 0; i < 200; ++i) {
      const double dof = std::exp(rng::uniform01(g) * std::log(3000.0));
      const double q = 0.001 + 0.998 * rng::uniform01(g);
      const double t = student_t_quantile(q, dof);
      REQUIRE(std::abs(student_t_cdf(t, dof) - q) < 1e-8);
    }
  }
  SECTION("domain errors") {
    REQUIRE_THROWS_AS(student_t_quantile(0.5, -1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(student_t_quantile(0.5, 1.0, 0.0, -2.0), std::invalid_argument);
  }
}

TEST_CASE("quantile functions are nondecreasing in q") {
  double prev_b = 0.0, prev_t = -1e300;
  for (double q = 0.01; q < 1.0; q += 0.01) {
    const double xb = beta_quantile(q, 3.0, 5.0);
    const double xt = student_t_quantile(q, 4.0);
    REQUIRE(xb >= prev_b);
    REQUIRE(xt >= prev_t);
    prev_b = xb;
    prev_t = xt;
  }
}

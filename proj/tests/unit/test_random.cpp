#include <cmath>
#include <set>

#include "doctest.h"
#include "hourglass/errors.hpp"
#include "hourglass/random.hpp"

using namespace hourglass;

TEST_CASE("distribution factories validate parameters") {
  CHECK_THROWS_AS(DistributionSpec::exponential(0.0), ConfigError);
  CHECK_THROWS_AS(DistributionSpec::exponential(-1.0), ConfigError);
  CHECK_THROWS_AS(DistributionSpec::gamma(1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(DistributionSpec::deterministic(NAN), ConfigError);

  const auto g = DistributionSpec::gamma(2.0, 3.0);
  CHECK(g.kind() == DistributionKind::Gamma);
  CHECK(g.mean() == 2.0);
  CHECK(g.shape() == 3.0);
  CHECK(DistributionSpec::exponential(1.0).shape() == 1.0);
  CHECK(std::isinf(DistributionSpec::deterministic(1.0).shape()));
}

TEST_CASE("distribution kinds round-trip through their names") {
  for (auto kind : {DistributionKind::Exponential, DistributionKind::Gamma,
                    DistributionKind::Deterministic}) {
    CHECK(distribution_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(distribution_kind_from_string("uniform"), ConfigError);
}

TEST_CASE("scaling keeps the family and multiplies the mean") {
  const auto g = DistributionSpec::gamma(2.0, 3.0).scaled(0.5);
  CHECK(g.kind() == DistributionKind::Gamma);
  CHECK(g.mean() == 1.0);
  CHECK(g.shape() == 3.0);
  CHECK_THROWS_AS(g.scaled(0.0), ConfigError);
}

TEST_CASE("unit-mean requirement") {
  CHECK_NOTHROW(require_unit_mean(DistributionSpec::exponential(1.0), "Y"));
  CHECK_THROWS_WITH_AS(require_unit_mean(DistributionSpec::exponential(2.0), "eta_1"),
                       doctest::Contains("eta_1"), ConfigError);
}

TEST_CASE("exponential tail envelope") {
  const auto env = tail_envelope(DistributionSpec::exponential(2.0));
  REQUIRE(env.has_value());
  CHECK(env->a == doctest::Approx(0.5));
  CHECK(env->alpha == doctest::Approx(0.5));
  CHECK_FALSE(tail_envelope(DistributionSpec::deterministic(1.0)).has_value());
  CHECK_FALSE(tail_envelope(DistributionSpec::gamma(1.0, 0.5)).has_value());

  // The envelope dominates the gamma density on a grid.
  const auto gamma = DistributionSpec::gamma(1.0, 3.0);
  const auto genv = tail_envelope(gamma);
  REQUIRE(genv.has_value());
  const double k = 3.0, s = 1.0 / 3.0;
  for (double u = 0.01; u < 40.0; u += 0.01) {
    const double density = std::pow(u, k - 1) * std::exp(-u / s) / (std::tgamma(k) * std::pow(s, k));
    CHECK(density <= genv->a * std::exp(-genv->alpha * u) * (1 + 1e-12));
  }
}

TEST_CASE("samples are positive and have the requested mean") {
  Rng rng(42);
  for (const auto& dist : {DistributionSpec::exponential(1.0), DistributionSpec::gamma(2.0, 4.0),
                           DistributionSpec::gamma(1.0, 0.3)}) {
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = sample(dist, rng);
      REQUIRE(v > 0.0);
      sum += v;
    }
    const double sd = dist.mean() / std::sqrt(dist.shape());
    CHECK(std::abs(sum / n - dist.mean()) < 5.0 * sd / std::sqrt(n));
  }
  Rng rng2(1);
  CHECK(sample(DistributionSpec::deterministic(0.7), rng2) == 0.7);
  CHECK(mean_of(DistributionSpec::gamma(3.0, 2.0)) == 3.0);
}

TEST_CASE("generators are reproducible and streams are distinct") {
  Rng a(7), b(7), c(7, 1);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
  CHECK(a == b);
  CHECK(a.position() == 100);
  Rng d(7);
  int same = 0;
  for (int i = 0; i < 100; ++i) same += d() == c() ? 1 : 0;
  CHECK(same == 0);

  std::set<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 1000; ++s) seeds.insert(mix_seed(1, s));
  CHECK(seeds.size() == 1000);

  Rng u(3);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform_open();
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
  }
}

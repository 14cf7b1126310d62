#include <random>

#include "doctest.h"
#include "hourglass/errors.hpp"
#include "hourglass/network.hpp"
#include "hourglass/topology.hpp"

using namespace hourglass;

namespace {

int parity(const TorusGeometry& g, Site s) {
  int sum = 0;
  for (int c : torus_coordinates(g, s)) sum += c;
  return sum % 2;
}

void check_torus_invariants(const Topology& t) {
  const TorusGeometry& g = *t.torus();
  const std::size_t n = t.size();
  const SiteSet lambda0 = sublattice_lambda0(t);
  CHECK(lambda0.size() * 2 == n);
  for (Site i = 0; i < n; ++i) {
    CHECK(t.inhibitory(i).size() == static_cast<std::size_t>(2 * g.nu));
    CHECK(t.excitatory(i).size() == static_cast<std::size_t>(g.K_E));
    CHECK_FALSE(contains(t.neighbors(i), i));
    for (Site j : t.inhibitory(i)) {
      CHECK(contains(t.inhibitory(j), i));
      CHECK_FALSE(contains(t.excitatory(i), j));
      CHECK(torus_distance(t, i, j) == 1);
      CHECK(parity(g, i) != parity(g, j));
    }
    for (Site j : t.excitatory(i)) {
      CHECK(contains(t.excitatory(j), i));
      CHECK(torus_distance(t, i, j) >= 2);
      CHECK(parity(g, i) == parity(g, j));
    }
    CHECK(contains(lambda0, i) == (parity(g, i) == 0));
  }
}

}  // namespace

TEST_CASE("one-dimensional torus neighborhoods") {
  const Topology t = build_torus(1, 5, 2);
  REQUIRE(t.size() == 10);
  CHECK(t.inhibitory(0) == SiteSet{1, 9});
  CHECK(t.excitatory(0) == SiteSet{2, 8});
  CHECK(t.excitatory(3) == SiteSet{1, 5});
  CHECK(sublattice_lambda0(t) == SiteSet{0, 2, 4, 6, 8});
  CHECK(torus_distance(t, 0, 9) == 1);
  CHECK(torus_distance(t, 0, 5) == 5);
}

TEST_CASE("torus coordinates round-trip") {
  const Topology t = build_torus(3, 2, 1);
  const TorusGeometry& g = *t.torus();
  for (Site s = 0; s < t.size(); ++s) CHECK(torus_site(g, torus_coordinates(g, s)) == s);
  CHECK(torus_coordinates(g, 1) == LatticeVector{1, 0, 0});
  CHECK(torus_coordinates(g, 4) == LatticeVector{0, 1, 0});
}

TEST_CASE("default excitatory offsets start along the axes") {
  CHECK(default_excitatory_offsets(1, 5, 2) == std::vector<LatticeVector>{{2}});
  CHECK(default_excitatory_offsets(2, 3, 2) == std::vector<LatticeVector>{{2, 0}});
  CHECK(default_excitatory_offsets(1, 4, 1) == std::vector<LatticeVector>{{4}});
}

TEST_CASE("explicit offsets") {
  const Topology t = build_torus(2, 4, 2, {{1, 1}});
  CHECK(t.excitatory(0).size() == 2);
  check_torus_invariants(t);
}

TEST_CASE("torus construction errors") {
  CHECK_THROWS_AS(build_torus(0, 5, 2), ConfigError);
  CHECK_THROWS_AS(build_torus(4, 5, 2), ConfigError);
  CHECK_THROWS_AS(build_torus(1, 1, 1), ConfigError);
  CHECK_THROWS_AS(build_torus(1, 5, 0), ConfigError);
  CHECK_THROWS_AS(build_torus(1, 5, 5), ConfigError);
  CHECK_THROWS_AS(build_torus(1, 5, 2, {{1}}), ConfigError);     // odd parity
  CHECK_THROWS_AS(build_torus(1, 5, 2, {{10}}), ConfigError);    // zero mod 2N
  CHECK_THROWS_AS(build_torus(1, 5, 2, {{2, 0}}), ConfigError);  // wrong dimension
  CHECK_THROWS_AS(build_torus(1, 5, 4, {{2}}), ConfigError);     // too few neighbors
  CHECK_THROWS_AS(build_torus(1, 5, 1), ConfigError);            // odd K_E impossible here
}

TEST_CASE("neighborhood symmetry over random tori") {
  std::mt19937 gen(2024);
  int built = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int nu = 1 + static_cast<int>(gen() % 3);
    const int N = 2 + static_cast<int>(gen() % (nu == 3 ? 2 : 5));
    const int K_E = 1 + static_cast<int>(gen() % static_cast<unsigned>(N - 1));
    try {
      const Topology t = build_torus(nu, N, K_E);
      check_torus_invariants(t);
      ++built;
    } catch (const ConfigError&) {
      // Some (N, K_E) combinations have no even-parity offset set.
    }
  }
  CHECK(built > 30);
}

TEST_CASE("block network structure") {
  const Topology t = build_block_network(2, 2, {{0, 1}, {2, 3}});
  const BlockStructure& b = *t.blocks();
  REQUIRE(t.size() == 8);
  CHECK(b.blocks[0] == SiteSet{0, 1});
  CHECK(b.blocks[3] == SiteSet{6, 7});
  CHECK(b.partner(0) == 1);
  CHECK(b.partner(3) == 2);
  for (Site i = 0; i < 8; ++i) {
    CHECK(t.inhibitory(i).size() == 7);
    CHECK(t.excitatory(i).empty());
  }

  const Topology u = build_block_network(2, 2, {{0, 2}, {1, 3}});
  CHECK(u.blocks()->partner(0) == 2);

  BlockOptions options;
  options.membership = {0, 1, 2, 3, 0, 1, 2, 3};
  const Topology v = build_block_network(2, 2, {{0, 1}, {2, 3}}, options);
  CHECK(v.blocks()->blocks[0] == SiteSet{0, 4});
}

TEST_CASE("block network errors") {
  CHECK_THROWS_AS(build_block_network(2, 2, {{0, 1}, {1, 3}}), ConfigError);
  CHECK_THROWS_AS(build_block_network(2, 2, {{0, 1}}), ConfigError);
  CHECK_THROWS_AS(build_block_network(1, 2, {{0, 0}}), ConfigError);
  CHECK_THROWS_AS(build_block_network(1, 2, {{0, 2}}), ConfigError);
  CHECK_THROWS_AS(build_block_network(1, 1, {{0, 1}}), ConfigError);
  BlockOptions allow;
  allow.allow_single_site_blocks = true;
  CHECK(build_block_network(1, 1, {{0, 1}}, allow).size() == 2);
  BlockOptions bad;
  bad.membership = {0, 0, 0, 1};
  CHECK_THROWS_AS(build_block_network(1, 2, {{0, 1}}, bad), ConfigError);
}

TEST_CASE("torus connections carry the weights") {
  const Topology t = build_torus(1, 5, 2);
  const auto eta = DistributionSpec::exponential(1.0);
  const ConnectionSpec c = torus_connections(t, 0.3, 0.1, eta, eta);
  CHECK(c.expected(0, 1) == doctest::Approx(-0.3));
  CHECK(c.expected(0, 2) == doctest::Approx(0.1));
  CHECK(c.expected(0, 5) == 0.0);
  CHECK_FALSE(c.all_inhibitory());
  const ConnectionSpec inh = torus_connections(t, 0.3, 0.0, eta, eta);
  CHECK(inh.all_inhibitory());
  CHECK(inh.find(0, 2) == nullptr);
}

TEST_CASE("block connections and restriction") {
  const Topology t = build_block_network(2, 2, {{0, 1}, {2, 3}});
  const ConnectionSpec c = block_connections(t, 0.5, 2.0, MagnitudeKind::Exponential);
  CHECK(c.expected(0, 1) == -0.5);  // same block
  CHECK(c.expected(0, 2) == -2.0);  // partner block
  CHECK(c.expected(0, 4) == -0.5);
  CHECK(c.find(0, 2)->magnitude.kind() == DistributionKind::Exponential);

  const Network net = make_network(t, c, DistributionSpec::exponential(1.0));
  const Network r = restrict(net, {2, 3, 6, 7});
  CHECK(r.active_sites() == SiteSet{2, 3, 6, 7});
  CHECK(restrict(r, {2, 5}).active_sites() == SiteSet{2});
  CHECK_THROWS_AS(restrict(net, {}), ConfigError);
  CHECK_THROWS_AS(restrict(net, {8}), ConfigError);
}

TEST_CASE("links must stay inside the neighborhood") {
  const Topology t = build_torus(1, 5, 2);
  ConnectionSpec c(10);
  c.set(0, 5, Sign::Inhibitory, DistributionSpec::deterministic(1.0));
  CHECK_THROWS_AS(make_network(t, c, DistributionSpec::exponential(1.0)), ConfigError);
}

TEST_CASE("explicit inhibitory matrices") {
  const ConnectionSpec c = inhibitory_connections({{0, 0.5, 0}, {0.25, 0, 0}, {0, 0, 0}},
                                                  MagnitudeKind::Deterministic);
  CHECK(c.expected(0, 1) == -0.5);
  CHECK(c.expected(1, 0) == -0.25);
  CHECK(c.find(0, 2) == nullptr);
  CHECK(magnitude_kind_from_string("exponential") == MagnitudeKind::Exponential);
  CHECK_THROWS_AS(magnitude_kind_from_string("gamma"), ConfigError);
}

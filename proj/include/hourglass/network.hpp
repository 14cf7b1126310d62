#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hourglass/random.hpp"
#include "hourglass/site_set.hpp"
#include "hourglass/topology.hpp"

namespace hourglass {

enum class Sign : unsigned char { Inhibitory, Excitatory };

/// Directed connection i -> target. The realized impulse is a fresh draw of
/// `magnitude`; its sign is fixed per link.
struct Link {
  Site target;
  Sign sign;
  DistributionSpec magnitude;
};

/// Outgoing links per sender, each list sorted by target.
class ConnectionSpec {
 public:
  explicit ConnectionSpec(std::size_t sites = 0) : outgoing_(sites) {}

  std::size_t size() const { return outgoing_.size(); }

  /// Adds or replaces the link from -> to.
  void set(Site from, Site to, Sign sign, const DistributionSpec& magnitude);

  std::span<const Link> outgoing(Site from) const { return outgoing_[from]; }
  const Link* find(Site from, Site to) const;

  /// Signed expectation E theta_{from,to}: negative for inhibitory links,
  /// zero when there is no link.
  double expected(Site from, Site to) const;

  bool all_inhibitory() const;

 private:
  std::vector<std::vector<Link>> outgoing_;
};

/// Everything the engine needs: geometry, connections, per-site
/// self-characteristic Y_i and the set of sites that take part in the
/// dynamics (the rest are deleted, i.e. frozen at +infinity).
struct Network {
  Topology topology;
  ConnectionSpec connections;
  std::vector<DistributionSpec> self;
  std::vector<char> active;

  std::size_t size() const { return self.size(); }
  SiteSet active_sites() const;
};

/// Torus connections theta_ij = -w_I eta_1 on D_I and +w_E eta_2 on D_E.
/// A zero weight produces no links of that kind (theta == 0).
ConnectionSpec torus_connections(const Topology& topology, double w_I, double w_E,
                                 const DistributionSpec& eta1, const DistributionSpec& eta2);

enum class MagnitudeKind { Deterministic, Exponential };

MagnitudeKind magnitude_kind_from_string(std::string_view name);
std::string_view to_string(MagnitudeKind kind);

/// Block connections: E|theta_xy| = c between paired blocks, b otherwise.
ConnectionSpec block_connections(const Topology& topology, double b, double c, MagnitudeKind kind);

/// All-inhibitory connections with E|theta_xy| = magnitudes[x][y] (x != y).
/// Zero entries give no link.
ConnectionSpec inhibitory_connections(const std::vector<std::vector<double>>& magnitudes,
                                      MagnitudeKind kind);

Network make_network(Topology topology, ConnectionSpec connections,
                     std::vector<DistributionSpec> self);
Network make_network(Topology topology, ConnectionSpec connections, const DistributionSpec& self);

/// The restriction X^W: sites outside W are deleted. W must be non-empty and
/// within range; restricting an already restricted network intersects.
Network restrict(const Network& network, const SiteSet& W);

}  // namespace hourglass

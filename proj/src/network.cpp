#include "hourglass/network.hpp"

#include <algorithm>
#include <string>

#include "hourglass/errors.hpp"

namespace hourglass {

void ConnectionSpec::set(Site from, Site to, Sign sign, const DistributionSpec& magnitude) {
  if (from >= outgoing_.size() || to >= outgoing_.size()) {
    throw ConfigError("connection endpoint out of range");
  }
  if (from == to) throw ConfigError("self-connections are not allowed");
  auto& links = outgoing_[from];
  auto it = std::lower_bound(links.begin(), links.end(), to,
                             [](const Link& l, Site t) { return l.target < t; });
  if (it != links.end() && it->target == to) {
    *it = Link{to, sign, magnitude};
  } else {
    links.insert(it, Link{to, sign, magnitude});
  }
}

const Link* ConnectionSpec::find(Site from, Site to) const {
  const auto& links = outgoing_[from];
  auto it = std::lower_bound(links.begin(), links.end(), to,
                             [](const Link& l, Site t) { return l.target < t; });
  return (it != links.end() && it->target == to) ? &*it : nullptr;
}

double ConnectionSpec::expected(Site from, Site to) const {
  const Link* link = find(from, to);
  if (link == nullptr) return 0.0;
  const double m = mean_of(link->magnitude);
  return link->sign == Sign::Inhibitory ? -m : m;
}

bool ConnectionSpec::all_inhibitory() const {
  for (const auto& links : outgoing_) {
    for (const auto& l : links) {
      if (l.sign != Sign::Inhibitory) return false;
    }
  }
  return true;
}

SiteSet Network::active_sites() const {
  SiteSet out;
  for (Site s = 0; s < active.size(); ++s) {
    if (active[s]) out.push_back(s);
  }
  return out;
}

ConnectionSpec torus_connections(const Topology& topology, double w_I, double w_E,
                                 const DistributionSpec& eta1, const DistributionSpec& eta2) {
  if (topology.torus() == nullptr) throw ConfigError("torus connections need a torus topology");
  if (!(w_I >= 0.0) || !(w_E >= 0.0)) throw ConfigError("w_I and w_E must be >= 0");
  ConnectionSpec spec(topology.size());
  for (Site i = 0; i < topology.size(); ++i) {
    if (w_I > 0.0) {
      for (Site j : topology.inhibitory(i)) spec.set(i, j, Sign::Inhibitory, eta1.scaled(w_I));
    }
    if (w_E > 0.0) {
      for (Site j : topology.excitatory(i)) spec.set(i, j, Sign::Excitatory, eta2.scaled(w_E));
    }
  }
  return spec;
}

MagnitudeKind magnitude_kind_from_string(std::string_view name) {
  if (name == "deterministic") return MagnitudeKind::Deterministic;
  if (name == "exponential") return MagnitudeKind::Exponential;
  throw ConfigError("magnitude kind must be 'deterministic' or 'exponential', got '" +
                    std::string(name) + "'");
}

std::string_view to_string(MagnitudeKind kind) {
  return kind == MagnitudeKind::Deterministic ? "deterministic" : "exponential";
}

namespace {

DistributionSpec magnitude_of(double mean, MagnitudeKind kind) {
  return kind == MagnitudeKind::Deterministic ? DistributionSpec::deterministic(mean)
                                              : DistributionSpec::exponential(mean);
}

}  // namespace

ConnectionSpec block_connections(const Topology& topology, double b, double c, MagnitudeKind kind) {
  const BlockStructure* blocks = topology.blocks();
  if (blocks == nullptr) throw ConfigError("block connections need a block topology");
  if (!(b > 0.0) || !(c > 0.0)) throw ConfigError("block constants b and c must be positive");
  ConnectionSpec spec(topology.size());
  for (Site x = 0; x < topology.size(); ++x) {
    const int bx = blocks->block_of[x];
    const int partner = blocks->partner(bx);
    for (Site y : topology.inhibitory(x)) {
      const double m = blocks->block_of[y] == partner ? c : b;
      spec.set(x, y, Sign::Inhibitory, magnitude_of(m, kind));
    }
  }
  return spec;
}

ConnectionSpec inhibitory_connections(const std::vector<std::vector<double>>& magnitudes,
                                      MagnitudeKind kind) {
  const std::size_t n = magnitudes.size();
  ConnectionSpec spec(n);
  for (Site x = 0; x < n; ++x) {
    if (magnitudes[x].size() != n) throw ConfigError("connection matrix must be square");
    for (Site y = 0; y < n; ++y) {
      if (x == y) continue;
      const double m = magnitudes[x][y];
      if (m < 0.0) throw ConfigError("connection magnitudes must be >= 0");
      if (m > 0.0) spec.set(x, y, Sign::Inhibitory, magnitude_of(m, kind));
    }
  }
  return spec;
}

Network make_network(Topology topology, ConnectionSpec connections,
                     std::vector<DistributionSpec> self) {
  const std::size_t n = topology.size();
  if (connections.size() != n || self.size() != n) {
    throw ConfigError("topology, connections and self-characteristics disagree on site count");
  }
  for (Site i = 0; i < n; ++i) {
    const SiteSet nbrs = topology.neighbors(i);
    for (const Link& l : connections.outgoing(i)) {
      if (!contains(nbrs, l.target)) {
        throw ConfigError("connection " + std::to_string(i) + "->" + std::to_string(l.target) +
                          " is not within the neighborhood D(i)");
      }
    }
  }
  return Network{std::move(topology), std::move(connections), std::move(self),
                 std::vector<char>(n, 1)};
}

Network make_network(Topology topology, ConnectionSpec connections, const DistributionSpec& self) {
  const std::size_t n = topology.size();
  return make_network(std::move(topology), std::move(connections),
                      std::vector<DistributionSpec>(n, self));
}

Network restrict(const Network& network, const SiteSet& W) {
  if (W.empty()) throw ConfigError("restriction set W must be non-empty");
  Network out = network;
  std::vector<char> keep(network.size(), 0);
  for (Site s : W) {
    if (s >= network.size()) throw ConfigError("restriction refers to a site out of range");
    keep[s] = 1;
  }
  for (Site s = 0; s < network.size(); ++s) out.active[s] = out.active[s] && keep[s];
  return out;
}

}  // namespace hourglass

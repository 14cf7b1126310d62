#pragma once

// Shared fixtures for the unit tests, including a deliberately naive
// reference simulator used as an oracle for the event engine.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "hourglass/network.hpp"
#include "hourglass/topology.hpp"

namespace testing {

using hourglass::Sign;
using hourglass::Site;

/// Directed link (from, to, sign, magnitude).
using LinkSpec = std::tuple<Site, Site, Sign, double>;

/// Network on n sites with exactly the given links; neighborhoods are the
/// symmetric closure of the link list.
inline hourglass::Network custom_network(std::size_t n, const std::vector<LinkSpec>& links,
                                         const hourglass::DistributionSpec& self,
                                         bool deterministic_magnitudes = true) {
  std::vector<std::vector<Site>> inh(n), exc(n);
  for (const auto& [from, to, sign, m] : links) {
    auto& lists = sign == Sign::Inhibitory ? inh : exc;
    lists[from].push_back(to);
    lists[to].push_back(from);
  }
  std::vector<hourglass::SiteSet> I, E;
  for (std::size_t i = 0; i < n; ++i) {
    I.push_back(hourglass::make_site_set(inh[i]));
    E.push_back(hourglass::make_site_set(exc[i]));
  }
  hourglass::Topology topo(hourglass::TorusGeometry{}, I, E);
  hourglass::ConnectionSpec conn(n);
  for (const auto& [from, to, sign, m] : links) {
    conn.set(from, to, sign,
             deterministic_magnitudes ? hourglass::DistributionSpec::deterministic(m)
                                      : hourglass::DistributionSpec::exponential(m));
  }
  return hourglass::make_network(std::move(topo), std::move(conn), self);
}

struct OracleEvent {
  double time;
  Site primary;
  std::vector<Site> cascade;
};

/// Reference dynamics for deterministic Y and magnitudes: relative countdowns,
/// linear scans, no heap. theta[i][j] is the signed impulse i -> j (0: none).
inline std::vector<OracleEvent> oracle_run(std::vector<double> x, const std::vector<double>& y,
                                           const std::vector<std::vector<double>>& theta,
                                           std::size_t events) {
  const std::size_t n = x.size();
  std::vector<OracleEvent> out;
  double t = 0.0;
  while (out.size() < events) {
    std::size_t z = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (x[i] < x[z]) z = i;
    }
    const double dt = x[z];
    t += dt;
    for (auto& v : x) v -= dt;
    x[z] = y[z];
    OracleEvent ev{t, static_cast<Site>(z), {}};
    std::vector<bool> fired(n, false);
    fired[z] = true;
    for (std::size_t j = 0; j < n; ++j) {
      const double th = theta[z][j];
      if (j == z || th == 0.0) continue;
      if (th < 0.0) {
        x[j] += -th;
      } else if (x[j] > th) {
        x[j] -= th;
      } else {
        fired[j] = true;
        ev.cascade.push_back(static_cast<Site>(j));
        x[j] = y[j];
      }
    }
    for (Site c : ev.cascade) {
      for (std::size_t j = 0; j < n; ++j) {
        if (fired[j] || theta[c][j] >= 0.0) continue;
        x[j] += -theta[c][j];
      }
    }
    out.push_back(std::move(ev));
  }
  return out;
}

inline hourglass::SiteSet make_sorted(std::vector<Site> sites) {
  return hourglass::make_site_set(std::move(sites));
}

/// Fresh scratch directory under the system temp dir.
inline std::string scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("hourglass_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

inline double relative_error(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

}  // namespace testing

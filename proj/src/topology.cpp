#include "hourglass/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "hourglass/errors.hpp"

namespace hourglass {

namespace {

int wrap(int value, int side) {
  const int r = value % side;
  return r < 0 ? r + side : r;
}

Site shifted(const TorusGeometry& torus, const LatticeVector& base, const LatticeVector& delta,
             int sign) {
  LatticeVector c(base.size());
  for (std::size_t d = 0; d < base.size(); ++d) {
    c[d] = wrap(base[d] + sign * delta[d], torus.side());
  }
  return torus_site(torus, c);
}

int parity_sum(const LatticeVector& v) {
  int s = 0;
  for (int x : v) s += x;
  return s;
}

SiteSet excitatory_of(const TorusGeometry& torus, Site site,
                      const std::vector<LatticeVector>& offsets) {
  const LatticeVector base = torus_coordinates(torus, site);
  std::vector<Site> out;
  for (const auto& o : offsets) {
    out.push_back(shifted(torus, base, o, +1));
    out.push_back(shifted(torus, base, o, -1));
  }
  SiteSet set = make_site_set(std::move(out));
  set.erase(std::remove(set.begin(), set.end(), site), set.end());
  return set;
}

}  // namespace

int BlockStructure::partner(int block) const {
  for (const auto& pair : pairing) {
    if (pair[0] == block) return pair[1];
    if (pair[1] == block) return pair[0];
  }
  throw ConfigError("block " + std::to_string(block) + " is not paired");
}

Topology::Topology(Geometry geometry, std::vector<SiteSet> inhibitory,
                   std::vector<SiteSet> excitatory)
    : geometry_(std::move(geometry)),
      inhibitory_(std::move(inhibitory)),
      excitatory_(std::move(excitatory)) {}

SiteSet Topology::neighbors(Site i) const {
  SiteSet out;
  std::set_union(inhibitory_[i].begin(), inhibitory_[i].end(), excitatory_[i].begin(),
                 excitatory_[i].end(), std::back_inserter(out));
  return out;
}

LatticeVector torus_coordinates(const TorusGeometry& torus, Site site) {
  LatticeVector c(static_cast<std::size_t>(torus.nu));
  Site rest = site;
  for (int d = 0; d < torus.nu; ++d) {
    c[static_cast<std::size_t>(d)] = static_cast<int>(rest % static_cast<Site>(torus.side()));
    rest /= static_cast<Site>(torus.side());
  }
  return c;
}

Site torus_site(const TorusGeometry& torus, const LatticeVector& coords) {
  Site site = 0;
  for (int d = torus.nu - 1; d >= 0; --d) {
    site = site * static_cast<Site>(torus.side()) +
           static_cast<Site>(wrap(coords[static_cast<std::size_t>(d)], torus.side()));
  }
  return site;
}

std::vector<LatticeVector> default_excitatory_offsets(int nu, int N, int K_E) {
  const TorusGeometry probe{nu, N, K_E, {}};
  // Candidates: one representative per +/- pair (first nonzero coordinate
  // positive), even parity, coordinates in [-N, N].
  std::vector<LatticeVector> candidates;
  LatticeVector v(static_cast<std::size_t>(nu), -N);
  while (true) {
    const auto first = std::find_if(v.begin(), v.end(), [](int x) { return x != 0; });
    if (first != v.end() && *first > 0 && parity_sum(v) % 2 == 0) candidates.push_back(v);
    std::size_t d = 0;
    while (d < v.size() && v[d] == N) v[d++] = -N;
    if (d == v.size()) break;
    ++v[d];
  }
  auto norm = [](const LatticeVector& x) {
    int s = 0;
    for (int c : x) s += std::abs(c);
    return s;
  };
  auto is_axis = [](const LatticeVector& x) {
    return std::count(x.begin(), x.end(), 0) + 1 == static_cast<long>(x.size());
  };
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](const LatticeVector& a, const LatticeVector& b) {
                     if (norm(a) != norm(b)) return norm(a) < norm(b);
                     if (is_axis(a) != is_axis(b)) return is_axis(a);
                     if (is_axis(a)) {
                       // Axis vectors by axis index: 2e_1 before 2e_2.
                       const auto ia = std::find_if(a.begin(), a.end(), [](int c) { return c; }) - a.begin();
                       const auto ib = std::find_if(b.begin(), b.end(), [](int c) { return c; }) - b.begin();
                       return ia < ib;
                     }
                     return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
                   });

  std::vector<LatticeVector> chosen;
  SiteSet reached;
  for (const auto& c : candidates) {
    if (static_cast<int>(reached.size()) == K_E) break;
    chosen.push_back(c);
    SiteSet next = excitatory_of(probe, 0, chosen);
    if (static_cast<int>(next.size()) > K_E || next.size() == reached.size()) {
      chosen.pop_back();
      continue;
    }
    reached = std::move(next);
  }
  if (static_cast<int>(reached.size()) != K_E) {
    throw ConfigError("cannot find even-parity offsets giving exactly K_E=" +
                      std::to_string(K_E) + " excitatory neighbors on this torus");
  }
  return chosen;
}

Topology build_torus(int nu, int N, int K_E, std::vector<LatticeVector> offsets) {
  if (nu < 1 || nu > 3) throw ConfigError("torus dimension nu must be 1, 2 or 3");
  if (N <= 1) throw ConfigError("torus half-width N must be > 1");
  if (K_E <= 0 || K_E >= N) {
    throw ConfigError("K_E must satisfy 0 < K_E < N (K_E=" + std::to_string(K_E) +
                      ", N=" + std::to_string(N) + ")");
  }
  TorusGeometry torus{nu, N, K_E, {}};
  if (offsets.empty()) offsets = default_excitatory_offsets(nu, N, K_E);
  for (const auto& o : offsets) {
    if (static_cast<int>(o.size()) != nu) {
      throw ConfigError("excitatory offset has " + std::to_string(o.size()) +
                        " coordinates, expected " + std::to_string(nu));
    }
    if (std::all_of(o.begin(), o.end(), [&](int c) { return wrap(c, torus.side()) == 0; })) {
      throw ConfigError("excitatory offsets must be nonzero on the torus");
    }
    if (parity_sum(o) % 2 != 0) {
      throw ConfigError(
          "excitatory offsets must have even coordinate sum so that excitatory links stay "
          "inside one sublattice");
    }
  }
  torus.offsets = offsets;

  const auto n = static_cast<std::size_t>(std::lround(std::pow(torus.side(), nu)));
  std::vector<SiteSet> inhibitory(n), excitatory(n);
  for (Site s = 0; s < n; ++s) {
    const LatticeVector base = torus_coordinates(torus, s);
    std::vector<Site> near;
    for (int d = 0; d < nu; ++d) {
      LatticeVector e(static_cast<std::size_t>(nu), 0);
      e[static_cast<std::size_t>(d)] = 1;
      near.push_back(shifted(torus, base, e, +1));
      near.push_back(shifted(torus, base, e, -1));
    }
    inhibitory[s] = make_site_set(std::move(near));
    excitatory[s] = excitatory_of(torus, s, offsets);
    if (static_cast<int>(excitatory[s].size()) != K_E) {
      throw ConfigError("excitatory offsets give " + std::to_string(excitatory[s].size()) +
                        " distinct neighbors per site, expected K_E=" + std::to_string(K_E));
    }
  }
  return Topology(std::move(torus), std::move(inhibitory), std::move(excitatory));
}

int torus_distance(const Topology& topology, Site i, Site j) {
  const TorusGeometry* torus = topology.torus();
  if (torus == nullptr) throw ConfigError("torus_distance requires a torus topology");
  const LatticeVector a = torus_coordinates(*torus, i);
  const LatticeVector b = torus_coordinates(*torus, j);
  int total = 0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const int diff = std::abs(a[d] - b[d]);
    total += std::min(diff, torus->side() - diff);
  }
  return total;
}

SiteSet sublattice_lambda0(const Topology& topology) {
  const TorusGeometry* torus = topology.torus();
  if (torus == nullptr) throw ConfigError("sublattice_lambda0 requires a torus topology");
  SiteSet out;
  for (Site s = 0; s < topology.size(); ++s) {
    // The period 2N is even, so residue parity equals representative parity.
    if (parity_sum(torus_coordinates(*torus, s)) % 2 == 0) out.push_back(s);
  }
  return out;
}

Topology build_block_network(int p, int k, const std::vector<std::array<int, 2>>& pairing,
                             const BlockOptions& options) {
  if (p < 1) throw ConfigError("number of block pairs p must be >= 1");
  if (k < 1 || (k == 1 && !options.allow_single_site_blocks)) {
    throw ConfigError("block size k must be > 1 (k = 1 requires an explicit override)");
  }
  if (static_cast<int>(pairing.size()) != p) {
    throw ConfigError("pairing must list exactly p=" + std::to_string(p) + " pairs");
  }
  std::vector<int> seen(static_cast<std::size_t>(2 * p), 0);
  for (const auto& pair : pairing) {
    for (int b : pair) {
      if (b < 0 || b >= 2 * p) {
        throw ConfigError("pairing refers to block " + std::to_string(b + 1) +
                          " outside 1.." + std::to_string(2 * p));
      }
      if (seen[static_cast<std::size_t>(b)]++ != 0) {
        throw ConfigError("pairs must be disjoint: block " + std::to_string(b + 1) +
                          " appears twice");
      }
    }
  }

  const auto n = static_cast<std::size_t>(2 * p * k);
  BlockStructure blocks;
  blocks.p = p;
  blocks.k = k;
  blocks.pairing = pairing;
  blocks.blocks.resize(static_cast<std::size_t>(2 * p));
  if (options.membership.empty()) {
    blocks.block_of.resize(n);
    for (Site s = 0; s < n; ++s) blocks.block_of[s] = static_cast<int>(s) / k;
  } else {
    if (options.membership.size() != n) {
      throw ConfigError("block membership must list all " + std::to_string(n) + " sites");
    }
    blocks.block_of = options.membership;
  }
  for (Site s = 0; s < n; ++s) {
    const int b = blocks.block_of[s];
    if (b < 0 || b >= 2 * p) throw ConfigError("block membership out of range");
    blocks.blocks[static_cast<std::size_t>(b)].push_back(s);
  }
  for (std::size_t b = 0; b < blocks.blocks.size(); ++b) {
    if (static_cast<int>(blocks.blocks[b].size()) != k) {
      throw ConfigError("block " + std::to_string(b + 1) + " has " +
                        std::to_string(blocks.blocks[b].size()) + " sites, expected k=" +
                        std::to_string(k));
    }
  }

  std::vector<SiteSet> inhibitory(n), excitatory(n);
  for (Site s = 0; s < n; ++s) {
    SiteSet others = all_sites(n);
    others.erase(others.begin() + s);
    inhibitory[s] = std::move(others);
  }
  return Topology(std::move(blocks), std::move(inhibitory), std::move(excitatory));
}

}  // namespace hourglass

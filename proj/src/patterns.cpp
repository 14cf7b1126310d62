#include "hourglass/patterns.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "hourglass/classify.hpp"
#include "hourglass/errors.hpp"
#include "hourglass/format.hpp"

namespace hourglass {

namespace {

std::vector<SiteSet> block_unions(const BlockStructure& blocks) {
  const int p = static_cast<int>(blocks.pairing.size());
  if (p >= 31) throw BudgetError("too many block pairs to enumerate");
  std::vector<SiteSet> out;
  out.reserve(std::size_t{1} << p);
  for (std::uint32_t choice = 0; choice < (std::uint32_t{1} << p); ++choice) {
    std::vector<Site> sites;
    for (int n = 0; n < p; ++n) {
      const int bit = static_cast<int>((choice >> (p - 1 - n)) & 1u);
      const SiteSet& block = blocks.blocks[blocks.pairing[n][bit]];
      sites.insert(sites.end(), block.begin(), block.end());
    }
    out.push_back(make_site_set(std::move(sites)));
  }
  return out;
}

DistributionSpec self_with_mean(const DistributionSpec& shape, double a) {
  return shape.scaled(a / shape.mean());
}

Topology topology_of(const BlockStructure& blocks) {
  BlockOptions options;
  options.allow_single_site_blocks = blocks.k == 1;
  options.membership = blocks.block_of;
  return build_block_network(blocks.p, blocks.k, blocks.pairing, options);
}

std::vector<SiteSet> sorted(std::vector<SiteSet> sets) {
  std::sort(sets.begin(), sets.end());
  return sets;
}

}  // namespace

void validate_block_constants(const BlockConstants& k) {
  if (!(k.b > 0.0 && k.b < k.a && k.a < k.c)) {
    throw ConfigError("block constants must satisfy 0 < b < a < c (got a=" + format_number(k.a) +
                      ", b=" + format_number(k.b) + ", c=" + format_number(k.c) + ")");
  }
}

std::vector<SiteSet> enumerate_traps(const BlockStructure& blocks, const BlockConstants& constants) {
  validate_block_constants(constants);
  if (blocks.k < 2) throw ConfigError("trap enumeration needs blocks of at least two sites");
  return block_unions(blocks);
}

Network block_network(const Topology& topology, const BlockConstants& constants, MagnitudeKind kind,
                      const DistributionSpec& self_shape) {
  if (topology.blocks() == nullptr) throw ConfigError("block constants need a block topology");
  if (!(constants.a > 0.0 && constants.b > 0.0 && constants.c > 0.0)) {
    throw ConfigError("block constants a, b, c must be positive");
  }
  ConnectionSpec connections = block_connections(topology, constants.b, constants.c, kind);
  return make_network(topology, std::move(connections), self_with_mean(self_shape, constants.a));
}

std::vector<SiteSet> brute_force_traps(const Network& network, std::size_t max_sites) {
  ClassifierOptions options;
  options.max_sites = max_sites;
  InductiveClassifier classifier(network, Method::Analytic, options);
  const SiteSet& world = classifier.world();
  const std::size_t n = world.size();
  std::vector<SiteSet> traps;
  if (n < 2) return traps;
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    SiteSet M;
    for (std::size_t a = 0; a < n; ++a) {
      if (mask & (std::uint32_t{1} << a)) M.push_back(world[a]);
    }
    if (classifier.is_trap(M)) traps.push_back(std::move(M));
  }
  return sorted(std::move(traps));
}

Pattern pattern_from_trap(const SiteSet& trap, std::size_t sites) {
  Pattern xi(sites, -1);
  for (Site s : trap) {
    if (s >= sites) throw ConfigError("trap site " + std::to_string(s) + " out of range");
    xi[s] = 1;
  }
  return xi;
}

SiteSet trap_from_pattern(const Pattern& pattern) {
  SiteSet out;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] == 1) out.push_back(static_cast<Site>(i));
  }
  return out;
}

std::string render_pattern(const Pattern& pattern) {
  std::string out;
  out.reserve(pattern.size());
  for (auto v : pattern) out.push_back(v == 1 ? '#' : '.');
  return out;
}

void check_pattern(const Pattern& pattern) {
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] != 1 && pattern[i] != -1) {
      throw ConfigError("pattern entry " + std::to_string(i) + " must be -1 or +1");
    }
  }
}

PatternFamily infer_family(const std::vector<Pattern>& patterns) {
  if (patterns.empty()) throw ConfigError("pattern family is empty");
  const std::size_t n = patterns.front().size();
  if (n == 0) throw ConfigError("patterns must have at least one site");
  for (const Pattern& xi : patterns) {
    if (xi.size() != n) throw ConfigError("patterns have different lengths");
    check_pattern(xi);
  }

  PatternFamily family;
  family.patterns = patterns;
  BlockStructure& bs = family.blocks;
  std::map<std::vector<std::int8_t>, int> block_of_column;
  std::vector<std::vector<std::int8_t>> columns;
  bs.block_of.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<std::int8_t> column;
    for (const Pattern& xi : patterns) column.push_back(xi[x]);
    auto [it, inserted] = block_of_column.emplace(column, static_cast<int>(bs.blocks.size()));
    if (inserted) {
      bs.blocks.emplace_back();
      columns.push_back(column);
    }
    bs.block_of[x] = it->second;
    bs.blocks[it->second].push_back(static_cast<Site>(x));
  }
  bs.k = static_cast<int>(bs.blocks.front().size());

  const int blocks = static_cast<int>(bs.blocks.size());
  std::vector<int> partner(blocks, -1);
  for (int m = 0; m < blocks; ++m) {
    std::vector<std::int8_t> negated = columns[m];
    for (auto& v : negated) v = static_cast<std::int8_t>(-v);
    const auto it = block_of_column.find(negated);
    if (it != block_of_column.end()) partner[m] = it->second;
  }
  for (int m = 0; m < blocks; ++m) {
    if (partner[m] > m && partner[partner[m]] == m) bs.pairing.push_back({m, partner[m]});
  }
  bs.p = static_cast<int>(bs.pairing.size());
  return family;
}

PatternFamily family_from_blocks(const BlockStructure& blocks) {
  PatternFamily family;
  family.blocks = blocks;
  for (const SiteSet& trap : block_unions(blocks)) {
    family.patterns.push_back(pattern_from_trap(trap, blocks.sites()));
  }
  return family;
}

FamilyReport validate_pattern_family(const PatternFamily& family) {
  FamilyReport report;
  auto fail = [&](std::string message) {
    report.valid = false;
    report.violations.push_back(std::move(message));
  };
  const BlockStructure& bs = family.blocks;
  const std::size_t n = bs.sites();
  const int nblocks = static_cast<int>(bs.blocks.size());

  if (family.patterns.empty()) fail("family has no patterns");
  if (nblocks != 2 * bs.p || static_cast<int>(bs.pairing.size()) != bs.p) {
    fail("blocks are not grouped into " + std::to_string(bs.p) + " disjoint pairs");
  }
  for (int m = 0; m < nblocks; ++m) {
    if (static_cast<int>(bs.blocks[m].size()) != bs.k) {
      fail("block " + std::to_string(m + 1) + " has " + std::to_string(bs.blocks[m].size()) +
           " sites, expected k=" + std::to_string(bs.k));
    }
  }
  for (std::size_t mu = 0; mu < family.patterns.size(); ++mu) {
    const Pattern& xi = family.patterns[mu];
    const std::string which = "pattern " + std::to_string(mu + 1);
    if (xi.size() != n) {
      fail(which + " has " + std::to_string(xi.size()) + " sites, expected " + std::to_string(n));
      continue;
    }
    bool entries_ok = true;
    int sum = 0;
    for (auto v : xi) {
      if (v != 1 && v != -1) entries_ok = false;
      sum += v;
    }
    if (!entries_ok) {
      fail(which + " has entries other than -1 and +1");
      continue;
    }
    for (int m = 0; m < nblocks; ++m) {
      const SiteSet& block = bs.blocks[m];
      for (Site x : block) {
        if (xi[x] != xi[block.front()]) {
          fail("condition 1: " + which + " is not constant on block " + std::to_string(m + 1));
          break;
        }
      }
    }
    if (sum != 0) fail("condition 2: " + which + " is not balanced (sum " + std::to_string(sum) + ")");
  }
  if (!report.valid) return report;

  // Condition 3 over all site pairs of two blocks.
  auto anti_correlated = [&](int m, int l) {
    for (const Pattern& xi : family.patterns) {
      for (Site x : bs.blocks[m]) {
        for (Site y : bs.blocks[l]) {
          if (xi[x] * xi[y] != -1) return false;
        }
      }
    }
    return true;
  };
  for (int m = 0; m < nblocks; ++m) {
    std::vector<int> partners;
    for (int l = 0; l < nblocks; ++l) {
      if (l != m && anti_correlated(m, l)) partners.push_back(l);
    }
    if (partners.size() != 1) {
      fail("condition 3: block " + std::to_string(m + 1) + " has " +
           std::to_string(partners.size()) + " anti-correlated blocks, expected exactly one");
    } else if (partners.front() != bs.partner(m)) {
      fail("condition 3: block " + std::to_string(m + 1) + " is anti-correlated with block " +
           std::to_string(partners.front() + 1) + " but paired with block " +
           std::to_string(bs.partner(m) + 1));
    }
  }

  if (bs.p < 31 && family.patterns.size() != (std::size_t{1} << bs.p)) {
    fail("family has " + std::to_string(family.patterns.size()) + " patterns, expected 2^p = " +
         std::to_string(std::size_t{1} << bs.p));
  }
  std::vector<Pattern> unique = family.patterns;
  std::sort(unique.begin(), unique.end());
  if (std::adjacent_find(unique.begin(), unique.end()) != unique.end()) {
    fail("family contains repeated patterns");
  }
  return report;
}

void validate_learning_constants(double A, double B) {
  if (!(B + A > 1.0)) {
    throw ConfigError("learning constants violate 1 < B + A (got B + A = " + format_number(B + A) +
                      ")");
  }
  if (!(B - A > 0.0 && B - A < 1.0)) {
    throw ConfigError("learning constants violate 0 < B - A < 1 (got B - A = " +
                      format_number(B - A) + ")");
  }
}

LearnedConnections hebb_connections(const PatternFamily& family, double a, double A, double B) {
  if (!(a > 0.0)) throw ConfigError("a must be positive");
  validate_learning_constants(A, B);
  const FamilyReport report = validate_pattern_family(family);
  if (!report.valid) {
    std::string message = "invalid pattern family:";
    for (const auto& v : report.violations) message += "\n  " + v;
    throw ConfigError(message);
  }

  const std::size_t n = family.blocks.sites();
  const auto M = static_cast<double>(family.patterns.size());
  std::vector<std::vector<double>> b(n, std::vector<double>(n, 0.0));
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      int sum = 0;
      for (const Pattern& xi : family.patterns) sum += xi[x] * xi[y];
      // a factored out so that b is exactly -(B - A) a or -(A + B) a at
      // correlation +1 or -1.
      b[x][y] = a * (A * (sum / M) - B);
      lo = std::min(lo, b[x][y]);
      hi = std::max(hi, b[x][y]);
    }
  }

  LearnedConnections learned;
  learned.a = a;
  learned.A = A;
  learned.B = B;
  learned.magnitude.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      const double theta = b[x][y] == lo ? lo : hi;
      learned.magnitude[x][y] = -theta;
    }
  }
  return learned;
}

Network learned_network(const LearnedConnections& learned, const BlockStructure& blocks,
                        MagnitudeKind kind, const DistributionSpec& self_shape) {
  if (learned.magnitude.size() != blocks.sites()) {
    throw ConfigError("learned connections do not match the block structure");
  }
  return make_network(topology_of(blocks), inhibitory_connections(learned.magnitude, kind),
                      self_with_mean(self_shape, learned.a));
}

StorageReport verify_storage_report(const LearnedConnections& learned, const PatternFamily& family,
                                    std::size_t brute_force_limit) {
  StorageReport report;
  const BlockStructure& bs = family.blocks;
  for (const Pattern& xi : family.patterns) report.expected.push_back(trap_from_pattern(xi));
  report.expected = sorted(std::move(report.expected));

  const BlockConstants k = learned.constants();
  const std::size_t n = bs.sites();
  report.magnitudes_match = learned.magnitude.size() == n;
  for (std::size_t x = 0; report.magnitudes_match && x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      const bool partners = bs.partner(bs.block_of[x]) == bs.block_of[y];
      if (learned.magnitude[x][y] != (partners ? k.c : k.b)) {
        report.magnitudes_match = false;
        break;
      }
    }
  }

  try {
    report.enumerated = sorted(enumerate_traps(bs, k));
    report.enumeration_matches = report.enumerated == report.expected;
  } catch (const ConfigError&) {
    report.enumeration_matches = false;
  }

  if (n <= brute_force_limit) {
    report.brute_force_checked = true;
    const Network net = learned_network(learned, bs, MagnitudeKind::Deterministic);
    report.brute_force = brute_force_traps(net, brute_force_limit);
    report.brute_force_matches = report.brute_force == report.expected;
  }
  report.stored = report.magnitudes_match && report.enumeration_matches &&
                  (!report.brute_force_checked || report.brute_force_matches);
  return report;
}

bool verify_storage(const LearnedConnections& learned, const PatternFamily& family) {
  return verify_storage_report(learned, family).stored;
}

}  // namespace hourglass

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hourglass/network.hpp"
#include "hourglass/site_set.hpp"
#include "hourglass/topology.hpp"

namespace hourglass {

/// Block-network constants: E Y = a, E|theta| = c between paired blocks and
/// b otherwise.
struct BlockConstants {
  double a = 1.0;
  double b = 0.5;
  double c = 2.0;
};

/// Throws ConfigError unless 0 < b < a < c.
void validate_block_constants(const BlockConstants& constants);

/// The 2^p unions of one block per pair. Canonical order: lexicographic in
/// the choice bits (pair 0 most significant; bit 0 picks pairing[n][0]).
std::vector<SiteSet> enumerate_traps(const BlockStructure& blocks, const BlockConstants& constants);

/// Block network; Y is `self_shape` rescaled to mean a, magnitudes are
/// realized with `kind`.
Network block_network(const Topology& topology, const BlockConstants& constants,
                      MagnitudeKind kind,
                      const DistributionSpec& self_shape = DistributionSpec::exponential(1.0));

/// Every non-empty proper M with is_trap(M) under the analytic inductive
/// classifier, sorted by site list. Throws BudgetError above `max_sites`.
std::vector<SiteSet> brute_force_traps(const Network& network, std::size_t max_sites = 16);

/// xi_i = +1 exactly on the trap.
using Pattern = std::vector<std::int8_t>;

Pattern pattern_from_trap(const SiteSet& trap, std::size_t sites);
SiteSet trap_from_pattern(const Pattern& pattern);
/// '#' for +1, '.' for -1.
std::string render_pattern(const Pattern& pattern);
/// Throws ConfigError on entries other than -1 and +1.
void check_pattern(const Pattern& pattern);

struct PatternFamily {
  std::vector<Pattern> patterns;
  BlockStructure blocks;
};

/// Recovers blocks (sites with identical columns, ordered by first site) and
/// their anti-correlated pairing from a list of patterns. The result may
/// still violate the family conditions; run validate_pattern_family.
PatternFamily infer_family(const std::vector<Pattern>& patterns);

/// The full family generated by enumerate_traps on `blocks`.
PatternFamily family_from_blocks(const BlockStructure& blocks);

struct FamilyReport {
  bool valid = true;
  std::vector<std::string> violations;
};

/// Blocks constant within every pattern; every pattern balanced; every block
/// has exactly one partner block that is anti-correlated in all patterns and
/// that partner matches the recorded pairing; 2^p distinct patterns.
FamilyReport validate_pattern_family(const PatternFamily& family);

struct LearnedConnections {
  /// E|theta_xy| per ordered pair, row = sender; zero on the diagonal.
  std::vector<std::vector<double>> magnitude;
  double a = 1.0;
  double A = 0.0;
  double B = 0.0;

  BlockConstants constants() const { return {a, (B - A) * a, (A + B) * a}; }
};

/// Throws ConfigError unless 0 < B - A < 1 and 1 < B + A.
void validate_learning_constants(double A, double B);

/// b(x,y) = A a corr(x,y) - B a with the min/max clamp. Rejects invalid
/// families and constants with ConfigError.
LearnedConnections hebb_connections(const PatternFamily& family, double a, double A, double B);

/// All-inhibitory network with the learned expectations; Y is `self_shape`
/// rescaled to mean a.
Network learned_network(const LearnedConnections& learned, const BlockStructure& blocks,
                        MagnitudeKind kind,
                        const DistributionSpec& self_shape = DistributionSpec::exponential(1.0));

struct StorageReport {
  bool stored = false;
  /// Learned magnitudes are c on partner-block pairs and b elsewhere.
  bool magnitudes_match = false;
  bool enumeration_matches = false;
  bool brute_force_checked = false;
  bool brute_force_matches = false;
  std::vector<SiteSet> expected;
  std::vector<SiteSet> enumerated;
  std::vector<SiteSet> brute_force;
};

/// Compares the family's traps with enumerate_traps on the learned constants
/// and, for at most `brute_force_limit` sites, with brute_force_traps on the
/// learned network.
StorageReport verify_storage_report(const LearnedConnections& learned, const PatternFamily& family,
                                    std::size_t brute_force_limit = 16);

bool verify_storage(const LearnedConnections& learned, const PatternFamily& family);

}  // namespace hourglass

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hourglass/analysis.hpp"
#include "hourglass/network.hpp"
#include "hourglass/random.hpp"
#include "hourglass/topology.hpp"

namespace hourglass {

struct TorusSection {
  int nu = 1;
  int N = 5;
  int K_E = 2;
  /// Empty: default offsets.
  std::vector<LatticeVector> offsets;

  bool operator==(const TorusSection&) const = default;
};

/// Block indices are 1-based in this section.
struct BlockSection {
  int p = 1;
  int k = 2;
  std::vector<std::array<int, 2>> pairing;
  /// Block of every site; empty means contiguous runs of k sites.
  std::vector<int> membership;
  bool allow_single_site_blocks = false;

  bool operator==(const BlockSection&) const = default;
};

/// Torus weights (w_I, w_E); block constants (a, b, c); or an explicit
/// inhibitory matrix E|theta_xy| (row = sender) with E Y = a.
struct ConnectionsSection {
  enum class Kind { Weights, Block, Matrix };

  Kind kind = Kind::Weights;
  double w_I = 0.0;
  double w_E = 0.0;
  double a = 1.0;
  double b = 0.5;
  double c = 2.0;
  std::vector<std::vector<double>> matrix;
  /// Realization of block and matrix magnitudes.
  MagnitudeKind magnitude = MagnitudeKind::Deterministic;

  bool operator==(const ConnectionsSection&) const = default;
};

struct DistributionsSection {
  DistributionSpec Y = DistributionSpec::exponential(1.0);
  DistributionSpec eta1 = DistributionSpec::exponential(1.0);
  DistributionSpec eta2 = DistributionSpec::exponential(1.0);
  DistributionSpec X0 = DistributionSpec::exponential(1.0);

  bool operator==(const DistributionsSection&) const = default;
};

struct RunSection {
  std::uint64_t seed = 1;
  double horizon = 1e4;
  double burn_in = 0.2;
  std::size_t bins = 20;
  std::size_t reservoir = 10000;
  /// Sites kept active; all sites when absent.
  std::optional<std::vector<Site>> restriction;
  /// Explicit x(0) for every site; X0 draws when absent.
  std::optional<std::vector<double>> initial;
  HeuristicThresholds heuristic{};

  bool operator==(const RunSection& o) const {
    return seed == o.seed && horizon == o.horizon && burn_in == o.burn_in && bins == o.bins &&
           reservoir == o.reservoir && restriction == o.restriction && initial == o.initial &&
           heuristic.ergodic_growth == o.heuristic.ergodic_growth &&
           heuristic.transient_growth == o.heuristic.transient_growth;
  }
};

struct OutputSection {
  std::string dir = "out";
  bool trace = false;

  bool operator==(const OutputSection&) const = default;
};

struct ExperimentConfig {
  std::variant<TorusSection, BlockSection> topology = TorusSection{};
  ConnectionsSection connections;
  DistributionsSection distributions;
  RunSection run;
  OutputSection output;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses and validates a JSON document. Errors are ConfigError with the
/// offending key path, e.g. "topology.torus.K_E: ...".
ExperimentConfig parse_config(std::string_view text);

/// Canonical JSON text (sorted keys, two-space indent, trailing newline).
std::string render_config(const ExperimentConfig& config);

ExperimentConfig load_config(const std::string& path);

/// Checks every cross-section constraint; parse_config calls this.
void validate_config(const ExperimentConfig& config);

/// 64-bit FNV-1a of the canonical rendering, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

Topology build_topology(const ExperimentConfig& config);

/// Full network with the run restriction applied.
Network build_network(const ExperimentConfig& config);

/// Reads a whole file; IoError on failure.
std::string read_file(const std::string& path);
/// Writes a whole file, creating parent directories; IoError on failure.
void write_file(const std::string& path, std::string_view content);

}  // namespace hourglass

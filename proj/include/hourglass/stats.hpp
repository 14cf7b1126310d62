#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "hourglass/dynamics.hpp"
#include "hourglass/network.hpp"
#include "hourglass/random.hpp"

namespace hourglass {

/// Ordered pair (receiver i, sender j).
using SitePair = std::pair<Site, Site>;

/// Running sums over the excitatory impulses j -> i sent while j fired
/// spontaneously: Z is x_i just before the impulse, theta its magnitude.
struct ZAccumulator {
  std::uint64_t count = 0;
  std::uint64_t below = 0;  // Z <= theta
  double excess = 0.0;      // sum of (theta - Z)^+
  double theta = 0.0;       // sum of theta

  ZAccumulator& operator+=(const ZAccumulator& other);
};

/// Firing counts over [t_start, t_end], split into `bins` equal sub-windows
/// so burn-in can be discarded and batch-means errors computed afterwards.
struct FiringStats {
  double t_start = 0.0;
  double t_end = 0.0;
  std::size_t bins = 0;
  std::size_t sites = 0;
  std::vector<char> active;

  /// [bin * sites + i]: firings of i by hitting zero.
  std::vector<std::uint64_t> spontaneous;
  /// [bin * sites + i]: firings of i caused by an excitatory impulse.
  std::vector<std::uint64_t> induced;
  /// (i, j) -> per-bin count of firings of i caused by j.
  std::map<SitePair, std::vector<std::uint64_t>> induced_by_pair;
  /// (i, j) -> per-bin Z summaries.
  std::map<SitePair, std::vector<ZAccumulator>> z_summary;
  /// (i, j) -> reservoir sample of Z values.
  std::map<SitePair, std::vector<double>> z_samples;
  /// [edge * sites + i]: x_i at the bin edges t_start + edge * width.
  std::vector<double> edge_x;
  std::uint64_t events = 0;

  double bin_width() const { return (t_end - t_start) / static_cast<double>(bins); }
  std::uint64_t spontaneous_count(Site i, std::size_t bin) const {
    return spontaneous[bin * sites + i];
  }
  std::uint64_t total_count(Site i, std::size_t bin) const {
    return spontaneous[bin * sites + i] + induced[bin * sites + i];
  }
  double x_at_edge(Site i, std::size_t edge) const { return edge_x[edge * sites + i]; }
};

struct RecorderOptions {
  std::size_t bins = 20;
  std::size_t reservoir = 10000;
  /// Seed for reservoir replacement; kept apart from the simulation stream.
  std::uint64_t seed = 0;
};

/// Builds FiringStats from an engine run. Events outside [t_start, t_end]
/// are ignored.
class StatsRecorder final : public Recorder {
 public:
  StatsRecorder(const Network& network, double t_start, double t_end, RecorderOptions options = {});

  void on_event(const FiringEvent& event, const SimState& after) override;
  std::optional<double> next_checkpoint() const override;
  void on_checkpoint(const SimState& state) override;

  const FiringStats& stats() const { return stats_; }
  FiringStats take() { return std::move(stats_); }

 private:
  std::size_t bin_of(double time) const;

  FiringStats stats_;
  std::size_t reservoir_;
  Rng reservoir_rng_;
  std::map<SitePair, std::uint64_t> seen_;
  std::size_t next_edge_ = 0;
};

/// Convenience: init from `init`, run to `horizon` recording [0, horizon].
FiringStats simulate_stats(const Network& network, const DistributionSpec& init,
                           std::uint64_t seed, double horizon, RecorderOptions options = {});

}  // namespace hourglass

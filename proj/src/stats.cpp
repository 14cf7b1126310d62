#include "hourglass/stats.hpp"

#include <algorithm>
#include <cmath>

#include "hourglass/errors.hpp"

namespace hourglass {

ZAccumulator& ZAccumulator::operator+=(const ZAccumulator& other) {
  count += other.count;
  below += other.below;
  excess += other.excess;
  theta += other.theta;
  return *this;
}

StatsRecorder::StatsRecorder(const Network& network, double t_start, double t_end,
                             RecorderOptions options)
    : reservoir_(options.reservoir), reservoir_rng_(options.seed, 0x5a) {
  if (!(t_end > t_start)) throw ConfigError("statistics window must have positive length");
  if (options.bins == 0) throw ConfigError("statistics need at least one bin");
  stats_.t_start = t_start;
  stats_.t_end = t_end;
  stats_.bins = options.bins;
  stats_.sites = network.size();
  stats_.active = network.active;
  stats_.spontaneous.assign(options.bins * network.size(), 0);
  stats_.induced.assign(options.bins * network.size(), 0);
  stats_.edge_x.assign((options.bins + 1) * network.size(), std::nan(""));
}

std::size_t StatsRecorder::bin_of(double time) const {
  const double rel = (time - stats_.t_start) / stats_.bin_width();
  const auto bin = static_cast<std::size_t>(std::max(0.0, std::floor(rel)));
  return std::min(bin, stats_.bins - 1);
}

void StatsRecorder::on_event(const FiringEvent& event, const SimState&) {
  if (event.time < stats_.t_start || event.time > stats_.t_end) return;
  const std::size_t bin = bin_of(event.time);
  const std::size_t base = bin * stats_.sites;
  ++stats_.events;
  ++stats_.spontaneous[base + event.primary];
  for (const Impulse& imp : event.impulses) {
    if (imp.sign != Sign::Excitatory) continue;
    const SitePair key{imp.target, imp.source};
    if (imp.fired) {
      ++stats_.induced[base + imp.target];
      auto& counts = stats_.induced_by_pair[key];
      if (counts.empty()) counts.assign(stats_.bins, 0);
      ++counts[bin];
    }
    // Only the primary sends excitatory impulses, so every excitatory
    // impulse is a Z observation at a spontaneous firing of its sender.
    auto& z = stats_.z_summary[key];
    if (z.empty()) z.resize(stats_.bins);
    ZAccumulator& acc = z[bin];
    ++acc.count;
    acc.theta += imp.magnitude;
    if (imp.before <= imp.magnitude) {
      ++acc.below;
      acc.excess += imp.magnitude - imp.before;
    }
    if (reservoir_ > 0) {
      auto& samples = stats_.z_samples[key];
      const std::uint64_t seen = ++seen_[key];
      if (samples.size() < reservoir_) {
        samples.push_back(imp.before);
      } else {
        const std::uint64_t slot = reservoir_rng_() % seen;
        if (slot < reservoir_) samples[slot] = imp.before;
      }
    }
  }
}

std::optional<double> StatsRecorder::next_checkpoint() const {
  if (next_edge_ > stats_.bins) return std::nullopt;
  if (next_edge_ == stats_.bins) return stats_.t_end;
  return stats_.t_start + stats_.bin_width() * static_cast<double>(next_edge_);
}

void StatsRecorder::on_checkpoint(const SimState& state) {
  for (Site i = 0; i < stats_.sites; ++i) {
    stats_.edge_x[next_edge_ * stats_.sites + i] = state.x(i);
  }
  ++next_edge_;
}

FiringStats simulate_stats(const Network& network, const DistributionSpec& init,
                           std::uint64_t seed, double horizon, RecorderOptions options) {
  Engine engine(network);
  SimState state = engine.init_state(init, seed);
  if (options.seed == 0) options.seed = seed;
  StatsRecorder recorder(network, 0.0, horizon, options);
  engine.run(state, horizon, recorder);
  return recorder.take();
}

}  // namespace hourglass

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hourglass/network.hpp"
#include "hourglass/random.hpp"
#include "hourglass/site_set.hpp"

namespace hourglass {

namespace detail {

/// Binary min-heap of site ids ordered by (key[site], site), with position
/// tracking so a site's key can change in place. Keys live outside the heap.
class DeadlineHeap {
 public:
  void reset(std::size_t sites);
  void push(Site site, const std::vector<double>& key);
  /// Restores heap order after key[site] changed in either direction.
  void update(Site site, const std::vector<double>& key);
  bool empty() const { return heap_.empty(); }
  Site top() const { return heap_.front(); }
  bool contains(Site site) const { return pos_[site] >= 0; }

 private:
  static bool before(Site a, Site b, const std::vector<double>& key) {
    return key[a] < key[b] || (key[a] == key[b] && a < b);
  }
  void sift_up(std::size_t i, const std::vector<double>& key);
  void sift_down(std::size_t i, const std::vector<double>& key);
  void place(std::size_t i, Site site) {
    heap_[i] = site;
    pos_[site] = static_cast<std::int64_t>(i);
  }

  std::vector<Site> heap_;
  std::vector<std::int64_t> pos_;
};

}  // namespace detail

/// Clock plus the countdown vector X(t).
///
/// Countdowns are stored as absolute deadlines, x_i = deadline_i - clock, so
/// the site that fires next reaches exactly zero when the clock is set to its
/// deadline and all unfrozen sites decrease at slope -1 between events.
class SimState {
 public:
  double clock() const { return clock_; }
  std::size_t size() const { return deadline_.size(); }
  /// Remaining time to unassisted firing; +infinity for frozen sites.
  double x(Site site) const;
  std::vector<double> x() const;
  bool frozen(Site site) const { return frozen_[site] != 0; }
  Rng& rng() { return rng_; }
  const Rng& rng() const { return rng_; }

 private:
  friend class Engine;

  double clock_ = 0.0;
  std::vector<double> deadline_;
  std::vector<char> frozen_;
  Rng rng_{0};
  detail::DeadlineHeap heap_;
  std::vector<char> scratch_fired_;
};

/// One impulse delivered at a firing moment. `before` is the receiver's
/// countdown just before this impulse; `fired` marks an excitatory impulse
/// that made the receiver fire.
struct Impulse {
  Site source;
  Site target;
  Sign sign;
  double before;
  double magnitude;
  bool fired;
};

/// Everything that happened at one firing moment.
struct FiringEvent {
  double time = 0.0;
  Site primary = 0;
  /// Sites fired instantaneously by the primary's excitatory impulses (F1).
  SiteSet cascade;
  /// (site, fresh Y) for the primary and every cascade member.
  std::vector<std::pair<Site, double>> resets;
  std::vector<Impulse> impulses;

  void clear();
};

struct NextEvent {
  double delta;
  Site site;
};

/// Observer for Engine::run. Checkpoints let a recorder snapshot the state at
/// chosen times; on_checkpoint must move next_checkpoint() forward.
class Recorder {
 public:
  virtual ~Recorder() = default;
  virtual void on_event(const FiringEvent& event, const SimState& after) = 0;
  virtual std::optional<double> next_checkpoint() const { return std::nullopt; }
  virtual void on_checkpoint(const SimState&) {}
};

class NullRecorder final : public Recorder {
 public:
  void on_event(const FiringEvent&, const SimState&) override {}
};

/// Writes one CSV row per event: time,primary_site,cascade_sites.
class TraceRecorder final : public Recorder {
 public:
  explicit TraceRecorder(std::ostream& out);
  void on_event(const FiringEvent& event, const SimState& after) override;

 private:
  std::ostream& out_;
};

/// Fans events out to several recorders.
class RecorderChain final : public Recorder {
 public:
  explicit RecorderChain(std::vector<Recorder*> recorders) : recorders_(std::move(recorders)) {}
  void on_event(const FiringEvent& event, const SimState& after) override;
  std::optional<double> next_checkpoint() const override;
  void on_checkpoint(const SimState& state) override;

 private:
  std::vector<Recorder*> recorders_;
};

/// Event-driven simulator of the hourglass process on a fixed network.
///
/// At a firing of z: z resets to a fresh Y_z; each unfrozen j in D(z), in
/// ascending order, receives a fresh theta_zj (inhibitory: x_j += |theta|;
/// excitatory: x_j -= theta if x_j > theta, else j fires and resets); then
/// every cascade member sends its inhibitory impulses, with fresh draws, to
/// neighbors that did not fire at this moment. Cascade members send no
/// excitatory impulses (depth one). Draw order is fixed, so a seed fixes
/// the whole trajectory.
class Engine {
 public:
  /// The network must outlive the engine.
  explicit Engine(const Network& network) : network_(network) {}

  const Network& network() const { return network_; }

  /// x_i(0) drawn independently from `init` for active sites.
  SimState init_state(const DistributionSpec& init, std::uint64_t seed) const;
  /// Explicit x(0); entries for inactive sites are ignored. Active entries
  /// must be positive.
  SimState init_state(std::span<const double> x0, std::uint64_t seed) const;

  /// Time to the next zero-hit and the site that hits; ties go to the lowest
  /// site id. Throws ContractError when every site is frozen.
  NextEvent next_event(const SimState& state) const;

  /// Moves the clock forward by `delta`, which must not pass the next event.
  void advance(SimState& state, double delta) const;

  /// Applies the firing of `z`, which must have x_z == 0 exactly.
  void fire(SimState& state, Site z, FiringEvent& event) const;

  /// Processes every event with time <= horizon, then sets the clock to
  /// horizon. Returns the number of firing moments.
  std::uint64_t run(SimState& state, double horizon, Recorder& recorder) const;

 private:
  SimState make_state(std::uint64_t seed) const;

  const Network& network_;
};

}  // namespace hourglass

#include "hourglass/dynamics.hpp"

#include <limits>
#include <ostream>
#include <string>

#include "hourglass/errors.hpp"
#include "hourglass/format.hpp"

namespace hourglass {

namespace detail {

void DeadlineHeap::reset(std::size_t sites) {
  heap_.clear();
  pos_.assign(sites, -1);
}

void DeadlineHeap::push(Site site, const std::vector<double>& key) {
  heap_.push_back(site);
  pos_[site] = static_cast<std::int64_t>(heap_.size() - 1);
  sift_up(heap_.size() - 1, key);
}

void DeadlineHeap::update(Site site, const std::vector<double>& key) {
  const auto i = static_cast<std::size_t>(pos_[site]);
  sift_up(i, key);
  sift_down(static_cast<std::size_t>(pos_[site]), key);
}

void DeadlineHeap::sift_up(std::size_t i, const std::vector<double>& key) {
  const Site moving = heap_[i];
  while (i > 0) {
    const std::size_t parent = (i - 1) / 2;
    if (!before(moving, heap_[parent], key)) break;
    place(i, heap_[parent]);
    i = parent;
  }
  place(i, moving);
}

void DeadlineHeap::sift_down(std::size_t i, const std::vector<double>& key) {
  const Site moving = heap_[i];
  const std::size_t n = heap_.size();
  while (true) {
    std::size_t child = 2 * i + 1;
    if (child >= n) break;
    if (child + 1 < n && before(heap_[child + 1], heap_[child], key)) ++child;
    if (!before(heap_[child], moving, key)) break;
    place(i, heap_[child]);
    i = child;
  }
  place(i, moving);
}

}  // namespace detail

double SimState::x(Site site) const {
  if (frozen_[site]) return std::numeric_limits<double>::infinity();
  return deadline_[site] - clock_;
}

std::vector<double> SimState::x() const {
  std::vector<double> out(size());
  for (Site s = 0; s < size(); ++s) out[s] = x(s);
  return out;
}

void FiringEvent::clear() {
  cascade.clear();
  resets.clear();
  impulses.clear();
}

TraceRecorder::TraceRecorder(std::ostream& out) : out_(out) {
  out_ << "time,primary_site,cascade_sites\n";
}

void TraceRecorder::on_event(const FiringEvent& event, const SimState&) {
  out_ << format_number(event.time) << ',' << event.primary << ',';
  for (std::size_t i = 0; i < event.cascade.size(); ++i) {
    if (i) out_ << ';';
    out_ << event.cascade[i];
  }
  out_ << '\n';
}

void RecorderChain::on_event(const FiringEvent& event, const SimState& after) {
  for (Recorder* r : recorders_) r->on_event(event, after);
}

std::optional<double> RecorderChain::next_checkpoint() const {
  std::optional<double> best;
  for (const Recorder* r : recorders_) {
    const auto cp = r->next_checkpoint();
    if (cp && (!best || *cp < *best)) best = cp;
  }
  return best;
}

void RecorderChain::on_checkpoint(const SimState& state) {
  for (Recorder* r : recorders_) {
    const auto cp = r->next_checkpoint();
    if (cp && *cp <= state.clock()) r->on_checkpoint(state);
  }
}

SimState Engine::make_state(std::uint64_t seed) const {
  SimState state;
  const std::size_t n = network_.size();
  state.deadline_.assign(n, std::numeric_limits<double>::infinity());
  state.frozen_.assign(n, 0);
  state.scratch_fired_.assign(n, 0);
  for (Site s = 0; s < n; ++s) state.frozen_[s] = network_.active[s] ? 0 : 1;
  state.rng_ = Rng(seed);
  state.heap_.reset(n);
  return state;
}

SimState Engine::init_state(const DistributionSpec& init, std::uint64_t seed) const {
  SimState state = make_state(seed);
  for (Site s = 0; s < state.size(); ++s) {
    if (state.frozen_[s]) continue;
    state.deadline_[s] = sample(init, state.rng_);
    state.heap_.push(s, state.deadline_);
  }
  return state;
}

SimState Engine::init_state(std::span<const double> x0, std::uint64_t seed) const {
  if (x0.size() != network_.size()) {
    throw ConfigError("initial state has " + std::to_string(x0.size()) + " entries, expected " +
                      std::to_string(network_.size()));
  }
  SimState state = make_state(seed);
  for (Site s = 0; s < state.size(); ++s) {
    if (state.frozen_[s]) continue;
    if (!(x0[s] > 0.0)) throw ConfigError("initial countdown values must be positive");
    state.deadline_[s] = x0[s];
    state.heap_.push(s, state.deadline_);
  }
  return state;
}

NextEvent Engine::next_event(const SimState& state) const {
  if (state.heap_.empty()) throw ContractError("next_event: every site is frozen");
  const Site z = state.heap_.top();
  return NextEvent{state.deadline_[z] - state.clock_, z};
}

void Engine::advance(SimState& state, double delta) const {
  if (delta < 0.0) throw ContractError("advance: negative time step");
  if (!state.heap_.empty()) {
    const Site z = state.heap_.top();
    const double to_event = state.deadline_[z] - state.clock_;
    if (delta > to_event) throw ContractError("advance: step passes the next firing");
    if (delta == to_event) {
      state.clock_ = state.deadline_[z];
      return;
    }
  }
  state.clock_ += delta;
}

void Engine::fire(SimState& state, Site z, FiringEvent& event) const {
  if (state.frozen_[z] || state.deadline_[z] != state.clock_) {
    throw ContractError("fire: site " + std::to_string(z) + " has not reached zero");
  }
  const double now = state.clock_;
  auto& deadline = state.deadline_;
  auto& fired = state.scratch_fired_;
  Rng& rng = state.rng_;

  event.clear();
  event.time = now;
  event.primary = z;

  const double y = sample(network_.self[z], rng);
  deadline[z] = now + y;
  state.heap_.update(z, deadline);
  event.resets.emplace_back(z, y);
  fired[z] = 1;

  for (const Link& link : network_.connections.outgoing(z)) {
    const Site j = link.target;
    if (state.frozen_[j]) continue;
    const double theta = sample(link.magnitude, rng);
    const double before = deadline[j] - now;
    bool triggered = false;
    if (link.sign == Sign::Inhibitory) {
      deadline[j] += theta;
    } else if (before > theta) {
      deadline[j] = now + (before - theta);
    } else {
      triggered = true;
      fired[j] = 1;
      event.cascade.push_back(j);
      const double yj = sample(network_.self[j], rng);
      deadline[j] = now + yj;
      event.resets.emplace_back(j, yj);
    }
    state.heap_.update(j, deadline);
    event.impulses.push_back(Impulse{z, j, link.sign, before, theta, triggered});
  }

  for (const Site i : event.cascade) {
    for (const Link& link : network_.connections.outgoing(i)) {
      const Site j = link.target;
      if (link.sign != Sign::Inhibitory || state.frozen_[j] || fired[j]) continue;
      const double theta = sample(link.magnitude, rng);
      const double before = deadline[j] - now;
      deadline[j] += theta;
      state.heap_.update(j, deadline);
      event.impulses.push_back(Impulse{i, j, Sign::Inhibitory, before, theta, false});
    }
  }

  fired[z] = 0;
  for (const Site i : event.cascade) fired[i] = 0;
}

std::uint64_t Engine::run(SimState& state, double horizon, Recorder& recorder) const {
  if (horizon < state.clock_) throw ContractError("run: horizon lies in the past");
  FiringEvent event;
  std::uint64_t count = 0;
  const double inf = std::numeric_limits<double>::infinity();
  while (true) {
    const double next = state.heap_.empty() ? inf : state.deadline_[state.heap_.top()];
    const double stop = std::min(next, horizon);
    for (auto cp = recorder.next_checkpoint(); cp && *cp <= stop; cp = recorder.next_checkpoint()) {
      if (*cp > state.clock_) state.clock_ = *cp;
      recorder.on_checkpoint(state);
    }
    if (next > horizon) break;
    const Site z = state.heap_.top();
    state.clock_ = state.deadline_[z];
    fire(state, z, event);
    recorder.on_event(event, state);
    ++count;
  }
  state.clock_ = horizon;
  return count;
}

}  // namespace hourglass

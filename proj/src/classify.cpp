#include "hourglass/classify.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "hourglass/errors.hpp"
#include "hourglass/stats.hpp"

namespace hourglass {

InductiveClassifier::InductiveClassifier(const Network& network, Method method,
                                         ClassifierOptions options)
    : network_(network), method_(method), options_(options), world_(network.active_sites()) {
  n_ = world_.size();
  if (n_ == 0) throw ConfigError("classifier needs at least one active site");
  if (n_ > options_.max_sites || n_ > 30) {
    throw BudgetError("exhaustive classification over " + std::to_string(n_) +
                      " sites exceeds the budget of " + std::to_string(options_.max_sites));
  }
  magnitude_.assign(n_ * n_, 0.0);
  self_mean_.resize(n_);
  for (std::size_t a = 0; a < n_; ++a) {
    self_mean_[a] = mean_of(network_.self[world_[a]]);
    for (std::size_t b = 0; b < n_; ++b) {
      if (a == b) continue;
      const Link* link = network_.connections.find(world_[a], world_[b]);
      if (link == nullptr) continue;
      if (method_ == Method::Analytic && link->sign != Sign::Inhibitory) {
        throw ConfigError("analytic classification needs inhibitory links only");
      }
      magnitude_[a * n_ + b] = mean_of(link->magnitude);
    }
  }
  const std::size_t subsets = std::size_t{1} << n_;
  verdict_.assign(subsets, -1);
  witness_.assign(subsets, 0);
  signs_ready_.assign(subsets, 0);
  positive_.assign(subsets, 0);
  negative_.assign(subsets, 0);
}

InductiveClassifier::Mask InductiveClassifier::to_mask(const SiteSet& set) const {
  Mask mask = 0;
  for (Site s : set) {
    const auto it = std::lower_bound(world_.begin(), world_.end(), s);
    if (it == world_.end() || *it != s) {
      throw ConfigError("site " + std::to_string(s) + " is not an active site of the network");
    }
    mask |= Mask{1} << (it - world_.begin());
  }
  return mask;
}

SiteSet InductiveClassifier::to_sites(Mask mask) const {
  SiteSet out;
  for (std::size_t a = 0; a < n_; ++a) {
    if (mask & (Mask{1} << a)) out.push_back(world_[a]);
  }
  return out;
}

void InductiveClassifier::analytic_signs(Mask W) {
  std::vector<double> pi(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    if (!(W & (Mask{1} << i))) continue;
    double denom = self_mean_[i];
    for (std::size_t j = 0; j < n_; ++j) {
      if (j != i && (W & (Mask{1} << j))) denom += magnitude_[j * n_ + i];
    }
    pi[i] = 1.0 / denom;
  }
  Mask pos = 0, neg = 0;
  for (std::size_t j = 0; j < n_; ++j) {
    if (W & (Mask{1} << j)) continue;
    double v = -1.0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (W & (Mask{1} << i)) v += magnitude_[i * n_ + j] * pi[i];
    }
    if (v > options_.tolerance) pos |= Mask{1} << j;
    if (v < -options_.tolerance) neg |= Mask{1} << j;
  }
  positive_[W] = pos;
  negative_[W] = neg;
}

void InductiveClassifier::monte_carlo_signs(Mask W) {
  const MonteCarloBudget& budget = options_.monte_carlo;
  const Network sub = restrict(network_, to_sites(W));
  RecorderOptions rec;
  rec.bins = budget.bins;
  rec.reservoir = 0;
  const std::uint64_t seed = mix_seed(budget.seed, W);
  const FiringStats stats = simulate_stats(sub, budget.init, seed, budget.horizon, rec);
  const FieldEstimate est = estimate_field(sub, stats, budget.burn_in);
  Mask pos = 0, neg = 0;
  for (std::size_t j = 0; j < n_; ++j) {
    if (W & (Mask{1} << j)) continue;
    const double v = est.field.drift[world_[j]];
    const double hw = est.half_width[world_[j]];
    if (v - hw > 0.0 && v > options_.tolerance) pos |= Mask{1} << j;
    if (v + hw < 0.0 && v < -options_.tolerance) neg |= Mask{1} << j;
  }
  positive_[W] = pos;
  negative_[W] = neg;
}

void InductiveClassifier::ensure_signs(Mask W) {
  if (signs_ready_[W]) return;
  if (method_ == Method::Analytic) {
    analytic_signs(W);
  } else {
    monte_carlo_signs(W);
  }
  signs_ready_[W] = 1;
}

Verdict InductiveClassifier::verdict(Mask S) {
  if (verdict_[S] >= 0) return static_cast<Verdict>(verdict_[S]);
  ++evaluated_;
  Verdict result = Verdict::Unknown;
  if (std::popcount(S) == 1) {
    result = Verdict::Ergodic;
  } else {
    bool undecided_subset = false;
    bool all_negative = true;
    bool transient = false;
    for (Mask W = (S - 1) & S; W != 0; W = (W - 1) & S) {
      const Verdict sub = verdict(W);
      if (sub == Verdict::Unknown) {
        undecided_subset = true;
        continue;
      }
      if (sub == Verdict::Transient) continue;
      ensure_signs(W);
      const Mask rest = S & ~W;
      if ((rest & ~positive_[W]) == 0) {
        transient = true;
        witness_[S] = rest;
        break;
      }
      if ((rest & ~negative_[W]) != 0) all_negative = false;
    }
    if (transient) {
      result = Verdict::Transient;
    } else if (all_negative && !undecided_subset) {
      result = Verdict::Ergodic;
    }
  }
  verdict_[S] = static_cast<signed char>(result);
  return result;
}

Classification InductiveClassifier::classify(const SiteSet& S) {
  if (S.empty()) throw ConfigError("cannot classify an empty site set");
  const Mask mask = to_mask(S);
  Classification out;
  out.verdict = verdict(mask);
  if (out.verdict == Verdict::Transient) out.witness = to_sites(witness_[mask]);
  return out;
}

bool InductiveClassifier::is_trap(const SiteSet& M) {
  if (M.empty()) throw ConfigError("a trap must be non-empty");
  const Mask m = to_mask(M);
  const Mask all = static_cast<Mask>((std::uint64_t{1} << n_) - 1);
  if (m == all) throw ConfigError("a trap must leave a non-empty complement");
  const Mask W = all & ~m;
  if (verdict(W) != Verdict::Ergodic) return false;
  ensure_signs(W);
  return (m & ~positive_[W]) == 0;
}

Classification classify_inductive(const Network& network, const SiteSet& S, Method method,
                                  const ClassifierOptions& options) {
  if (S.empty()) throw ConfigError("cannot classify an empty site set");
  const Network world = restrict(network, S);
  InductiveClassifier classifier(world, method, options);
  return classifier.classify(S);
}

bool is_trap(const Network& network, const SiteSet& M, Method method,
             const ClassifierOptions& options) {
  InductiveClassifier classifier(network, method, options);
  return classifier.is_trap(M);
}

}  // namespace hourglass

#pragma once

#include <cstdint>
#include <vector>

#include "hourglass/analysis.hpp"
#include "hourglass/network.hpp"
#include "hourglass/random.hpp"
#include "hourglass/site_set.hpp"

namespace hourglass {

enum class Method { Analytic, MonteCarlo };

/// Transient verdicts carry the trap M that proves them.
struct Classification {
  Verdict verdict = Verdict::Unknown;
  SiteSet witness;
};

/// Simulation effort per restricted sub-network in Monte-Carlo mode.
struct MonteCarloBudget {
  double horizon = 2000.0;
  double burn_in = 0.2;
  std::size_t bins = 20;
  std::uint64_t seed = 1;
  DistributionSpec init = DistributionSpec::exponential(1.0);
};

struct ClassifierOptions {
  /// Analytic drifts with |v| below this are treated as undecided.
  double tolerance = 1e-9;
  /// Exhaustive subset recursion refuses worlds larger than this.
  std::size_t max_sites = 16;
  MonteCarloBudget monte_carlo{};
};

/// Memoized inductive ergodicity/transience recursion over subsets of a
/// world of sites (the active sites of the network).
///
/// For a set S: singletons are ergodic; S is transient when some non-empty
/// proper M has an ergodic complement W = S \ M with v^W_j > 0 on M; S is
/// ergodic when every ergodic proper W has v^W_j < 0 on S \ W and no proper
/// subset is undecided; otherwise the verdict is Unknown.
class InductiveClassifier {
 public:
  InductiveClassifier(const Network& network, Method method, ClassifierOptions options = {});

  /// S must be a non-empty subset of the world.
  Classification classify(const SiteSet& S);

  /// M is a trap of the whole world: non-empty, proper, ergodic complement
  /// and strictly positive drift on every site of M.
  bool is_trap(const SiteSet& M);

  const SiteSet& world() const { return world_; }
  /// Number of subsets whose verdict has been computed.
  std::size_t evaluated() const { return evaluated_; }

 private:
  using Mask = std::uint32_t;

  Mask to_mask(const SiteSet& set) const;
  SiteSet to_sites(Mask mask) const;
  Verdict verdict(Mask S);
  void ensure_signs(Mask W);
  void analytic_signs(Mask W);
  void monte_carlo_signs(Mask W);

  const Network& network_;
  Method method_;
  ClassifierOptions options_;
  SiteSet world_;
  std::size_t n_ = 0;
  // Dense E|theta| between world sites: magnitude_[from * n + to].
  std::vector<double> magnitude_;
  std::vector<double> self_mean_;

  std::vector<signed char> verdict_;  // -1 = not computed
  std::vector<Mask> witness_;
  std::vector<char> signs_ready_;
  std::vector<Mask> positive_;
  std::vector<Mask> negative_;
  std::size_t evaluated_ = 0;
};

Classification classify_inductive(const Network& network, const SiteSet& S, Method method,
                                  const ClassifierOptions& options = {});

bool is_trap(const Network& network, const SiteSet& M, Method method,
             const ClassifierOptions& options = {});

}  // namespace hourglass

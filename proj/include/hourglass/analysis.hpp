#pragma once

#include <map>
#include <string_view>
#include <vector>

#include "hourglass/network.hpp"
#include "hourglass/site_set.hpp"
#include "hourglass/stats.hpp"

namespace hourglass {

/// Empirical limiting frequencies (firings per unit time) after burn-in.
struct FrequencyEstimate {
  double window = 0.0;
  std::size_t first_bin = 0;
  std::vector<double> spontaneous;  // pi^{W,0}
  std::vector<double> induced;      // sum_j pi^{W,e}_{ij}
  std::vector<double> total;        // pi^W
  /// 95% batch-means half-widths over the retained bins.
  std::vector<double> spontaneous_half_width;
  std::vector<double> total_half_width;
  std::map<SitePair, double> induced_by_pair;  // pi^{W,e}_{ij}
};

/// Index of the first bin kept after discarding `burn_in_fraction` of the
/// window (rounded up to whole bins).
std::size_t first_kept_bin(const FiringStats& stats, double burn_in_fraction);

/// Counts divided by the effective window. Throws ConfigError when burn-in
/// leaves no bins.
FrequencyEstimate estimate_frequencies(const FiringStats& stats, double burn_in_fraction = 0.2);

/// Per-site firing rates consumed by the second vector field. Entries for
/// sites outside the ergodic set are ignored; NaN marks a missing value.
struct SiteRates {
  std::vector<double> total;
  std::vector<double> spontaneous;
};

SiteRates rates_of(const FrequencyEstimate& estimate);

/// pi_i = (E Y_i + sum_{j in W, j != i} E|theta_ji|)^{-1} for i in W, zero
/// elsewhere. Requires every link between sites of W to be inhibitory.
std::vector<double> analytic_pi_inhibitory(const Network& network, const SiteSet& W);

/// Drift of each site outside W given rates on W. NaN for sites in W.
struct VectorField {
  std::vector<double> drift;
  SiteSet outside;
};

/// v_j = -1 - sum_{i in W} E theta_ij * rate_i, where rate_i is the total
/// rate for inhibitory senders and the spontaneous rate for excitatory ones.
VectorField second_vector_field(const Network& network, const SiteSet& W, const SiteRates& rates);

/// The same field computed per retained bin from empirical rates on the
/// active set of `stats`, with a 95% batch-means half-width per site.
struct FieldEstimate {
  VectorField field;
  std::vector<double> half_width;
};

FieldEstimate estimate_field(const Network& network, const FiringStats& stats,
                             double burn_in_fraction = 0.2);

enum class Verdict { Ergodic, Transient, Unknown };

std::string_view to_string(Verdict verdict);

/// Thresholds (fractions of the trailing half-window) for the finite-time
/// activity heuristic.
struct HeuristicThresholds {
  double ergodic_growth = 0.25;
  double transient_growth = 0.25;
};

/// Activity-based verdict over the trailing half of the stats window.
/// Ergodic: every active site fired and no countdown grew by more than
/// ergodic_growth * half. Transient: some site stayed silent and its
/// countdown grew by at least transient_growth * half. Unknown otherwise.
struct EmpiricalVerdict {
  Verdict verdict = Verdict::Unknown;
  SiteSet active;   // fired in the trailing half
  SiteSet silent;   // did not fire in the trailing half
  std::vector<double> growth;  // x(end) - x(mid)
  double half_window = 0.0;
};

EmpiricalVerdict empirical_verdict(const FiringStats& stats, const HeuristicThresholds& thresholds = {});

/// Two-sided 95% Student-t quantile.
double student_t95(std::size_t degrees_of_freedom);

}  // namespace hourglass

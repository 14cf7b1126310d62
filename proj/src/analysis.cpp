#include "hourglass/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hourglass/errors.hpp"

namespace hourglass {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct MeanAndHalfWidth {
  double mean;
  double half_width;
};

MeanAndHalfWidth batch_means(const std::vector<double>& values) {
  const auto m = values.size();
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(m);
  if (m < 2) return {mean, std::numeric_limits<double>::infinity()};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(m - 1));
  return {mean, student_t95(m - 1) * sd / std::sqrt(static_cast<double>(m))};
}

}  // namespace

double student_t95(std::size_t df) {
  static constexpr double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306,
                                     2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
                                     2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
                                     2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
  if (df == 0) return std::numeric_limits<double>::infinity();
  if (df <= 30) return table[df - 1];
  if (df <= 60) return 2.000;
  if (df <= 120) return 1.980;
  return 1.960;
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Ergodic:
      return "ergodic";
    case Verdict::Transient:
      return "transient";
    case Verdict::Unknown:
      return "unknown";
  }
  return "unknown";
}

std::size_t first_kept_bin(const FiringStats& stats, double burn_in_fraction) {
  if (!(burn_in_fraction >= 0.0) || burn_in_fraction >= 1.0) {
    throw ConfigError("burn-in fraction must lie in [0, 1)");
  }
  const double raw = burn_in_fraction * static_cast<double>(stats.bins);
  return static_cast<std::size_t>(std::ceil(raw - 1e-9));
}

FrequencyEstimate estimate_frequencies(const FiringStats& stats, double burn_in_fraction) {
  const std::size_t first = first_kept_bin(stats, burn_in_fraction);
  if (first >= stats.bins || stats.bins == 0) {
    throw ConfigError("no statistics window left after burn-in");
  }
  const std::size_t kept = stats.bins - first;
  const double width = stats.bin_width();
  FrequencyEstimate est;
  est.first_bin = first;
  est.window = width * static_cast<double>(kept);
  const std::size_t n = stats.sites;
  est.spontaneous.assign(n, 0.0);
  est.induced.assign(n, 0.0);
  est.total.assign(n, 0.0);
  est.spontaneous_half_width.assign(n, 0.0);
  est.total_half_width.assign(n, 0.0);

  std::vector<double> per_bin_spont(kept), per_bin_total(kept);
  for (Site i = 0; i < n; ++i) {
    std::uint64_t spont = 0, induced = 0;
    for (std::size_t b = first; b < stats.bins; ++b) {
      spont += stats.spontaneous[b * n + i];
      induced += stats.induced[b * n + i];
      per_bin_spont[b - first] = static_cast<double>(stats.spontaneous[b * n + i]) / width;
      per_bin_total[b - first] = static_cast<double>(stats.total_count(i, b)) / width;
    }
    // Rates are computed from integer sums so that total == spont + induced
    // holds at the count level.
    est.spontaneous[i] = static_cast<double>(spont) / est.window;
    est.induced[i] = static_cast<double>(induced) / est.window;
    est.total[i] = static_cast<double>(spont + induced) / est.window;
    est.spontaneous_half_width[i] = batch_means(per_bin_spont).half_width;
    est.total_half_width[i] = batch_means(per_bin_total).half_width;
  }
  for (const auto& [pair, counts] : stats.induced_by_pair) {
    std::uint64_t c = 0;
    for (std::size_t b = first; b < stats.bins; ++b) c += counts[b];
    est.induced_by_pair[pair] = static_cast<double>(c) / est.window;
  }
  return est;
}

SiteRates rates_of(const FrequencyEstimate& estimate) {
  return SiteRates{estimate.total, estimate.spontaneous};
}

std::vector<double> analytic_pi_inhibitory(const Network& network, const SiteSet& W) {
  const std::size_t n = network.size();
  std::vector<double> pi(n, 0.0);
  for (Site i : W) {
    if (i >= n) throw ConfigError("site set refers to a site out of range");
    double denom = mean_of(network.self[i]);
    for (Site j : W) {
      if (j == i) continue;
      const Link* link = network.connections.find(j, i);
      if (link == nullptr) continue;
      if (link->sign != Sign::Inhibitory) {
        throw ConfigError("analytic frequencies need inhibitory links only; " + std::to_string(j) +
                          "->" + std::to_string(i) + " is excitatory");
      }
      denom += mean_of(link->magnitude);
    }
    pi[i] = 1.0 / denom;
  }
  return pi;
}

VectorField second_vector_field(const Network& network, const SiteSet& W, const SiteRates& rates) {
  const std::size_t n = network.size();
  for (Site i : W) {
    if (i >= rates.total.size() || std::isnan(rates.total[i])) {
      throw ConfigError("rates are missing site " + std::to_string(i) + " of W");
    }
  }
  VectorField field;
  field.drift.assign(n, kNaN);
  field.outside = complement(W, n);
  for (Site j : field.outside) field.drift[j] = -1.0;
  for (Site i : W) {
    for (const Link& link : network.connections.outgoing(i)) {
      const Site j = link.target;
      if (contains(W, j)) continue;
      const double m = mean_of(link.magnitude);
      if (link.sign == Sign::Inhibitory) {
        field.drift[j] += m * rates.total[i];
      } else {
        const double spont = rates.spontaneous.empty() ? kNaN : rates.spontaneous[i];
        if (std::isnan(spont)) {
          throw ConfigError("spontaneous rate missing for excitatory sender " + std::to_string(i));
        }
        field.drift[j] -= m * spont;
      }
    }
  }
  return field;
}

FieldEstimate estimate_field(const Network& network, const FiringStats& stats,
                             double burn_in_fraction) {
  const std::size_t first = first_kept_bin(stats, burn_in_fraction);
  if (first >= stats.bins) throw ConfigError("no statistics window left after burn-in");
  SiteSet W;
  for (Site s = 0; s < stats.sites; ++s) {
    if (stats.active[s]) W.push_back(s);
  }
  const FrequencyEstimate est = estimate_frequencies(stats, burn_in_fraction);
  FieldEstimate out;
  out.field = second_vector_field(network, W, rates_of(est));
  out.half_width.assign(stats.sites, kNaN);

  const double width = stats.bin_width();
  const std::size_t kept = stats.bins - first;
  std::vector<std::vector<double>> per_bin(stats.sites, std::vector<double>(kept, 0.0));
  for (std::size_t b = first; b < stats.bins; ++b) {
    SiteRates rates;
    rates.total.assign(stats.sites, kNaN);
    rates.spontaneous.assign(stats.sites, kNaN);
    for (Site i : W) {
      rates.total[i] = static_cast<double>(stats.total_count(i, b)) / width;
      rates.spontaneous[i] = static_cast<double>(stats.spontaneous_count(i, b)) / width;
    }
    const VectorField f = second_vector_field(network, W, rates);
    for (Site j : f.outside) per_bin[j][b - first] = f.drift[j];
  }
  for (Site j : out.field.outside) out.half_width[j] = batch_means(per_bin[j]).half_width;
  return out;
}

EmpiricalVerdict empirical_verdict(const FiringStats& stats, const HeuristicThresholds& thresholds) {
  if (stats.bins < 2) throw ConfigError("activity heuristic needs at least two bins");
  const std::size_t mid = stats.bins / 2;
  EmpiricalVerdict out;
  out.half_window = stats.bin_width() * static_cast<double>(stats.bins - mid);
  out.growth.assign(stats.sites, kNaN);
  double max_growth = -std::numeric_limits<double>::infinity();
  bool transient_witness = false;
  for (Site i = 0; i < stats.sites; ++i) {
    if (!stats.active[i]) continue;
    std::uint64_t fired = 0;
    for (std::size_t b = mid; b < stats.bins; ++b) fired += stats.total_count(i, b);
    const double growth = stats.x_at_edge(i, stats.bins) - stats.x_at_edge(i, mid);
    out.growth[i] = growth;
    max_growth = std::max(max_growth, growth);
    if (fired > 0) {
      out.active.push_back(i);
    } else {
      out.silent.push_back(i);
      if (growth >= thresholds.transient_growth * out.half_window) transient_witness = true;
    }
  }
  if (out.silent.empty() && max_growth <= thresholds.ergodic_growth * out.half_window) {
    out.verdict = Verdict::Ergodic;
  } else if (transient_witness) {
    out.verdict = Verdict::Transient;
  } else {
    out.verdict = Verdict::Unknown;
  }
  return out;
}

}  // namespace hourglass

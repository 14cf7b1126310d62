#include "hourglass/critical.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hourglass/analysis.hpp"
#include "hourglass/errors.hpp"

namespace hourglass {

Network torus_network(const TorusModel& model, double w_I, double w_E) {
  require_unit_mean(model.Y, "Y");
  require_unit_mean(model.eta1, "eta_1");
  require_unit_mean(model.eta2, "eta_2");
  Topology topology = build_torus(model.nu, model.N, model.K_E, model.offsets);
  ConnectionSpec connections = torus_connections(topology, w_I, w_E, model.eta1, model.eta2);
  return make_network(std::move(topology), std::move(connections), model.Y);
}

Network lambda0_network(const TorusModel& model, double w_E) {
  // Lambda_0 has no internal inhibitory links, so w_I does not matter here.
  const Network full = torus_network(model, 0.0, w_E);
  return restrict(full, sublattice_lambda0(full.topology));
}

PooledRate pooled_rate(const FiringStats& stats, double burn_in_fraction) {
  const std::size_t first = first_kept_bin(stats, burn_in_fraction);
  if (first >= stats.bins) throw ConfigError("no statistics window left after burn-in");
  std::size_t active = 0;
  for (char a : stats.active) active += a ? 1 : 0;
  if (active == 0) throw ConfigError("no active sites in statistics");
  const double width = stats.bin_width();
  std::vector<double> per_bin;
  std::uint64_t total = 0, spont = 0;
  for (std::size_t b = first; b < stats.bins; ++b) {
    std::uint64_t bin_total = 0;
    for (Site i = 0; i < stats.sites; ++i) {
      if (!stats.active[i]) continue;
      bin_total += stats.total_count(i, b);
      spont += stats.spontaneous_count(i, b);
    }
    total += bin_total;
    per_bin.push_back(static_cast<double>(bin_total) / (width * static_cast<double>(active)));
  }
  const double window = width * static_cast<double>(per_bin.size()) * static_cast<double>(active);
  PooledRate out;
  out.total = static_cast<double>(total) / window;
  out.spontaneous = static_cast<double>(spont) / window;
  double ss = 0.0;
  for (double v : per_bin) ss += (v - out.total) * (v - out.total);
  const auto m = per_bin.size();
  out.total_half_width = m < 2 ? INFINITY
                               : student_t95(m - 1) * std::sqrt(ss / static_cast<double>(m - 1)) /
                                     std::sqrt(static_cast<double>(m));
  return out;
}

CriticalEstimate critical_wI(const TorusModel& model, double w_E, const SimulationBudget& budget) {
  if (!(w_E >= 0.0)) throw ConfigError("w_E must be >= 0");
  if (!(budget.horizon > 0.0)) throw ConfigError("simulation horizon must be positive");
  const Network sub = lambda0_network(model, w_E);
  RecorderOptions rec;
  rec.bins = budget.bins;
  rec.reservoir = 0;
  const FiringStats stats = simulate_stats(sub, model.X0, budget.seed, budget.horizon, rec);
  const PooledRate rate = pooled_rate(stats, budget.burn_in);
  if (!(rate.total > 0.0) || rate.total_half_width > budget.max_relative_half_width * rate.total) {
    throw BudgetError("simulation budget too small: relative half-width of pi^+ is " +
                      std::to_string(rate.total_half_width / rate.total) + ", allowed " +
                      std::to_string(budget.max_relative_half_width));
  }
  const double two_nu = 2.0 * model.nu;
  CriticalEstimate out;
  out.pi_plus = rate.total;
  out.pi_plus_half_width = rate.total_half_width;
  out.pi_spontaneous = rate.spontaneous;
  out.w_I = 1.0 / (two_nu * rate.total);
  out.low = 1.0 / (two_nu * (rate.total + rate.total_half_width));
  out.high = rate.total > rate.total_half_width ? 1.0 / (two_nu * (rate.total - rate.total_half_width))
                                                : INFINITY;
  out.events = stats.events;
  return out;
}

BalanceReport check_balance(const FiringStats& stats, double w_E, int K_E,
                            const DistributionSpec& eta2, double burn_in_fraction,
                            std::uint64_t min_samples) {
  const FrequencyEstimate est = estimate_frequencies(stats, burn_in_fraction);
  const std::size_t first = est.first_bin;

  std::vector<double> sum_probability(stats.sites, 0.0), sum_excess(stats.sites, 0.0);
  BalanceReport out;
  out.min_samples = UINT64_MAX;
  std::size_t pairs = 0;
  for (const auto& [pair, bins] : stats.z_summary) {
    ZAccumulator acc;
    for (std::size_t b = first; b < stats.bins; ++b) acc += bins[b];
    out.min_samples = std::min(out.min_samples, acc.count);
    if (acc.count < min_samples) {
      throw BudgetError("only " + std::to_string(acc.count) + " Z samples for pair (" +
                        std::to_string(pair.first) + ", " + std::to_string(pair.second) +
                        "), need " + std::to_string(min_samples));
    }
    const double p = static_cast<double>(acc.below) / static_cast<double>(acc.count);
    const double e = acc.excess / static_cast<double>(acc.count);
    sum_probability[pair.first] += p;
    sum_excess[pair.first] += e;
    out.mean_probability += p;
    out.mean_excess += e;
    ++pairs;
  }
  if (pairs == 0 && w_E > 0.0) throw BudgetError("no excitatory impulses were recorded");
  if (pairs == 0) out.min_samples = 0;
  if (pairs > 0) {
    out.mean_probability /= static_cast<double>(pairs);
    out.mean_excess /= static_cast<double>(pairs);
  }

  const double drift_term = static_cast<double>(K_E) * w_E * mean_of(eta2);
  std::size_t active = 0;
  for (Site i = 0; i < stats.sites; ++i) {
    if (!stats.active[i]) continue;
    ++active;
    const double lhs = est.spontaneous[i] * (1.0 - drift_term + sum_probability[i] + sum_excess[i]);
    out.residual += lhs - 1.0;
    out.max_abs_site_residual = std::max(out.max_abs_site_residual, std::abs(lhs - 1.0));
    out.pi_spontaneous += est.spontaneous[i];
    out.pi_total += est.total[i];
  }
  if (active == 0) throw ConfigError("no active sites in statistics");
  out.residual /= static_cast<double>(active);
  out.pi_spontaneous /= static_cast<double>(active);
  out.pi_total /= static_cast<double>(active);
  return out;
}

double linear_approx_wI(double w_E, int nu, int K_E) {
  const double two_nu = 2.0 * nu;
  return 1.0 / two_nu - (static_cast<double>(K_E) / two_nu) * w_E;
}

}  // namespace hourglass

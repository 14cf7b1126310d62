#pragma once

#include <cstdint>
#include <vector>

#include "hourglass/network.hpp"
#include "hourglass/random.hpp"
#include "hourglass/stats.hpp"
#include "hourglass/topology.hpp"

namespace hourglass {

/// Torus geometry plus the unit-mean distributions of Y, eta_1, eta_2 and
/// the initial countdowns.
struct TorusModel {
  int nu = 1;
  int N = 5;
  int K_E = 2;
  std::vector<LatticeVector> offsets;
  DistributionSpec Y = DistributionSpec::exponential(1.0);
  DistributionSpec eta1 = DistributionSpec::exponential(1.0);
  DistributionSpec eta2 = DistributionSpec::exponential(1.0);
  DistributionSpec X0 = DistributionSpec::exponential(1.0);
};

/// Full torus network at (w_I, w_E). Rejects Y, eta_1, eta_2 without unit mean.
Network torus_network(const TorusModel& model, double w_I, double w_E);

/// The excitatory subsystem: the torus network restricted to Lambda_0 (no
/// inhibitory link connects two sites of Lambda_0).
Network lambda0_network(const TorusModel& model, double w_E);

struct SimulationBudget {
  double horizon = 1e5;
  double burn_in = 0.2;
  std::size_t bins = 20;
  /// Largest acceptable 95% half-width of pi^+ relative to its value.
  double max_relative_half_width = 0.02;
  std::uint64_t seed = 1;
};

struct CriticalEstimate {
  double w_I = 0.0;   // 1 / (2 nu pi^+)
  double low = 0.0;   // from the upper end of the pi^+ interval
  double high = 0.0;  // from the lower end
  double pi_plus = 0.0;
  double pi_plus_half_width = 0.0;
  double pi_spontaneous = 0.0;
  std::uint64_t events = 0;
};

/// Simulates the Lambda_0 subsystem at w_E and converts its total firing
/// frequency into the critical inhibition strength. Throws BudgetError if
/// the interval on pi^+ is wider than the budget allows.
CriticalEstimate critical_wI(const TorusModel& model, double w_E, const SimulationBudget& budget);

/// pi^+ with its 95% batch-means half-width, averaged over the active sites.
struct PooledRate {
  double total = 0.0;
  double total_half_width = 0.0;
  double spontaneous = 0.0;
};

PooledRate pooled_rate(const FiringStats& stats, double burn_in_fraction);

struct BalanceReport {
  /// Mean over active sites of (balance left-hand side - 1).
  double residual = 0.0;
  double max_abs_site_residual = 0.0;
  double pi_spontaneous = 0.0;
  double pi_total = 0.0;
  /// Mean per pair of P{Z <= w_E eta_2} and E(w_E eta_2 - Z)^+.
  double mean_probability = 0.0;
  double mean_excess = 0.0;
  std::uint64_t min_samples = 0;
};

/// Evaluates pi0 * (1 - K_E w_E E eta_2 + sum_j P{Z_ij <= theta} +
/// sum_j E(theta - Z_ij)^+) from a run of the excitatory subsystem, using
/// every recorded impulse after burn-in. Throws BudgetError when some pair
/// has fewer than `min_samples` observations.
BalanceReport check_balance(const FiringStats& stats, double w_E, int K_E,
                            const DistributionSpec& eta2, double burn_in_fraction = 0.2,
                            std::uint64_t min_samples = 1000);

/// 1/(2 nu) - (K_E / (2 nu)) w_E.
double linear_approx_wI(double w_E, int nu, int K_E);

}  // namespace hourglass

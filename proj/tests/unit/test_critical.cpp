#include <cmath>

#include "doctest.h"
#include "hourglass/analysis.hpp"
#include "hourglass/critical.hpp"
#include "hourglass/errors.hpp"

using namespace hourglass;

TEST_CASE("linear approximation of the critical curve") {
  CHECK(linear_approx_wI(0.0, 1, 2) == 0.5);
  CHECK(linear_approx_wI(0.1, 1, 2) == doctest::Approx(0.4));
  CHECK(linear_approx_wI(0.0, 2, 2) == 0.25);
  CHECK(linear_approx_wI(0.2, 3, 3) == doctest::Approx(1.0 / 6.0 - 0.1));
}

TEST_CASE("the excitatory subsystem lives on the even sublattice") {
  TorusModel model;
  const Network sub = lambda0_network(model, 0.1);
  CHECK(sub.active_sites() == SiteSet{0, 2, 4, 6, 8});
  for (Site i : sub.active_sites()) {
    for (const Link& link : sub.connections.outgoing(i)) {
      if (sub.active[link.target]) CHECK(link.sign == Sign::Excitatory);
    }
  }
  model.Y = DistributionSpec::exponential(2.0);
  CHECK_THROWS_AS(torus_network(model, 0.3, 0.1), ConfigError);
}

TEST_CASE("without excitation the critical strength is 1/(2 nu)") {
  SimulationBudget budget;
  budget.horizon = 2e4;
  SUBCASE("one dimension") {
    const CriticalEstimate e = critical_wI(TorusModel{}, 0.0, budget);
    CHECK(e.w_I == doctest::Approx(0.5).epsilon(0.02));
    CHECK(e.low < e.w_I);
    CHECK(e.w_I < e.high);
    CHECK(e.pi_spontaneous == e.pi_plus);
  }
  SUBCASE("two dimensions") {
    TorusModel model;
    model.nu = 2;
    model.N = 3;
    const CriticalEstimate e = critical_wI(model, 0.0, budget);
    CHECK(e.w_I == doctest::Approx(0.25).epsilon(0.02));
  }
}

TEST_CASE("excitation lowers the critical strength") {
  SimulationBudget budget;
  budget.horizon = 2e4;
  const CriticalEstimate e0 = critical_wI(TorusModel{}, 0.0, budget);
  const CriticalEstimate e1 = critical_wI(TorusModel{}, 0.1, budget);
  CHECK(e1.pi_plus > e0.pi_plus);
  CHECK(e1.w_I < e0.w_I);
  CHECK(e1.pi_spontaneous < e1.pi_plus);
}

TEST_CASE("critical estimate budget") {
  SimulationBudget budget;
  budget.horizon = 20.0;
  CHECK_THROWS_AS(critical_wI(TorusModel{}, 0.1, budget), BudgetError);
  budget.horizon = 0.0;
  CHECK_THROWS_AS(critical_wI(TorusModel{}, 0.1, budget), ConfigError);
  budget.horizon = 100.0;
  CHECK_THROWS_AS(critical_wI(TorusModel{}, -0.1, budget), ConfigError);
}

TEST_CASE("balance identity of the excitatory subsystem") {
  TorusModel model;
  RecorderOptions rec;
  rec.bins = 20;
  rec.reservoir = 0;
  SUBCASE("no excitation") {
    const FiringStats stats = simulate_stats(lambda0_network(model, 0.0), model.X0, 3, 2e4, rec);
    const BalanceReport r = check_balance(stats, 0.0, model.K_E, model.eta2);
    CHECK(std::abs(r.residual) < 0.02);
    CHECK(r.min_samples == 0);
  }
  SUBCASE("with excitation") {
    const double w_E = 0.1;
    const FiringStats stats = simulate_stats(lambda0_network(model, w_E), model.X0, 3, 4e4, rec);
    const BalanceReport r = check_balance(stats, w_E, model.K_E, model.eta2);
    CHECK(std::abs(r.residual) < 0.02);
    CHECK(r.pi_total > r.pi_spontaneous);
    CHECK(r.mean_probability > 0.0);
    CHECK(r.min_samples > 1000);
    CHECK_THROWS_AS(check_balance(stats, w_E, model.K_E, model.eta2, 0.2, 1000000000),
                    BudgetError);
  }
}

// Python bindings. Configurations cross the boundary as JSON text so the
// Python side needs no mirror of the config structs.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "hourglass/analysis.hpp"
#include "hourglass/classify.hpp"
#include "hourglass/config.hpp"
#include "hourglass/critical.hpp"
#include "hourglass/errors.hpp"
#include "hourglass/experiments.hpp"
#include "hourglass/patterns.hpp"

namespace py = pybind11;
using namespace hourglass;

namespace {

std::vector<std::vector<Site>> as_lists(const std::vector<SiteSet>& sets) {
  return {sets.begin(), sets.end()};
}

py::dict simulate(const std::string& config_text, std::optional<std::uint64_t> seed,
                  std::optional<double> horizon) {
  SimulateOverrides overrides;
  overrides.seed = seed;
  overrides.horizon = horizon;
  const ExperimentConfig config = apply_overrides(parse_config(config_text), overrides);
  SimulationOutcome o;
  {
    py::gil_scoped_release release;
    o = run_simulation(config);
  }
  py::dict out;
  out["config_hash"] = o.hash;
  out["seed"] = o.config.run.seed;
  out["events"] = o.stats.events;
  out["window"] = o.frequencies.window;
  out["pi"] = o.frequencies.total;
  out["pi0"] = o.frequencies.spontaneous;
  out["pie"] = o.frequencies.induced;
  out["verdict"] = std::string(to_string(o.empirical.verdict));
  out["analytic_verdict"] =
      o.analytic ? py::object(py::str(std::string(to_string(o.analytic->verdict)))) : py::none();
  out["silent"] = std::vector<Site>(o.silent.begin(), o.silent.end());
  out["pattern"] = std::vector<int>(o.pattern.begin(), o.pattern.end());
  return out;
}

py::dict traps(const std::string& config_text) {
  const TrapsResult r = find_traps(parse_config(config_text));
  py::dict out;
  out["method"] = r.method;
  out["traps"] = as_lists(r.traps);
  out["agree"] = r.agree ? py::object(py::bool_(*r.agree)) : py::none();
  return out;
}

py::tuple classify(const std::string& config_text, std::optional<std::vector<Site>> sites) {
  const Network net = build_network(parse_config(config_text));
  const SiteSet S = sites ? make_site_set(*sites) : net.active_sites();
  const Classification c = classify_inductive(net, S, Method::Analytic);
  return py::make_tuple(std::string(to_string(c.verdict)),
                        std::vector<Site>(c.witness.begin(), c.witness.end()));
}

bool trap_check(const std::string& config_text, const std::vector<Site>& sites) {
  const Network net = build_network(parse_config(config_text));
  return is_trap(net, make_site_set(sites), Method::Analytic);
}

std::vector<double> analytic_pi(const std::vector<std::vector<double>>& magnitudes, double a) {
  const std::size_t n = magnitudes.size();
  std::vector<SiteSet> inh(n), exc(n);
  for (Site i = 0; i < n; ++i) {
    if (magnitudes[i].size() != n) throw ConfigError("magnitude matrix must be square");
    for (Site j = 0; j < n; ++j) {
      if (i != j && (magnitudes[i][j] != 0.0 || magnitudes[j][i] != 0.0)) inh[i].push_back(j);
    }
  }
  Topology topo(TorusGeometry{}, inh, exc);
  const Network net = make_network(std::move(topo),
                                   inhibitory_connections(magnitudes, MagnitudeKind::Deterministic),
                                   DistributionSpec::exponential(a));
  return analytic_pi_inhibitory(net, all_sites(n));
}

std::vector<std::vector<Site>> block_traps(int p, int k, double a, double b, double c) {
  std::vector<std::array<int, 2>> pairing;
  for (int n = 0; n < p; ++n) pairing.push_back({2 * n, 2 * n + 1});
  return as_lists(enumerate_traps(*build_block_network(p, k, pairing).blocks(), {a, b, c}));
}

py::dict learn_patterns(const std::vector<std::vector<int>>& patterns, double a, double A, double B) {
  std::vector<Pattern> list;
  for (const auto& xi : patterns) {
    Pattern p;
    for (int v : xi) {
      if (v != 1 && v != -1) throw ConfigError("pattern entries must be -1 or +1");
      p.push_back(static_cast<std::int8_t>(v));
    }
    list.push_back(std::move(p));
  }
  const LearnResult r = learn(list, a, A, B);
  const BlockConstants k = r.learned.constants();
  py::dict out;
  out["stored"] = r.report.stored;
  out["magnitude"] = r.learned.magnitude;
  out["constants"] = py::make_tuple(k.a, k.b, k.c);
  out["traps"] = as_lists(r.report.expected);
  out["config"] = render_config(r.config);
  return out;
}

py::dict critical(double w_E, int nu, int N, int K_E, double horizon, std::uint64_t seed) {
  TorusModel model;
  model.nu = nu;
  model.N = N;
  model.K_E = K_E;
  SimulationBudget budget;
  budget.horizon = horizon;
  budget.seed = seed;
  CriticalEstimate e;
  {
    py::gil_scoped_release release;
    e = critical_wI(model, w_E, budget);
  }
  py::dict out;
  out["w_I"] = e.w_I;
  out["low"] = e.low;
  out["high"] = e.high;
  out["pi_plus"] = e.pi_plus;
  out["pi_plus_half_width"] = e.pi_plus_half_width;
  out["events"] = e.events;
  return out;
}

py::dict balance(const std::string& config_text, double w_E) {
  const ExperimentConfig config = parse_config(config_text);
  BalanceOutcome b;
  {
    py::gil_scoped_release release;
    b = run_balance(config, w_E);
  }
  py::dict out;
  out["residual"] = b.balance.residual;
  out["pi_spontaneous"] = b.balance.pi_spontaneous;
  out["pi_total"] = b.balance.pi_total;
  out["events"] = b.events;
  return out;
}

}  // namespace

PYBIND11_MODULE(hourglass, m) {
  m.doc() = "Event-driven simulation and analysis of hourglass networks.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("parse_config", [](const std::string& text) { return render_config(parse_config(text)); },
        py::arg("text"), "Validates a config and returns its canonical JSON text.");
  m.def("config_hash", [](const std::string& text) { return config_hash(parse_config(text)); },
        py::arg("text"));
  m.def("simulate", &simulate, py::arg("config"), py::arg("seed") = py::none(),
        py::arg("horizon") = py::none());
  m.def("traps", &traps, py::arg("config"));
  m.def("classify", &classify, py::arg("config"), py::arg("sites") = py::none(),
        "Analytic inductive verdict and trap witness for a set of sites.");
  m.def("is_trap", &trap_check, py::arg("config"), py::arg("sites"));
  m.def("analytic_pi", &analytic_pi, py::arg("magnitudes"), py::arg("a") = 1.0,
        "Limiting frequencies of an all-inhibitory network; magnitudes[i][j] is E|theta_ij|.");
  m.def("block_traps", &block_traps, py::arg("p"), py::arg("k"), py::arg("a") = 1.0,
        py::arg("b") = 0.5, py::arg("c") = 2.0);
  m.def("learn", &learn_patterns, py::arg("patterns"), py::arg("a") = 1.0, py::arg("A") = 0.6,
        py::arg("B") = 0.7);
  m.def("critical_wI", &critical, py::arg("w_E"), py::arg("nu") = 1, py::arg("N") = 5,
        py::arg("K_E") = 2, py::arg("horizon") = 1e5, py::arg("seed") = 1);
  m.def("linear_approx_wI", &linear_approx_wI, py::arg("w_E"), py::arg("nu") = 1, py::arg("K_E") = 2);
  m.def("balance", &balance, py::arg("config"), py::arg("w_E"));
}

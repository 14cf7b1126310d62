#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "hourglass/errors.hpp"
#include "hourglass/experiments.hpp"

using namespace hourglass;

namespace {

const std::string kConfigs = std::string(HOURGLASS_SOURCE_DIR) + "/configs/";

ExperimentConfig block_config(const std::string& out) {
  ExperimentConfig cfg = load_config(kConfigs + "block_p2k2.json");
  cfg.run.horizon = 2000.0;
  cfg.output.dir = out;
  return cfg;
}

SweepSpec small_sweep(const std::string& out) {
  SweepSpec spec;
  spec.base = parse_config(R"({"topology": {"torus": {"nu": 1, "N": 5, "K_E": 2}},
                               "connections": {"w_I": 0.3, "w_E": 0.0},
                               "run": {"horizon": 1500}})");
  spec.grid = {{"w_I", {0.3, 0.7}}, {"w_E", {0.0, 0.1}}};
  spec.replications = 3;
  spec.seed_base = 11;
  spec.out = out;
  return spec;
}

}  // namespace

TEST_CASE("a block simulation ends in an enumerated trap") {
  const SimulationOutcome o = run_simulation(block_config("unused"));
  CHECK(o.empirical.verdict == Verdict::Transient);
  REQUIRE(o.analytic.has_value());
  CHECK(o.analytic->verdict == Verdict::Transient);
  const auto traps = find_traps(o.config).traps;
  CHECK(std::find(traps.begin(), traps.end(), o.silent) != traps.end());
  CHECK(trap_from_pattern(o.pattern) == o.silent);
  CHECK(o.hash == config_hash(o.config));
}

TEST_CASE("simulate writes identical files on every run") {
  const std::string dir = testing::scratch_dir("simulate");
  ExperimentConfig cfg = block_config(dir);
  cfg.output.trace = true;
  const auto first = cmd_simulate(cfg);
  REQUIRE(first.size() == 5);
  std::vector<std::string> contents;
  for (const auto& path : first) contents.push_back(read_file(path));
  const auto second = cmd_simulate(cfg);
  CHECK(second == first);
  for (std::size_t i = 0; i < first.size(); ++i) CHECK(read_file(second[i]) == contents[i]);

  const std::string stamp = "# config_hash=" + config_hash(cfg) + " seed=1\n";
  CHECK(contents[0].rfind(stamp + "site,pi0,pie_total,pi_total\n", 0) == 0);
  CHECK(contents[1].find("\"verdict\"") != std::string::npos);
  CHECK(contents[1].find("\"inductive-analytic\"") != std::string::npos);
  CHECK(contents[3].rfind(stamp, 0) == 0);
  CHECK(contents[4].find("time,primary_site,cascade_sites\n") == stamp.size());

  SimulateOverrides o;
  o.seed = 5;
  o.horizon = 100.0;
  o.out = dir + "/other";
  const ExperimentConfig changed = apply_overrides(cfg, o);
  CHECK(changed.run.seed == 5);
  CHECK(changed.run.horizon == 100.0);
  CHECK(changed.output.dir == dir + "/other");
  CHECK(config_hash(changed) != config_hash(cfg));
}

TEST_CASE("sweep results do not depend on the thread count") {
  const SweepSpec spec = small_sweep("unused");
  const SweepResult one = run_sweep(spec, 1);
  const SweepResult three = run_sweep(spec, 3);
  REQUIRE(one.runs.size() == 12);
  REQUIRE(one.cells.size() == 4);
  CHECK(one.axes == std::vector<std::string>{"w_I", "w_E"});
  for (std::size_t i = 0; i < one.runs.size(); ++i) {
    CHECK(one.runs[i].params == three.runs[i].params);
    CHECK(one.runs[i].seed == three.runs[i].seed);
    CHECK(one.runs[i].transient == three.runs[i].transient);
    CHECK(one.runs[i].mean_pi == three.runs[i].mean_pi);
  }
  for (const SweepCell& cell : one.cells) {
    CHECK(cell.runs == 3);
    CHECK(cell.ci_low <= cell.mean_pi);
    CHECK(cell.mean_pi <= cell.ci_high);
    CHECK(cell.transient_fraction == (cell.params[0] > 0.5 ? 1.0 : 0.0));
  }
}

TEST_CASE("sweep files") {
  const std::string dir = testing::scratch_dir("sweep");
  SweepSpec spec = small_sweep(dir);
  const SweepSpec parsed = parse_sweep(render_sweep(spec));
  CHECK(parsed.grid == spec.grid);
  CHECK(parsed.replications == 3);
  CHECK(config_hash(parsed.base) == config_hash(spec.base));

  spec.grid = {{"w_I", {}}, {"w_E", {0.0}}};
  const auto files = cmd_sweep(spec);
  const std::string head = "# config_hash=" + config_hash(spec.base) + " seed_base=11\n";
  CHECK(read_file(files[0]) == head + "w_I,w_E,replication,transient\n");
  CHECK(read_file(files[1]) == head + "cell,w_I,w_E,runs,transient_fraction,mean_pi,ci_low,ci_high\n");
  CHECK(read_file(files[2]).find("\"linear_slope\": -1.0") != std::string::npos);

  CHECK_THROWS_AS(parse_sweep(R"({"base": {"topology": {"torus": {"nu": 1, "N": 5, "K_E": 2}},
                                           "connections": {"w_I": 0.3}}, "grid": {"c": [1]}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_sweep(R"({"base": {"topology": {"torus": {"nu": 1, "N": 5, "K_E": 2}},
                                           "connections": {"w_I": 0.3}}, "replications": 0})"),
                  ConfigError);
}

TEST_CASE("trap listing") {
  const ExperimentConfig cfg = load_config(kConfigs + "block_p3k2.json");
  const TrapsResult r = find_traps(cfg);
  CHECK(r.traps.size() == 8);
  CHECK(r.method == "enumeration+brute-force");
  REQUIRE(r.agree.has_value());
  CHECK(*r.agree);

  ExperimentConfig torus = parse_config(R"({"topology": {"torus": {"nu": 1, "N": 3, "K_E": 2}},
                                            "connections": {"w_I": 0.7}})");
  const TrapsResult t = find_traps(torus);
  CHECK(t.method == "brute-force");
  CHECK(std::find(t.traps.begin(), t.traps.end(), SiteSet{1, 3, 5}) != t.traps.end());
}

TEST_CASE("learning and then listing traps returns the patterns") {
  const auto patterns = load_patterns(kConfigs + "patterns_p2k2.json");
  const LearnResult learned = learn(patterns, 1.0, 0.6, 0.7);
  CHECK(learned.report.stored);
  std::vector<SiteSet> expected;
  for (const Pattern& xi : patterns) expected.push_back(trap_from_pattern(xi));
  std::sort(expected.begin(), expected.end());
  auto found = find_traps(learned.config).traps;
  std::sort(found.begin(), found.end());
  CHECK(found == expected);

  const std::string dir = testing::scratch_dir("learn");
  const auto files = cmd_learn(kConfigs + "patterns_p2k2.json", 1.0, 0.6, 0.7, dir);
  ExperimentConfig expected_config = learned.config;
  expected_config.output.dir = dir;
  CHECK(load_config(files[0]) == expected_config);
  CHECK_THROWS_WITH_AS(learn(patterns, 1.0, 0.2, 0.3), doctest::Contains("1 < B + A"), ConfigError);
  CHECK_THROWS_AS(cmd_learn(dir + "/missing.json", 1.0, 0.6, 0.7, dir), IoError);
}

TEST_CASE("pattern files") {
  CHECK(parse_patterns("[[1, -1], [-1, 1]]").size() == 2);
  CHECK(parse_patterns(R"({"patterns": [[1, -1], [-1, 1]]})").size() == 2);
  CHECK_THROWS_AS(parse_patterns("[[1, 0]]"), ConfigError);
  CHECK_THROWS_AS(parse_patterns(R"({"other": []})"), ConfigError);
}

TEST_CASE("balance needs a torus") {
  CHECK_THROWS_AS(run_balance(block_config("unused"), 0.1), ConfigError);
  ExperimentConfig torus = load_config(kConfigs + "torus_nu1.json");
  torus.run.horizon = 4e4;
  const BalanceOutcome b = run_balance(torus, 0.1);
  CHECK(std::abs(b.balance.residual) < 0.02);
  CHECK(b.w_E == 0.1);
}

#include "hourglass/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <limits>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "hourglass/critical.hpp"
#include "hourglass/dynamics.hpp"
#include "hourglass/errors.hpp"
#include "hourglass/format.hpp"
#include "json_io.hpp"

namespace hourglass {

namespace {

using json_io::json;

constexpr std::size_t kAnalyticSiteLimit = 16;

std::string path_in(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::string stamp(const std::string& hash, std::uint64_t seed) {
  return "# config_hash=" + hash + " seed=" + std::to_string(seed) + "\n";
}

json sites_json(const SiteSet& sites) { return json(std::vector<Site>(sites.begin(), sites.end())); }

json pattern_json(const Pattern& pattern) {
  json out = json::array();
  for (auto v : pattern) out.push_back(static_cast<int>(v));
  return out;
}

/// Rows of the first torus coordinate for nu >= 2, one line otherwise.
std::string render_layout(const Pattern& pattern, const ExperimentConfig& config) {
  const auto* t = std::get_if<TorusSection>(&config.topology);
  const std::string flat = render_pattern(pattern);
  if (t == nullptr || t->nu < 2) return flat + "\n";
  const std::size_t side = static_cast<std::size_t>(2 * t->N);
  std::string out;
  for (std::size_t start = 0; start < flat.size(); start += side) {
    if (start > 0 && start % (side * side) == 0) out += "\n";
    out += flat.substr(start, side) + "\n";
  }
  return out;
}

bool inhibitory_within(const Network& net, const SiteSet& sites) {
  for (Site i : sites) {
    for (const Link& link : net.connections.outgoing(i)) {
      if (link.sign != Sign::Inhibitory && contains(sites, link.target)) return false;
    }
  }
  return true;
}

std::vector<std::string> axes_for(const ExperimentConfig& config) {
  if (std::holds_alternative<TorusSection>(config.topology)) return {"w_I", "w_E"};
  return {"a", "b", "c"};
}

double axis_value(const ExperimentConfig& config, const std::string& axis) {
  const ConnectionsSection& c = config.connections;
  if (axis == "w_I") return c.w_I;
  if (axis == "w_E") return c.w_E;
  if (axis == "a") return c.a;
  if (axis == "b") return c.b;
  return c.c;
}

void set_axis(ExperimentConfig& config, const std::string& axis, double value) {
  ConnectionsSection& c = config.connections;
  if (axis == "w_I") {
    c.w_I = value;
  } else if (axis == "w_E") {
    c.w_E = value;
  } else if (axis == "a") {
    // E Y follows a so the config stays consistent.
    c.a = value;
    config.distributions.Y = config.distributions.Y.scaled(value / config.distributions.Y.mean());
  } else if (axis == "b") {
    c.b = value;
  } else {
    c.c = value;
  }
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ",";
    out += fields[i];
  }
  return out + "\n";
}

/// Matrix connections whose values are c on partner-block pairs and b
/// elsewhere; returns (b, c).
std::optional<std::pair<double, double>> block_pattern(const ExperimentConfig& config,
                                                       const BlockStructure& bs) {
  const auto& m = config.connections.matrix;
  std::optional<double> b, c;
  for (std::size_t x = 0; x < m.size(); ++x) {
    for (std::size_t y = 0; y < m.size(); ++y) {
      if (x == y) continue;
      auto& slot = bs.partner(bs.block_of[x]) == bs.block_of[y] ? c : b;
      if (!slot) slot = m[x][y];
      if (*slot != m[x][y]) return std::nullopt;
    }
  }
  if (!b || !c) return std::nullopt;
  return std::make_pair(*b, *c);
}

}  // namespace

SimulationOutcome run_simulation(const ExperimentConfig& config, std::ostream* trace) {
  validate_config(config);
  SimulationOutcome out;
  out.config = config;
  out.hash = config_hash(config);
  const RunSection& run = config.run;

  const Network net = build_network(config);
  const Engine engine(net);
  SimState state = run.initial ? engine.init_state(*run.initial, run.seed)
                               : engine.init_state(config.distributions.X0, run.seed);
  RecorderOptions rec;
  rec.bins = run.bins;
  rec.reservoir = run.reservoir;
  rec.seed = run.seed;
  StatsRecorder stats_recorder(net, 0.0, run.horizon, rec);
  if (trace != nullptr) {
    TraceRecorder trace_recorder(*trace);
    RecorderChain chain({&stats_recorder, &trace_recorder});
    engine.run(state, run.horizon, chain);
  } else {
    engine.run(state, run.horizon, stats_recorder);
  }
  out.stats = stats_recorder.take();
  out.frequencies = estimate_frequencies(out.stats, run.burn_in);
  out.empirical = empirical_verdict(out.stats, run.heuristic);

  const SiteSet active = net.active_sites();
  if (active.size() <= kAnalyticSiteLimit && inhibitory_within(net, active)) {
    out.analytic = classify_inductive(net, active, Method::Analytic);
  }

  std::vector<Site> silent(out.empirical.silent.begin(), out.empirical.silent.end());
  for (Site s = 0; s < net.size(); ++s) {
    if (!net.active[s]) silent.push_back(s);
  }
  out.silent = make_site_set(std::move(silent));
  out.pattern = pattern_from_trap(out.silent, net.size());
  if (!out.empirical.active.empty()) {
    out.field = second_vector_field(net, out.empirical.active, rates_of(out.frequencies));
  } else {
    out.field.drift.assign(net.size(), std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

ExperimentConfig apply_overrides(ExperimentConfig config, const SimulateOverrides& overrides) {
  if (overrides.seed) config.run.seed = *overrides.seed;
  if (overrides.horizon) config.run.horizon = *overrides.horizon;
  if (overrides.out) config.output.dir = *overrides.out;
  validate_config(config);
  return config;
}

std::vector<std::string> cmd_simulate(const ExperimentConfig& config) {
  std::ostringstream trace;
  const SimulationOutcome o = run_simulation(config, config.output.trace ? &trace : nullptr);
  const std::string& dir = config.output.dir;
  const std::uint64_t seed = config.run.seed;
  std::vector<std::string> written;

  std::string csv = stamp(o.hash, seed) + "site,pi0,pie_total,pi_total\n";
  for (Site i = 0; i < o.stats.sites; ++i) {
    csv += csv_row({std::to_string(i), format_number(o.frequencies.spontaneous[i]),
                    format_number(o.frequencies.induced[i]), format_number(o.frequencies.total[i])});
  }
  written.push_back(path_in(dir, "frequencies.csv"));
  write_file(written.back(), csv);

  json report;
  report["config_hash"] = o.hash;
  report["seed"] = seed;
  report["config"] = json_io::config_to_json(config);
  report["window"] = {{"t_start", o.stats.t_start},
                      {"t_end", o.stats.t_end},
                      {"bins", o.stats.bins},
                      {"burn_in", config.run.burn_in}};
  report["events"] = o.stats.events;
  json empirical = {{"verdict", std::string(to_string(o.empirical.verdict))},
                    {"label", "heuristic"},
                    {"active", sites_json(o.empirical.active)},
                    {"silent", sites_json(o.empirical.silent)},
                    {"half_window", o.empirical.half_window}};
  report["empirical"] = empirical;
  if (o.analytic) {
    report["analytic"] = {{"verdict", std::string(to_string(o.analytic->verdict))},
                          {"label", "inductive-analytic"},
                          {"witness", sites_json(o.analytic->witness)}};
    report["verdict"] = report["analytic"];
  } else {
    report["analytic"] = nullptr;
    report["verdict"] = {{"verdict", std::string(to_string(o.empirical.verdict))},
                         {"label", "heuristic"},
                         {"witness", o.empirical.verdict == Verdict::Transient
                                         ? sites_json(o.empirical.silent)
                                         : json::array()}};
  }
  json pi = json::array();
  for (Site i = 0; i < o.stats.sites; ++i) {
    pi.push_back({{"site", i},
                  {"pi0", o.frequencies.spontaneous[i]},
                  {"pie_total", o.frequencies.induced[i]},
                  {"pi_total", o.frequencies.total[i]},
                  {"pi_total_half_width", o.frequencies.total_half_width[i]}});
  }
  report["pi"] = pi;
  json field = json::array();
  for (Site j : o.field.outside) field.push_back({{"site", j}, {"drift", o.field.drift[j]}});
  report["field"] = {{"W", sites_json(o.empirical.active)}, {"values", field}};
  written.push_back(path_in(dir, "report.json"));
  write_file(written.back(), json_io::dump(report));

  json pattern = {{"config_hash", o.hash},
                  {"seed", seed},
                  {"label", "heuristic"},
                  {"window", {o.stats.t_start + o.empirical.half_window, o.stats.t_end}},
                  {"silent", sites_json(o.silent)},
                  {"pattern", pattern_json(o.pattern)}};
  written.push_back(path_in(dir, "pattern.json"));
  write_file(written.back(), json_io::dump(pattern));
  written.push_back(path_in(dir, "pattern.txt"));
  write_file(written.back(), stamp(o.hash, seed) + render_layout(o.pattern, config));

  if (config.output.trace) {
    written.push_back(path_in(dir, "trace.csv"));
    write_file(written.back(), stamp(o.hash, seed) + trace.str());
  }
  return written;
}

SweepSpec parse_sweep(std::string_view text) {
  const json value = json_io::parse_text(text, "sweep");
  const json_io::ObjectReader r(value, "");
  r.only({"base", "grid", "replications", "seed_base", "out"});
  SweepSpec spec;
  spec.base = json_io::config_from_json(r.at("base"), "base");
  validate_config(spec.base);
  const std::vector<std::string> axes = axes_for(spec.base);
  if (r.has("grid")) {
    const json_io::ObjectReader g(r.at("grid"), "grid");
    for (const auto& axis : axes) {
      if (!g.has(axis)) continue;
      const json& values = g.at(axis);
      if (!values.is_array()) json_io::fail(g.child(axis), "expected an array of numbers");
      std::vector<double> list;
      for (std::size_t i = 0; i < values.size(); ++i) {
        list.push_back(json_io::as_number(values[i], g.child(axis) + "[" + std::to_string(i) + "]"));
      }
      spec.grid.emplace_back(axis, std::move(list));
    }
    for (const auto& [key, _] : r.at("grid").items()) {
      if (std::find(axes.begin(), axes.end(), key) == axes.end()) {
        json_io::fail(g.child(key), "not a sweep axis for this topology");
      }
    }
  }
  const std::uint64_t reps = r.unsigned_integer_or("replications", 1);
  if (reps < 1) json_io::fail("replications", "must be at least 1");
  spec.replications = reps;
  spec.seed_base = r.unsigned_integer_or("seed_base", 1);
  spec.out = r.string_or("out", "sweep");
  if (spec.out.empty()) json_io::fail("out", "must not be empty");
  return spec;
}

SweepSpec load_sweep(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_sweep(text);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string render_sweep(const SweepSpec& spec) {
  json grid = json::object();
  for (const auto& [axis, values] : spec.grid) grid[axis] = values;
  return json_io::dump({{"base", json_io::config_to_json(spec.base)},
                        {"grid", grid},
                        {"replications", spec.replications},
                        {"seed_base", spec.seed_base},
                        {"out", spec.out}});
}

std::size_t worker_count(std::size_t jobs) {
  std::size_t n = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HOURGLASS_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min<std::size_t>(n, cap);
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

SweepResult run_sweep(const SweepSpec& spec, std::size_t threads) {
  SweepResult result;
  result.axes = axes_for(spec.base);

  // Cartesian product in axis order; an empty value list empties the grid.
  std::vector<std::vector<double>> axis_values;
  bool empty = spec.grid.empty();
  for (const auto& axis : result.axes) {
    const auto it = std::find_if(spec.grid.begin(), spec.grid.end(),
                                 [&](const auto& entry) { return entry.first == axis; });
    if (it == spec.grid.end()) {
      axis_values.push_back({axis_value(spec.base, axis)});
    } else {
      if (it->second.empty()) empty = true;
      axis_values.push_back(it->second);
    }
  }
  std::vector<ExperimentConfig> cell_configs;
  if (!empty) {
    std::vector<std::size_t> index(result.axes.size(), 0);
    while (true) {
      SweepCell cell;
      ExperimentConfig config = spec.base;
      for (std::size_t a = 0; a < result.axes.size(); ++a) {
        cell.params.push_back(axis_values[a][index[a]]);
        set_axis(config, result.axes[a], axis_values[a][index[a]]);
      }
      try {
        validate_config(config);
      } catch (const ConfigError& e) {
        throw ConfigError("sweep cell " + std::to_string(result.cells.size()) + ": " + e.what());
      }
      result.cells.push_back(std::move(cell));
      cell_configs.push_back(std::move(config));
      // Odometer; the last axis varies fastest.
      bool done = true;
      for (std::size_t a = result.axes.size(); a-- > 0;) {
        if (++index[a] < axis_values[a].size()) {
          done = false;
          break;
        }
        index[a] = 0;
      }
      if (done) break;
    }
  }

  const std::size_t total = result.cells.size() * spec.replications;
  result.runs.resize(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t r = next.fetch_add(1);
      if (r >= total) return;
      try {
        SweepRun& run = result.runs[r];
        run.cell = r / spec.replications;
        run.replication = r % spec.replications;
        run.params = result.cells[run.cell].params;
        run.seed = mix_seed(spec.seed_base, r);
        ExperimentConfig config = cell_configs[run.cell];
        config.run.seed = run.seed;
        const SimulationOutcome o = run_simulation(config);
        run.verdict = o.empirical.verdict;
        run.transient = o.empirical.verdict == Verdict::Transient;
        double sum = 0.0;
        std::size_t count = 0;
        for (Site i = 0; i < o.stats.sites; ++i) {
          if (!o.stats.active[i]) continue;
          sum += o.frequencies.total[i];
          ++count;
        }
        run.mean_pi = count > 0 ? sum / static_cast<double>(count) : 0.0;
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(total);
      }
    }
  };
  if (threads == 0) threads = worker_count(total);
  threads = std::min(threads, std::max<std::size_t>(total, 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t c = 0; c < result.cells.size(); ++c) {
    SweepCell& cell = result.cells[c];
    std::vector<double> pis;
    std::size_t transient = 0;
    for (std::size_t r = 0; r < spec.replications; ++r) {
      const SweepRun& run = result.runs[c * spec.replications + r];
      transient += run.transient ? 1 : 0;
      pis.push_back(run.mean_pi);
    }
    cell.runs = pis.size();
    cell.transient_fraction = static_cast<double>(transient) / static_cast<double>(cell.runs);
    double mean = 0.0;
    for (double v : pis) mean += v;
    mean /= static_cast<double>(pis.size());
    cell.mean_pi = mean;
    if (pis.size() < 2) {
      cell.ci_low = cell.ci_high = std::numeric_limits<double>::quiet_NaN();
    } else {
      double ss = 0.0;
      for (double v : pis) ss += (v - mean) * (v - mean);
      const double hw = student_t95(pis.size() - 1) *
                        std::sqrt(ss / static_cast<double>(pis.size() - 1)) /
                        std::sqrt(static_cast<double>(pis.size()));
      cell.ci_low = mean - hw;
      cell.ci_high = mean + hw;
    }
  }

  if (result.axes.front() == "w_I") {
    std::set<double> wEs;
    for (const auto& cell : result.cells) wEs.insert(cell.params[1]);
    for (double wE : wEs) {
      std::vector<std::pair<double, double>> curve;
      for (const auto& cell : result.cells) {
        if (cell.params[1] == wE) curve.emplace_back(cell.params[0], cell.transient_fraction);
      }
      std::sort(curve.begin(), curve.end());
      CriticalPoint point{wE, std::nullopt};
      for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        const auto [w1, f1] = curve[i];
        const auto [w2, f2] = curve[i + 1];
        if (f1 < 0.5 && f2 >= 0.5) {
          point.w_I = w1 + (0.5 - f1) / (f2 - f1) * (w2 - w1);
          break;
        }
      }
      result.critical.push_back(point);
    }
    std::vector<std::pair<double, double>> xy;
    for (const auto& p : result.critical) {
      if (p.w_I) xy.emplace_back(p.w_E, *p.w_I);
    }
    if (xy.size() >= 2) {
      double mx = 0.0, my = 0.0;
      for (auto [x, y] : xy) {
        mx += x;
        my += y;
      }
      mx /= static_cast<double>(xy.size());
      my /= static_cast<double>(xy.size());
      double sxy = 0.0, sxx = 0.0;
      for (auto [x, y] : xy) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
      }
      if (sxx > 0.0) result.slope = sxy / sxx;
    }
  }
  return result;
}

std::vector<std::string> cmd_sweep(const SweepSpec& spec) {
  const SweepResult result = run_sweep(spec);
  const std::string hash = config_hash(spec.base);
  const std::string head = "# config_hash=" + hash + " seed_base=" + std::to_string(spec.seed_base) + "\n";
  std::vector<std::string> written;

  std::vector<std::string> columns = result.axes;
  columns.push_back("replication");
  columns.push_back("transient");
  std::string runs = head + csv_row(columns);
  for (const SweepRun& run : result.runs) {
    std::vector<std::string> row;
    for (double v : run.params) row.push_back(format_number(v));
    row.push_back(std::to_string(run.replication));
    row.push_back(run.transient ? "1" : "0");
    runs += csv_row(row);
  }
  written.push_back(path_in(spec.out, "runs.csv"));
  write_file(written.back(), runs);

  columns = {"cell"};
  columns.insert(columns.end(), result.axes.begin(), result.axes.end());
  for (const char* c : {"runs", "transient_fraction", "mean_pi", "ci_low", "ci_high"}) {
    columns.push_back(c);
  }
  std::string cells = head + csv_row(columns);
  for (std::size_t c = 0; c < result.cells.size(); ++c) {
    const SweepCell& cell = result.cells[c];
    std::vector<std::string> row{std::to_string(c)};
    for (double v : cell.params) row.push_back(format_number(v));
    row.push_back(std::to_string(cell.runs));
    row.push_back(format_number(cell.transient_fraction));
    row.push_back(format_number(cell.mean_pi));
    row.push_back(format_number(cell.ci_low));
    row.push_back(format_number(cell.ci_high));
    cells += csv_row(row);
  }
  written.push_back(path_in(spec.out, "cells.csv"));
  write_file(written.back(), cells);

  json critical = json::array();
  for (const auto& p : result.critical) {
    critical.push_back({{"w_E", p.w_E}, {"w_I", p.w_I ? json(*p.w_I) : json(nullptr)}});
  }
  json summary = {{"config_hash", hash},
                  {"seed_base", spec.seed_base},
                  {"sweep", json::parse(render_sweep(spec))},
                  {"cells", result.cells.size()},
                  {"runs", result.runs.size()},
                  {"label", "heuristic"},
                  {"critical", critical},
                  {"slope", result.slope ? json(*result.slope) : json(nullptr)}};
  if (const auto* t = std::get_if<TorusSection>(&spec.base.topology)) {
    summary["linear_slope"] = -static_cast<double>(t->K_E) / (2.0 * t->nu);
  }
  written.push_back(path_in(spec.out, "summary.json"));
  write_file(written.back(), json_io::dump(summary));
  return written;
}

TrapsResult find_traps(const ExperimentConfig& config) {
  validate_config(config);
  const Network net = build_network(config);
  const ConnectionsSection& c = config.connections;
  TrapsResult out;

  std::optional<BlockConstants> constants;
  const BlockStructure* bs = net.topology.blocks();
  if (c.kind == ConnectionsSection::Kind::Block) {
    constants = BlockConstants{c.a, c.b, c.c};
  } else if (c.kind == ConnectionsSection::Kind::Matrix && bs != nullptr) {
    if (const auto bc = block_pattern(config, *bs)) {
      const BlockConstants k{c.a, bc->first, bc->second};
      if (k.b > 0.0 && k.b < k.a && k.a < k.c) constants = k;
    }
  }
  // The closed form describes the whole network only.
  if (config.run.restriction) constants.reset();

  std::optional<std::vector<SiteSet>> enumerated;
  if (constants && bs != nullptr && bs->k >= 2) {
    std::vector<SiteSet> sets = enumerate_traps(*bs, *constants);
    enumerated = sets;
    out.traps = std::move(sets);
    out.method = "enumeration";
  }
  const SiteSet active = net.active_sites();
  if (active.size() <= kAnalyticSiteLimit) {
    if (!inhibitory_within(net, active)) {
      if (!enumerated) throw ConfigError("trap search needs inhibitory-only connections");
    } else {
      std::vector<SiteSet> brute = brute_force_traps(net, kAnalyticSiteLimit);
      if (enumerated) {
        std::vector<SiteSet> a = *enumerated, b = brute;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        out.agree = a == b;
        out.method = "enumeration+brute-force";
      } else {
        out.traps = std::move(brute);
        out.method = "brute-force";
      }
    }
  } else if (!enumerated) {
    throw BudgetError("brute-force trap search over " + std::to_string(active.size()) +
                      " sites exceeds the budget of " + std::to_string(kAnalyticSiteLimit));
  }
  return out;
}

std::string cmd_traps(const ExperimentConfig& config) {
  const TrapsResult result = find_traps(config);
  const std::size_t n = build_topology(config).size();
  json traps = json::array();
  for (const SiteSet& trap : result.traps) {
    const Pattern xi = pattern_from_trap(trap, n);
    traps.push_back(
        {{"sites", sites_json(trap)}, {"pattern", pattern_json(xi)}, {"ascii", render_pattern(xi)}});
  }
  const json doc = {{"config_hash", config_hash(config)},
                    {"seed", config.run.seed},
                    {"sites", n},
                    {"method", result.method},
                    {"agree", result.agree ? json(*result.agree) : json(nullptr)},
                    {"count", result.traps.size()},
                    {"traps", traps}};
  const std::string text = json_io::dump(doc);
  write_file(path_in(config.output.dir, "traps.json"), text);
  return text;
}

std::vector<Pattern> parse_patterns(std::string_view text) {
  const json value = json_io::parse_text(text, "patterns");
  const json* list = &value;
  if (value.is_object()) {
    const json_io::ObjectReader r(value, "");
    r.only({"patterns"});
    list = &r.at("patterns");
  }
  if (!list->is_array()) json_io::fail("patterns", "expected an array of patterns");
  std::vector<Pattern> out;
  for (std::size_t mu = 0; mu < list->size(); ++mu) {
    const std::string where = "patterns[" + std::to_string(mu) + "]";
    const json& row = (*list)[mu];
    if (!row.is_array()) json_io::fail(where, "expected an array of -1/+1 entries");
    Pattern xi;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const int v = json_io::as_integer(row[i], where + "[" + std::to_string(i) + "]");
      if (v != 1 && v != -1) json_io::fail(where + "[" + std::to_string(i) + "]", "must be -1 or +1");
      xi.push_back(static_cast<std::int8_t>(v));
    }
    out.push_back(std::move(xi));
  }
  return out;
}

std::vector<Pattern> load_patterns(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_patterns(text);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

LearnResult learn(const std::vector<Pattern>& patterns, double a, double A, double B) {
  LearnResult out;
  validate_learning_constants(A, B);
  out.family = infer_family(patterns);
  out.learned = hebb_connections(out.family, a, A, B);
  out.report = verify_storage_report(out.learned, out.family);

  const BlockStructure& bs = out.family.blocks;
  BlockSection blocks;
  blocks.p = bs.p;
  blocks.k = bs.k;
  for (const auto& pr : bs.pairing) blocks.pairing.push_back({pr[0] + 1, pr[1] + 1});
  bool contiguous = true;
  for (std::size_t x = 0; x < bs.block_of.size(); ++x) {
    if (bs.block_of[x] != static_cast<int>(x) / bs.k) contiguous = false;
  }
  if (!contiguous) {
    for (int m : bs.block_of) blocks.membership.push_back(m + 1);
  }
  blocks.allow_single_site_blocks = bs.k == 1;

  ExperimentConfig& config = out.config;
  config.topology = blocks;
  config.connections.kind = ConnectionsSection::Kind::Matrix;
  config.connections.a = a;
  config.connections.matrix = out.learned.magnitude;
  config.connections.magnitude = MagnitudeKind::Deterministic;
  config.distributions.Y = DistributionSpec::exponential(a);
  validate_config(config);
  return out;
}

std::vector<std::string> cmd_learn(const std::string& patterns_path, double a, double A, double B,
                                   const std::string& out_dir) {
  LearnResult result = learn(load_patterns(patterns_path), a, A, B);
  result.config.output.dir = out_dir;
  const std::string hash = config_hash(result.config);
  std::vector<std::string> written;
  written.push_back(path_in(out_dir, "learned_config.json"));
  write_file(written.back(), render_config(result.config));

  auto sets_json = [](const std::vector<SiteSet>& sets) {
    json arr = json::array();
    for (const auto& s : sets) arr.push_back(sites_json(s));
    return arr;
  };
  const BlockConstants k = result.learned.constants();
  const StorageReport& r = result.report;
  json patterns = json::array();
  for (const Pattern& xi : result.family.patterns) patterns.push_back(pattern_json(xi));
  const json verification = {
      {"config_hash", hash},
      {"seed", result.config.run.seed},
      {"a", result.learned.a},
      {"A", result.learned.A},
      {"B", result.learned.B},
      {"constants", {{"a", k.a}, {"b", k.b}, {"c", k.c}}},
      {"stored", r.stored},
      {"magnitudes_match", r.magnitudes_match},
      {"enumeration_matches", r.enumeration_matches},
      {"brute_force_checked", r.brute_force_checked},
      {"brute_force_matches", r.brute_force_checked ? json(r.brute_force_matches) : json(nullptr)},
      {"expected_traps", sets_json(r.expected)},
      {"patterns", patterns}};
  written.push_back(path_in(out_dir, "verification.json"));
  write_file(written.back(), json_io::dump(verification));
  return written;
}

BalanceOutcome run_balance(const ExperimentConfig& config, double w_E) {
  validate_config(config);
  const auto* t = std::get_if<TorusSection>(&config.topology);
  if (t == nullptr) throw ConfigError("balance check needs a torus topology");
  if (!(w_E >= 0.0)) throw ConfigError("w_E must be >= 0");
  TorusModel model;
  model.nu = t->nu;
  model.N = t->N;
  model.K_E = t->K_E;
  model.offsets = t->offsets;
  model.Y = config.distributions.Y;
  model.eta1 = config.distributions.eta1;
  model.eta2 = config.distributions.eta2;
  model.X0 = config.distributions.X0;
  const Network sub = lambda0_network(model, w_E);
  RecorderOptions rec;
  rec.bins = config.run.bins;
  rec.reservoir = 0;
  rec.seed = config.run.seed;
  const FiringStats stats = simulate_stats(sub, model.X0, config.run.seed, config.run.horizon, rec);
  BalanceOutcome out;
  out.w_E = w_E;
  out.events = stats.events;
  out.rate = pooled_rate(stats, config.run.burn_in);
  out.balance = check_balance(stats, w_E, t->K_E, model.eta2, config.run.burn_in);
  return out;
}

std::string cmd_balance(const ExperimentConfig& config, std::optional<double> w_E) {
  const double wE = w_E.value_or(config.connections.w_E);
  const BalanceOutcome o = run_balance(config, wE);
  const auto& t = std::get<TorusSection>(config.topology);
  const json doc = {
      {"config_hash", config_hash(config)},
      {"seed", config.run.seed},
      {"w_E", wE},
      {"K_E", t.K_E},
      {"events", o.events},
      {"residual", o.balance.residual},
      {"max_abs_site_residual", o.balance.max_abs_site_residual},
      {"pi_spontaneous", o.balance.pi_spontaneous},
      {"pi_plus", o.rate.total},
      {"pi_plus_half_width", o.rate.total_half_width},
      {"pi_plus_linear", 1.0 + t.K_E * wE},
      {"w_I_critical", 1.0 / (2.0 * t.nu * o.rate.total)},
      {"w_I_linear", linear_approx_wI(wE, t.nu, t.K_E)},
      {"mean_probability", o.balance.mean_probability},
      {"mean_excess", o.balance.mean_excess},
      {"min_samples", o.balance.min_samples}};
  const std::string text = json_io::dump(doc);
  write_file(path_in(config.output.dir, "balance.json"), text);
  return text;
}

}  // namespace hourglass

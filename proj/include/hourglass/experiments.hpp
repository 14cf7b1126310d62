#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hourglass/analysis.hpp"
#include "hourglass/classify.hpp"
#include "hourglass/config.hpp"
#include "hourglass/critical.hpp"
#include "hourglass/patterns.hpp"
#include "hourglass/stats.hpp"

namespace hourglass {

/// Everything a single simulation produces, before any file is written.
struct SimulationOutcome {
  ExperimentConfig config;
  std::string hash;
  FiringStats stats;
  FrequencyEstimate frequencies;
  EmpiricalVerdict empirical;
  /// Inductive analytic verdict over the active sites, when the links among
  /// them are all inhibitory and there are at most 16 of them.
  std::optional<Classification> analytic;
  /// Sites silent over the trailing half window, deleted sites included.
  SiteSet silent;
  Pattern pattern;
  /// Second vector field of the empirically active set.
  VectorField field;
};

/// Runs the configured simulation. `trace`, when given, receives the event
/// trace CSV.
SimulationOutcome run_simulation(const ExperimentConfig& config, std::ostream* trace = nullptr);

struct SimulateOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> horizon;
  std::optional<std::string> out;
};

ExperimentConfig apply_overrides(ExperimentConfig config, const SimulateOverrides& overrides);

/// Writes frequencies.csv, report.json, pattern.json, pattern.txt and, when
/// enabled, trace.csv into the output directory. Returns the written paths.
std::vector<std::string> cmd_simulate(const ExperimentConfig& config);

/// Grid over (w_I, w_E) for torus bases or (a, b, c) for block bases.
struct SweepSpec {
  ExperimentConfig base;
  /// Axis name -> values; axes not listed keep the base value.
  std::vector<std::pair<std::string, std::vector<double>>> grid;
  std::size_t replications = 1;
  std::uint64_t seed_base = 1;
  std::string out = "sweep";
};

SweepSpec parse_sweep(std::string_view text);
SweepSpec load_sweep(const std::string& path);
std::string render_sweep(const SweepSpec& spec);

struct SweepRun {
  std::vector<double> params;
  std::size_t cell = 0;
  std::size_t replication = 0;
  std::uint64_t seed = 0;
  bool transient = false;
  Verdict verdict = Verdict::Unknown;
  double mean_pi = 0.0;
};

struct SweepCell {
  std::vector<double> params;
  std::size_t runs = 0;
  double transient_fraction = 0.0;
  double mean_pi = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct CriticalPoint {
  double w_E = 0.0;
  /// Interpolated w_I where the transient fraction crosses 1/2.
  std::optional<double> w_I;
};

struct SweepResult {
  std::vector<std::string> axes;
  std::vector<SweepRun> runs;
  std::vector<SweepCell> cells;
  std::vector<CriticalPoint> critical;
  std::optional<double> slope;
};

/// Runs every cell and replication in a worker pool of `threads` workers
/// (0: worker_count). Results do not depend on the number of threads.
SweepResult run_sweep(const SweepSpec& spec, std::size_t threads = 0);

/// run_sweep plus runs.csv, cells.csv and summary.json in spec.out.
std::vector<std::string> cmd_sweep(const SweepSpec& spec);

/// Worker count: hardware threads, capped by HOURGLASS_THREADS and `jobs`.
std::size_t worker_count(std::size_t jobs);

struct TrapsResult {
  std::string method;
  std::vector<SiteSet> traps;
  /// Enumeration and brute force agree (set only when both ran).
  std::optional<bool> agree;
};

/// Closed-form enumeration for block-structured connections (cross-checked
/// by brute force up to 16 sites); brute force otherwise.
TrapsResult find_traps(const ExperimentConfig& config);

/// JSON document with the traps and their patterns.
std::string cmd_traps(const ExperimentConfig& config);

struct LearnResult {
  ExperimentConfig config;
  LearnedConnections learned;
  PatternFamily family;
  StorageReport report;
};

/// Patterns file: a JSON array of patterns, or {"patterns": [...]}.
std::vector<Pattern> load_patterns(const std::string& path);
std::vector<Pattern> parse_patterns(std::string_view text);

LearnResult learn(const std::vector<Pattern>& patterns, double a, double A, double B);

/// Writes learned_config.json and verification.json into `out_dir`.
std::vector<std::string> cmd_learn(const std::string& patterns_path, double a, double A, double B,
                                   const std::string& out_dir);

struct BalanceOutcome {
  BalanceReport balance;
  PooledRate rate;
  double w_E = 0.0;
  std::uint64_t events = 0;
};

/// Runs the Lambda_0 excitatory subsystem of a torus config at w_E.
BalanceOutcome run_balance(const ExperimentConfig& config, double w_E);

/// JSON document with the balance residual; also written to the output dir.
std::string cmd_balance(const ExperimentConfig& config, std::optional<double> w_E);

}  // namespace hourglass

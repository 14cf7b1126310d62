#include "hourglass/config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hourglass/errors.hpp"
#include "hourglass/format.hpp"
#include "hourglass/patterns.hpp"
#include "json_io.hpp"

namespace hourglass {

namespace {

using json_io::fail;

template <typename F>
auto located(std::string_view path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError& e) {
    fail(path, e.what());
  }
}

std::size_t site_count(const ExperimentConfig& config) {
  if (const auto* t = std::get_if<TorusSection>(&config.topology)) {
    std::size_t n = 1;
    for (int d = 0; d < t->nu; ++d) n *= static_cast<std::size_t>(2 * t->N);
    return n;
  }
  const auto& b = std::get<BlockSection>(config.topology);
  return static_cast<std::size_t>(2 * b.p) * static_cast<std::size_t>(b.k);
}

BlockOptions block_options(const BlockSection& b) {
  BlockOptions options;
  options.allow_single_site_blocks = b.allow_single_site_blocks;
  for (int m : b.membership) options.membership.push_back(m - 1);
  return options;
}

std::vector<std::array<int, 2>> zero_based(const std::vector<std::array<int, 2>>& pairing) {
  std::vector<std::array<int, 2>> out;
  for (const auto& pr : pairing) out.push_back({pr[0] - 1, pr[1] - 1});
  return out;
}

Network unrestricted_network(const ExperimentConfig& config) {
  Topology topology = build_topology(config);
  const ConnectionsSection& c = config.connections;
  const DistributionsSection& d = config.distributions;
  switch (c.kind) {
    case ConnectionsSection::Kind::Weights: {
      ConnectionSpec spec = torus_connections(topology, c.w_I, c.w_E, d.eta1, d.eta2);
      return make_network(std::move(topology), std::move(spec), d.Y);
    }
    case ConnectionsSection::Kind::Block:
      return block_network(topology, BlockConstants{c.a, c.b, c.c}, c.magnitude, d.Y);
    case ConnectionsSection::Kind::Matrix: {
      ConnectionSpec spec = inhibitory_connections(c.matrix, c.magnitude);
      return make_network(std::move(topology), std::move(spec), d.Y);
    }
  }
  throw ContractError("unhandled connection kind");
}

}  // namespace

void validate_config(const ExperimentConfig& config) {
  const bool torus = std::holds_alternative<TorusSection>(config.topology);
  const ConnectionsSection& c = config.connections;

  if (torus) {
    const auto& t = std::get<TorusSection>(config.topology);
    if (t.nu < 1 || t.nu > 3) fail("topology.torus.nu", "must be 1, 2 or 3");
    if (t.N < 2) fail("topology.torus.N", "must be at least 2");
    if (t.K_E <= 0 || t.K_E >= t.N) fail("topology.torus.K_E", "must satisfy 0 < K_E < N");
  } else {
    const auto& b = std::get<BlockSection>(config.topology);
    if (b.p < 1) fail("topology.blocks.p", "must be at least 1");
    if (b.k < 1 || (b.k == 1 && !b.allow_single_site_blocks)) {
      fail("topology.blocks.k", "must be at least 2 (set allow_single_site_blocks for k = 1)");
    }
    if (static_cast<int>(b.pairing.size()) != b.p) {
      fail("topology.blocks.pairing", "must list exactly p pairs");
    }
  }
  located("topology", [&] { return build_topology(config); });

  const DistributionsSection& d = config.distributions;
  if (torus) {
    if (c.kind != ConnectionsSection::Kind::Weights) {
      fail("connections", "a torus topology takes weights {w_I, w_E}");
    }
    if (!(c.w_I >= 0.0)) fail("connections.w_I", "must be >= 0");
    if (!(c.w_E >= 0.0)) fail("connections.w_E", "must be >= 0");
    located("distributions.Y", [&] { require_unit_mean(d.Y, "Y"); });
    located("distributions.eta1", [&] { require_unit_mean(d.eta1, "eta1"); });
    located("distributions.eta2", [&] { require_unit_mean(d.eta2, "eta2"); });
  } else {
    if (c.kind == ConnectionsSection::Kind::Weights) {
      fail("connections", "a block topology takes {a, b, c} or {a, matrix}");
    }
    if (!(c.a > 0.0)) fail("connections.a", "must be positive");
    if (c.kind == ConnectionsSection::Kind::Block) {
      located("connections", [&] { validate_block_constants({c.a, c.b, c.c}); });
    } else {
      const std::size_t n = site_count(config);
      if (c.matrix.size() != n) {
        fail("connections.matrix", "expected " + std::to_string(n) + " rows");
      }
      for (std::size_t x = 0; x < n; ++x) {
        const std::string row = "connections.matrix[" + std::to_string(x) + "]";
        if (c.matrix[x].size() != n) fail(row, "expected " + std::to_string(n) + " entries");
        for (std::size_t y = 0; y < n; ++y) {
          if (!(c.matrix[x][y] >= 0.0)) fail(row, "entries must be >= 0");
          if (x == y && c.matrix[x][y] != 0.0) fail(row, "diagonal entries must be 0");
        }
      }
    }
    if (d.Y.mean() != c.a) {
      fail("distributions.Y.mean", "must equal connections.a (" + format_number(c.a) + ")");
    }
  }

  const RunSection& r = config.run;
  if (!(r.horizon > 0.0) || !std::isfinite(r.horizon)) fail("run.horizon", "must be positive");
  if (!(r.burn_in >= 0.0 && r.burn_in < 1.0)) fail("run.burn_in", "must lie in [0, 1)");
  if (r.bins < 2) fail("run.bins", "must be at least 2");
  if (static_cast<double>(r.bins) * (1.0 - r.burn_in) < 1.0) {
    fail("run.burn_in", "leaves no statistics bin");
  }
  if (!(r.heuristic.ergodic_growth > 0.0)) fail("run.heuristic.ergodic_growth", "must be positive");
  if (!(r.heuristic.transient_growth > 0.0)) {
    fail("run.heuristic.transient_growth", "must be positive");
  }
  const std::size_t n = site_count(config);
  if (r.restriction) {
    if (r.restriction->empty()) fail("run.restriction", "must not be empty");
    for (Site s : *r.restriction) {
      if (s >= n) fail("run.restriction", "site " + std::to_string(s) + " out of range");
    }
    if (make_site_set(*r.restriction).size() != r.restriction->size()) {
      fail("run.restriction", "repeated site");
    }
  }
  if (r.initial) {
    if (r.initial->size() != n) fail("run.initial", "expected " + std::to_string(n) + " entries");
    for (double x : *r.initial) {
      if (!(x > 0.0)) fail("run.initial", "entries must be positive");
    }
  }
  if (config.output.dir.empty()) fail("output.dir", "must not be empty");
}

ExperimentConfig parse_config(std::string_view text) {
  const auto value = json_io::parse_text(text, "config");
  ExperimentConfig config = json_io::config_from_json(value);
  validate_config(config);
  return config;
}

std::string render_config(const ExperimentConfig& config) {
  return json_io::dump(json_io::config_to_json(config));
}

ExperimentConfig load_config(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_config(text);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : render_config(config)) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Topology build_topology(const ExperimentConfig& config) {
  if (const auto* t = std::get_if<TorusSection>(&config.topology)) {
    return build_torus(t->nu, t->N, t->K_E, t->offsets);
  }
  const auto& b = std::get<BlockSection>(config.topology);
  return build_block_network(b.p, b.k, zero_based(b.pairing), block_options(b));
}

Network build_network(const ExperimentConfig& config) {
  Network net = unrestricted_network(config);
  if (config.run.restriction) return restrict(net, make_site_set(*config.run.restriction));
  return net;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::error_code ec;
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + p.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("cannot write " + path);
}

}  // namespace hourglass

#include "json_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hourglass/errors.hpp"

namespace hourglass::json_io {

json parse_text(std::string_view text, std::string_view what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

std::string join_path(std::string_view parent, std::string_view key) {
  if (parent.empty()) return std::string(key);
  return std::string(parent) + "." + std::string(key);
}

void fail(std::string_view path, std::string_view message) {
  throw ConfigError((path.empty() ? std::string("<root>") : std::string(path)) + ": " +
                    std::string(message));
}

double as_number(const json& value, std::string_view path) {
  if (!value.is_number()) fail(path, "expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

int as_integer(const json& value, std::string_view path) {
  if (!value.is_number_integer()) fail(path, "expected an integer");
  if (value.is_number_unsigned()) {
    const auto v = value.get<std::uint64_t>();
    if (v > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) fail(path, "out of range");
    return static_cast<int>(v);
  }
  const auto v = value.get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    fail(path, "out of range");
  }
  return static_cast<int>(v);
}

ObjectReader::ObjectReader(const json& value, std::string path)
    : value_(value), path_(std::move(path)) {
  if (!value_.is_object()) fail(path_, "expected an object");
}

bool ObjectReader::has(std::string_view key) const { return value_.contains(key); }

const json& ObjectReader::at(std::string_view key) const {
  const auto it = value_.find(key);
  if (it == value_.end()) fail(child(key), "missing required key");
  return *it;
}

double ObjectReader::number(std::string_view key) const { return as_number(at(key), child(key)); }

double ObjectReader::number_or(std::string_view key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

int ObjectReader::integer(std::string_view key) const { return as_integer(at(key), child(key)); }

int ObjectReader::integer_or(std::string_view key, int fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::uint64_t ObjectReader::unsigned_integer_or(std::string_view key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const json& v = at(key);
  if (!v.is_number_integer()) fail(child(key), "expected a non-negative integer");
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const auto s = v.get<std::int64_t>();
  if (s < 0) fail(child(key), "expected a non-negative integer");
  return static_cast<std::uint64_t>(s);
}

bool ObjectReader::boolean_or(std::string_view key, bool fallback) const {
  if (!has(key)) return fallback;
  const json& v = at(key);
  if (!v.is_boolean()) fail(child(key), "expected true or false");
  return v.get<bool>();
}

std::string ObjectReader::string(std::string_view key) const {
  const json& v = at(key);
  if (!v.is_string()) fail(child(key), "expected a string");
  return v.get<std::string>();
}

std::string ObjectReader::string_or(std::string_view key, std::string fallback) const {
  return has(key) ? string(key) : fallback;
}

void ObjectReader::only(std::initializer_list<std::string_view> allowed) const {
  for (const auto& [key, _] : value_.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(child(key), "unknown key");
    }
  }
}

json distribution_to_json(const DistributionSpec& dist) {
  json out = {{"kind", std::string(to_string(dist.kind()))}, {"mean", dist.mean()}};
  if (dist.kind() == DistributionKind::Gamma) out["shape"] = dist.shape();
  return out;
}

DistributionSpec distribution_from_json(const json& value, const std::string& path) {
  const ObjectReader r(value, path);
  r.only({"kind", "mean", "shape"});
  const std::string kind_name = r.string("kind");
  DistributionKind kind;
  try {
    kind = distribution_kind_from_string(kind_name);
  } catch (const ConfigError& e) {
    fail(r.child("kind"), e.what());
  }
  const double mean = r.number("mean");
  try {
    switch (kind) {
      case DistributionKind::Exponential:
        if (r.has("shape")) fail(r.child("shape"), "only gamma distributions take a shape");
        return DistributionSpec::exponential(mean);
      case DistributionKind::Deterministic:
        if (r.has("shape")) fail(r.child("shape"), "only gamma distributions take a shape");
        return DistributionSpec::deterministic(mean);
      case DistributionKind::Gamma:
        return DistributionSpec::gamma(mean, r.number("shape"));
    }
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    fail(path, msg);
  }
  fail(r.child("kind"), "unsupported distribution");
}

namespace {

json offsets_to_json(const std::vector<LatticeVector>& offsets) {
  json out = json::array();
  for (const auto& v : offsets) out.push_back(v);
  return out;
}

template <typename T>
std::vector<T> array_of(const json& value, const std::string& path,
                        T (*convert)(const json&, std::string_view)) {
  if (!value.is_array()) fail(path, "expected an array");
  std::vector<T> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(convert(value[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Site as_site(const json& value, std::string_view path) {
  const int v = as_integer(value, path);
  if (v < 0) fail(path, "site indices are non-negative");
  return static_cast<Site>(v);
}

}  // namespace

json config_to_json(const ExperimentConfig& config) {
  json out;
  if (const auto* t = std::get_if<TorusSection>(&config.topology)) {
    out["topology"]["torus"] = {
        {"nu", t->nu}, {"N", t->N}, {"K_E", t->K_E}, {"offsets", offsets_to_json(t->offsets)}};
  } else {
    const auto& b = std::get<BlockSection>(config.topology);
    json pairing = json::array();
    for (const auto& pr : b.pairing) pairing.push_back({pr[0], pr[1]});
    json blocks = {{"p", b.p}, {"k", b.k}, {"pairing", pairing}};
    if (!b.membership.empty()) blocks["membership"] = b.membership;
    if (b.allow_single_site_blocks) blocks["allow_single_site_blocks"] = true;
    out["topology"]["blocks"] = blocks;
  }

  const ConnectionsSection& c = config.connections;
  switch (c.kind) {
    case ConnectionsSection::Kind::Weights:
      out["connections"] = {{"w_I", c.w_I}, {"w_E", c.w_E}};
      break;
    case ConnectionsSection::Kind::Block:
      out["connections"] = {{"a", c.a},
                            {"b", c.b},
                            {"c", c.c},
                            {"magnitude", std::string(to_string(c.magnitude))}};
      break;
    case ConnectionsSection::Kind::Matrix:
      out["connections"] = {
          {"a", c.a}, {"matrix", c.matrix}, {"magnitude", std::string(to_string(c.magnitude))}};
      break;
  }

  const DistributionsSection& d = config.distributions;
  out["distributions"] = {{"Y", distribution_to_json(d.Y)},
                          {"eta1", distribution_to_json(d.eta1)},
                          {"eta2", distribution_to_json(d.eta2)},
                          {"X0", distribution_to_json(d.X0)}};

  const RunSection& r = config.run;
  json run = {{"seed", r.seed},
              {"horizon", r.horizon},
              {"burn_in", r.burn_in},
              {"bins", r.bins},
              {"reservoir", r.reservoir},
              {"heuristic",
               {{"ergodic_growth", r.heuristic.ergodic_growth},
                {"transient_growth", r.heuristic.transient_growth}}}};
  if (r.restriction) run["restriction"] = *r.restriction;
  if (r.initial) run["initial"] = *r.initial;
  out["run"] = run;

  out["output"] = {{"dir", config.output.dir}, {"trace", config.output.trace}};
  return out;
}

ExperimentConfig config_from_json(const json& value, const std::string& path) {
  ExperimentConfig config;
  const ObjectReader root(value, path);
  root.only({"topology", "connections", "distributions", "run", "output"});

  {
    const ObjectReader topo(root.at("topology"), root.child("topology"));
    topo.only({"torus", "blocks"});
    if (topo.has("torus") == topo.has("blocks")) {
      fail(topo.path(), "expected exactly one of \"torus\" or \"blocks\"");
    }
    if (topo.has("torus")) {
      const ObjectReader t(topo.at("torus"), topo.child("torus"));
      t.only({"nu", "N", "K_E", "offsets"});
      TorusSection s;
      s.nu = t.integer("nu");
      s.N = t.integer("N");
      s.K_E = t.integer("K_E");
      if (t.has("offsets")) {
        const json& offs = t.at("offsets");
        if (!offs.is_array()) fail(t.child("offsets"), "expected an array of integer vectors");
        for (std::size_t i = 0; i < offs.size(); ++i) {
          s.offsets.push_back(
              array_of<int>(offs[i], t.child("offsets") + "[" + std::to_string(i) + "]", as_integer));
        }
      }
      config.topology = s;
    } else {
      const ObjectReader b(topo.at("blocks"), topo.child("blocks"));
      b.only({"p", "k", "pairing", "membership", "allow_single_site_blocks"});
      BlockSection s;
      s.p = b.integer("p");
      s.k = b.integer("k");
      if (b.has("pairing")) {
        const json& pr = b.at("pairing");
        if (!pr.is_array()) fail(b.child("pairing"), "expected an array of block pairs");
        for (std::size_t i = 0; i < pr.size(); ++i) {
          const std::string here = b.child("pairing") + "[" + std::to_string(i) + "]";
          const auto pair = array_of<int>(pr[i], here, as_integer);
          if (pair.size() != 2) fail(here, "expected two block indices");
          s.pairing.push_back({pair[0], pair[1]});
        }
      } else {
        for (int n = 0; n < s.p; ++n) s.pairing.push_back({2 * n + 1, 2 * n + 2});
      }
      if (b.has("membership")) {
        s.membership = array_of<int>(b.at("membership"), b.child("membership"), as_integer);
      }
      s.allow_single_site_blocks = b.boolean_or("allow_single_site_blocks", false);
      config.topology = s;
    }
  }

  {
    const ObjectReader c(root.at("connections"), root.child("connections"));
    ConnectionsSection s;
    const bool weights = c.has("w_I") || c.has("w_E");
    const bool matrix = c.has("matrix");
    const bool block = c.has("b") || c.has("c");
    if (static_cast<int>(weights) + static_cast<int>(matrix) + static_cast<int>(block) != 1) {
      fail(c.path(), "expected exactly one of {w_I, w_E}, {a, b, c} or {a, matrix}");
    }
    auto magnitude = [&] {
      const std::string name = c.string_or("magnitude", "deterministic");
      try {
        return magnitude_kind_from_string(name);
      } catch (const ConfigError& e) {
        fail(c.child("magnitude"), e.what());
      }
    };
    if (weights) {
      c.only({"w_I", "w_E"});
      s.kind = ConnectionsSection::Kind::Weights;
      s.w_I = c.number_or("w_I", 0.0);
      s.w_E = c.number_or("w_E", 0.0);
    } else if (block) {
      c.only({"a", "b", "c", "magnitude"});
      s.kind = ConnectionsSection::Kind::Block;
      s.a = c.number("a");
      s.b = c.number("b");
      s.c = c.number("c");
      s.magnitude = magnitude();
    } else {
      c.only({"a", "matrix", "magnitude"});
      s.kind = ConnectionsSection::Kind::Matrix;
      s.a = c.number("a");
      const json& m = c.at("matrix");
      if (!m.is_array()) fail(c.child("matrix"), "expected an array of rows");
      for (std::size_t i = 0; i < m.size(); ++i) {
        s.matrix.push_back(array_of<double>(
            m[i], c.child("matrix") + "[" + std::to_string(i) + "]", as_number));
      }
      s.magnitude = magnitude();
    }
    config.connections = s;
  }

  if (root.has("distributions")) {
    const ObjectReader d(root.at("distributions"), root.child("distributions"));
    d.only({"Y", "eta1", "eta2", "X0"});
    DistributionsSection& s = config.distributions;
    if (d.has("Y")) s.Y = distribution_from_json(d.at("Y"), d.child("Y"));
    if (d.has("eta1")) s.eta1 = distribution_from_json(d.at("eta1"), d.child("eta1"));
    if (d.has("eta2")) s.eta2 = distribution_from_json(d.at("eta2"), d.child("eta2"));
    if (d.has("X0")) s.X0 = distribution_from_json(d.at("X0"), d.child("X0"));
  }

  if (root.has("run")) {
    const ObjectReader r(root.at("run"), root.child("run"));
    r.only({"seed", "horizon", "burn_in", "bins", "reservoir", "restriction", "initial",
            "heuristic"});
    RunSection& s = config.run;
    s.seed = r.unsigned_integer_or("seed", s.seed);
    s.horizon = r.number_or("horizon", s.horizon);
    s.burn_in = r.number_or("burn_in", s.burn_in);
    s.bins = r.unsigned_integer_or("bins", s.bins);
    s.reservoir = r.unsigned_integer_or("reservoir", s.reservoir);
    if (r.has("restriction")) {
      s.restriction = array_of<Site>(r.at("restriction"), r.child("restriction"), as_site);
    }
    if (r.has("initial")) {
      s.initial = array_of<double>(r.at("initial"), r.child("initial"), as_number);
    }
    if (r.has("heuristic")) {
      const ObjectReader h(r.at("heuristic"), r.child("heuristic"));
      h.only({"ergodic_growth", "transient_growth"});
      s.heuristic.ergodic_growth = h.number_or("ergodic_growth", s.heuristic.ergodic_growth);
      s.heuristic.transient_growth = h.number_or("transient_growth", s.heuristic.transient_growth);
    }
  }

  if (root.has("output")) {
    const ObjectReader o(root.at("output"), root.child("output"));
    o.only({"dir", "trace"});
    config.output.dir = o.string_or("dir", config.output.dir);
    config.output.trace = o.boolean_or("trace", config.output.trace);
  }
  return config;
}

std::string dump(const json& value) { return value.dump(2) + "\n"; }

}  // namespace hourglass::json_io

#pragma once

// JSON plumbing shared by the config and experiment code. Not installed.

#include <initializer_list>
#include <string>
#include <string_view>

#include "hourglass/config.hpp"
#include "json.hpp"

namespace hourglass::json_io {

using nlohmann::json;

/// Parses JSON text; ConfigError with `what` on syntax errors.
json parse_text(std::string_view text, std::string_view what);

std::string join_path(std::string_view parent, std::string_view key);

/// Typed access to one JSON object with errors located by key path.
class ObjectReader {
 public:
  ObjectReader(const json& value, std::string path);

  const std::string& path() const { return path_; }
  bool has(std::string_view key) const;
  const json& at(std::string_view key) const;
  std::string child(std::string_view key) const { return join_path(path_, key); }

  double number(std::string_view key) const;
  double number_or(std::string_view key, double fallback) const;
  int integer(std::string_view key) const;
  int integer_or(std::string_view key, int fallback) const;
  std::uint64_t unsigned_integer_or(std::string_view key, std::uint64_t fallback) const;
  bool boolean_or(std::string_view key, bool fallback) const;
  std::string string(std::string_view key) const;
  std::string string_or(std::string_view key, std::string fallback) const;

  /// ConfigError on keys outside `allowed`.
  void only(std::initializer_list<std::string_view> allowed) const;

 private:
  const json& value_;
  std::string path_;
};

[[noreturn]] void fail(std::string_view path, std::string_view message);

double as_number(const json& value, std::string_view path);
int as_integer(const json& value, std::string_view path);

json distribution_to_json(const DistributionSpec& dist);
DistributionSpec distribution_from_json(const json& value, const std::string& path);

json config_to_json(const ExperimentConfig& config);
/// Structural parse only; callers validate.
ExperimentConfig config_from_json(const json& value, const std::string& path = "");

/// Dumps with two-space indent and a trailing newline.
std::string dump(const json& value);

}  // namespace hourglass::json_io

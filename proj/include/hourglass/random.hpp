#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>

namespace hourglass {

enum class DistributionKind { Exponential, Gamma, Deterministic };

std::string_view to_string(DistributionKind kind);
DistributionKind distribution_kind_from_string(std::string_view name);

/// A strictly positive random variable, parameterized by its mean.
///
/// Instances are always valid: the factories reject non-positive or
/// non-finite parameters with ConfigError.
class DistributionSpec {
 public:
  static DistributionSpec exponential(double mean);
  static DistributionSpec gamma(double mean, double shape);
  static DistributionSpec deterministic(double mean);

  DistributionKind kind() const { return kind_; }
  double mean() const { return mean_; }
  /// Gamma shape; 1 for Exponential, +inf for Deterministic.
  double shape() const { return shape_; }

  /// Same family with the mean multiplied by `factor` (> 0).
  DistributionSpec scaled(double factor) const;

  bool operator==(const DistributionSpec&) const = default;

 private:
  DistributionSpec(DistributionKind kind, double mean, double shape)
      : kind_(kind), mean_(mean), shape_(shape) {}

  DistributionKind kind_;
  double mean_;
  double shape_;
};

/// Constants (a, alpha) with density(u) <= a * exp(-alpha * u) for all u > 0.
struct TailEnvelope {
  double a;
  double alpha;
};

/// Exponential-tail bound for the density, if one exists. Deterministic
/// variables have no density, and Gamma with shape < 1 has a density that is
/// unbounded at the origin; both return nullopt.
std::optional<TailEnvelope> tail_envelope(const DistributionSpec& dist);

/// Seeded 64-bit generator. Satisfies UniformRandomBitGenerator and counts
/// how many raw words it has produced.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() {
    ++position_;
    return engine_();
  }

  /// Uniform on the open interval (0, 1).
  double uniform_open();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t position() const { return position_; }

  /// Independent handle for sub-stream `stream` of this handle's seed.
  Rng split(std::uint64_t stream) const { return Rng(seed_, stream); }

  bool operator==(const Rng& other) const {
    return seed_ == other.seed_ && stream_ == other.stream_ &&
           position_ == other.position_;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Draws one value; always strictly positive.
double sample(const DistributionSpec& dist, Rng& rng);

/// Exact analytic mean.
double mean_of(const DistributionSpec& dist);

/// Throws ConfigError naming `what` unless the mean equals 1.
void require_unit_mean(const DistributionSpec& dist, std::string_view what);

}  // namespace hourglass

#include "hourglass/random.hpp"

#include <cmath>
#include <string>

#include "hourglass/errors.hpp"

namespace hourglass {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string(what) + " must be a positive finite number, got " +
                      std::to_string(value));
  }
}

}  // namespace

std::string_view to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::Exponential:
      return "exponential";
    case DistributionKind::Gamma:
      return "gamma";
    case DistributionKind::Deterministic:
      return "deterministic";
  }
  return "unknown";
}

DistributionKind distribution_kind_from_string(std::string_view name) {
  if (name == "exponential") return DistributionKind::Exponential;
  if (name == "gamma") return DistributionKind::Gamma;
  if (name == "deterministic") return DistributionKind::Deterministic;
  throw ConfigError("unknown distribution kind '" + std::string(name) +
                    "' (expected exponential, gamma or deterministic)");
}

DistributionSpec DistributionSpec::exponential(double mean) {
  require_positive(mean, "distribution mean");
  return DistributionSpec(DistributionKind::Exponential, mean, 1.0);
}

DistributionSpec DistributionSpec::gamma(double mean, double shape) {
  require_positive(mean, "distribution mean");
  require_positive(shape, "gamma shape");
  return DistributionSpec(DistributionKind::Gamma, mean, shape);
}

DistributionSpec DistributionSpec::deterministic(double mean) {
  require_positive(mean, "distribution mean");
  return DistributionSpec(DistributionKind::Deterministic, mean,
                          std::numeric_limits<double>::infinity());
}

DistributionSpec DistributionSpec::scaled(double factor) const {
  require_positive(factor, "scale factor");
  DistributionSpec out = *this;
  out.mean_ = mean_ * factor;
  require_positive(out.mean_, "scaled mean");
  return out;
}

std::optional<TailEnvelope> tail_envelope(const DistributionSpec& dist) {
  switch (dist.kind()) {
    case DistributionKind::Exponential: {
      const double rate = 1.0 / dist.mean();
      return TailEnvelope{rate, rate};
    }
    case DistributionKind::Gamma: {
      const double k = dist.shape();
      const double scale = dist.mean() / k;
      if (k < 1.0) return std::nullopt;
      if (k == 1.0) return TailEnvelope{1.0 / scale, 1.0 / scale};
      // Trade half the decay rate for a finite constant:
      // sup_u u^{k-1} e^{-u/(2s)} is reached at u = 2s(k-1).
      const double alpha = 0.5 / scale;
      const double log_a = (k - 1.0) * std::log(2.0 * scale * (k - 1.0)) - (k - 1.0) -
                           std::lgamma(k) - k * std::log(scale);
      return TailEnvelope{std::exp(log_a), alpha};
    }
    case DistributionKind::Deterministic:
      return std::nullopt;
  }
  return std::nullopt;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  auto splitmix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return splitmix(splitmix(seed) ^ splitmix(stream + 0x632be59bd9b4e019ULL));
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(mix_seed(seed, stream)) {}

double Rng::uniform_open() {
  // 53 random bits mapped to the centers of 2^53 cells in (0, 1).
  const std::uint64_t bits = (*this)() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double sample(const DistributionSpec& dist, Rng& rng) {
  switch (dist.kind()) {
    case DistributionKind::Deterministic:
      return dist.mean();
    case DistributionKind::Exponential:
      return -dist.mean() * std::log(rng.uniform_open());
    case DistributionKind::Gamma: {
      std::gamma_distribution<double> gamma(dist.shape(), dist.mean() / dist.shape());
      double value = 0.0;
      do {
        value = gamma(rng);
      } while (!(value > 0.0));
      return value;
    }
  }
  return dist.mean();
}

double mean_of(const DistributionSpec& dist) { return dist.mean(); }

void require_unit_mean(const DistributionSpec& dist, std::string_view what) {
  if (dist.mean() != 1.0) {
    throw ConfigError(std::string(what) + " must have mean 1 in the torus model, got " +
                      std::to_string(dist.mean()));
  }
}

}  // namespace hourglass

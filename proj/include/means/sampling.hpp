#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "means/errors.hpp"
#include "means/interval.hpp"

namespace means {

// Deterministic sampling plan for a property check: identical configs produce
// identical samples, so reports are reproducible bit for bit.
struct SampleConfig {
  std::uint64_t seed = 1;
  std::size_t tuples = 256;
  Interval range = Interval::closed(1e-6, 1e6);
  std::size_t arity = 2;
};

namespace detail {

inline void require_tuples(const SampleConfig& cfg) {
  if (cfg.tuples < 1)
    throw InvariantError("sampling needs at least one tuple");
}

inline Interval positive_effective_range(const Interval& range,
                                         const Interval& domain) {
  Interval eff = range.intersect(domain);
  if (!(eff.lower() > 0.0) || !std::isfinite(eff.lower()) ||
      !std::isfinite(eff.upper()))
    throw InvariantError(
        "sampling range " + eff.str() +
        " must be a bounded subinterval of (0, inf) for multiplicative checks");
  return eff;
}

}  // namespace detail

// range ∩ domain, shrunk so x and 1/x are both sampleable. Checks that probe
// a mean or generator at reciprocal pairs draw from this.
inline Interval reciprocal_symmetric_range(const Interval& range,
                                           const Interval& domain) {
  const Interval eff = detail::positive_effective_range(range, domain);
  const double lo = std::max(eff.lower(), 1.0 / eff.upper());
  const double hi = std::min(eff.upper(), 1.0 / eff.lower());
  if (!(lo < hi))
    throw InvariantError("domain " + domain.str() +
                         " leaves no reciprocal-symmetric sampling range");
  return Interval::closed(lo, hi);
}

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  // Log-uniform: multiplicatively symmetric coverage of (0, inf) subranges.
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

 private:
  std::mt19937_64 rng_;
};

inline std::vector<std::vector<double>> log_uniform_tuples(
    const SampleConfig& cfg, const Interval& within) {
  Sampler s(cfg.seed);
  std::vector<std::vector<double>> out(cfg.tuples);
  for (auto& tuple : out) {
    tuple.resize(cfg.arity);
    for (auto& x : tuple) x = s.log_uniform(within.lower(), within.upper());
  }
  return out;
}

inline std::vector<double> log_uniform_scalars(const SampleConfig& cfg,
                                               const Interval& within) {
  Sampler s(cfg.seed);
  std::vector<double> out(cfg.tuples);
  for (auto& x : out) x = s.log_uniform(within.lower(), within.upper());
  return out;
}

// Half-width for symmetric sampling on the real line: ln of the range top,
// shrunk to fit a bounded symmetric domain. The domain must be symmetric
// about 0, or the check makes no sense.
inline double symmetric_halfwidth(const SampleConfig& cfg,
                                  const Interval& domain) {
  if (-domain.lower() != domain.upper())
    throw DomainError("domain " + domain.str() + " is not symmetric about 0");
  double half = std::log(cfg.range.upper());
  if (std::isfinite(domain.upper())) half = std::min(half, domain.upper());
  return half;
}

// Tuples uniform in [-half, half]^arity; callers pair each tuple with its
// negation so coverage is symmetric by construction.
inline std::vector<std::vector<double>> symmetric_uniform_tuples(
    const SampleConfig& cfg, double half) {
  Sampler s(cfg.seed);
  std::vector<std::vector<double>> out(cfg.tuples);
  for (auto& tuple : out) {
    tuple.resize(cfg.arity);
    for (auto& x : tuple) x = s.uniform(-half, half);
  }
  return out;
}

}  // namespace means

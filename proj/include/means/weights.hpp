#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "means/errors.hpp"
#include "means/format.hpp"

namespace means {

// Positive weights p_1..p_n, n >= 2. Inputs must sum to 1 within 1e-9 and are
// then renormalized so the stored sum is exactly 1; anything further off is
// rejected as a likely typo rather than silently rescaled.
class Weights {
 public:
  explicit Weights(std::vector<double> values) : v_(std::move(values)) {
    if (v_.size() < 2)
      throw InvariantError("weights need at least 2 entries, got " +
                           std::to_string(v_.size()));
    double sum = 0.0;
    for (double w : v_) {
      if (!(w > 0.0) || !std::isfinite(w))
        throw InvariantError("weight " + fmt(w) + " is not a positive real");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw InvariantError("weights sum to " + fmt(sum) +
                           ", more than 1e-9 away from 1");
    for (double& w : v_) w /= sum;
    double head = std::accumulate(v_.begin(), v_.end() - 1, 0.0);
    v_.back() = 1.0 - head;  // force a bitwise unit sum
    if (!(v_.back() > 0.0))
      throw InvariantError("weights degenerate after renormalization");
  }

  static Weights uniform(std::size_t n) {
    if (n < 2) throw InvariantError("weights need at least 2 entries");
    return Weights(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  std::size_t size() const { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }
  std::span<const double> values() const { return v_; }
  std::string str() const { return fmt_join(v_); }

 private:
  std::vector<double> v_;
};

}  // namespace means

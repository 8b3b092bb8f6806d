#pragma once

#include <string>
#include <utility>

#include "means/generator.hpp"
#include "means/interval.hpp"

namespace means {

// A bijection between two intervals, used to conjugate means. Wraps a
// Generator together with its declared target interval.
class Homeomorphism {
 public:
  Homeomorphism(Generator map, Interval target)
      : map_(std::move(map)), target_(target) {}

  static Homeomorphism identity() {
    return {identity_generator(), Interval::real_line()};
  }
  static Homeomorphism reciprocal() {
    Generator g("reciprocal", Interval::positive(),
                [](double t) { return 1.0 / t; },
                [](double y) { return 1.0 / y; }, Monotone::decreasing);
    return {std::move(g), Interval::positive()};
  }
  static Homeomorphism exponential() {
    return {exp_generator(), Interval::positive()};
  }
  static Homeomorphism logarithm() {
    return {log_generator(), Interval::real_line()};
  }

  const Generator& map() const { return map_; }
  const Interval& source() const { return map_.domain(); }
  const Interval& target() const { return target_; }
  const std::string& label() const { return map_.label(); }

  double forward(double x) const { return map_(x); }
  double invert(double y) const { return map_.invert(y); }

  Homeomorphism inverse() const {
    if (label() == "exp") return logarithm();
    if (label() == "log") return exponential();
    if (label() == "identity" || label() == "reciprocal") return *this;
    Generator m = map_;
    auto gen = Generator::unchecked(
        "inv(" + label() + ")", target_,
        [m](double y) { return m.invert(y); },
        [m](double t) { return m.forward_unchecked(t); }, m.direction());
    return {std::move(gen), source()};
  }

 private:
  Generator map_;
  Interval target_;
};

}  // namespace means

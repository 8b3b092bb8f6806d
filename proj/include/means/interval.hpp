#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "means/errors.hpp"
#include "means/format.hpp"

namespace means {

// Nonempty real interval with open/closed ends; endpoints may be infinite
// (an infinite end is always open).
class Interval {
 public:
  Interval(double lower, bool open_lower, double upper, bool open_upper)
      : lo_(lower), hi_(upper), olo_(open_lower), ohi_(open_upper) {
    if (std::isnan(lo_) || std::isnan(hi_) || !(lo_ < hi_))
      throw InvariantError("interval [" + fmt(lower) + ", " + fmt(upper) +
                           "] is empty or malformed");
    if (std::isinf(lo_)) olo_ = true;
    if (std::isinf(hi_)) ohi_ = true;
  }

  static Interval open(double lo, double hi) { return {lo, true, hi, true}; }
  static Interval closed(double lo, double hi) { return {lo, false, hi, false}; }
  static Interval real_line() {
    return open(-std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity());
  }
  static Interval positive() {
    return open(0.0, std::numeric_limits<double>::infinity());
  }

  double lower() const { return lo_; }
  double upper() const { return hi_; }
  bool open_lower() const { return olo_; }
  bool open_upper() const { return ohi_; }
  bool bounded() const { return std::isfinite(lo_) && std::isfinite(hi_); }

  bool contains(double x) const {
    if (std::isnan(x)) return false;
    if (x < lo_ || (x == lo_ && olo_)) return false;
    if (x > hi_ || (x == hi_ && ohi_)) return false;
    return true;
  }

  // True when every point of other lies in *this.
  bool contains(const Interval& other) const {
    bool lo_ok = lo_ < other.lo_ || (lo_ == other.lo_ && (!olo_ || other.olo_));
    bool hi_ok = hi_ > other.hi_ || (hi_ == other.hi_ && (!ohi_ || other.ohi_));
    return lo_ok && hi_ok;
  }

  Interval intersect(const Interval& other) const {
    double lo = std::max(lo_, other.lo_);
    double hi = std::min(hi_, other.hi_);
    bool olo = (lo == lo_ && olo_) || (lo == other.lo_ && other.olo_);
    bool ohi = (hi == hi_ && ohi_) || (hi == other.hi_ && other.ohi_);
    if (!(lo < hi))
      throw InvariantError("intervals " + str() + " and " + other.str() +
                           " do not overlap");
    return {lo, olo, hi, ohi};
  }

  std::string str() const {
    return std::string(olo_ ? "(" : "[") + fmt(lo_) + ", " + fmt(hi_) +
           (ohi_ ? ")" : "]");
  }

 private:
  double lo_, hi_;
  bool olo_, ohi_;
};

}  // namespace means

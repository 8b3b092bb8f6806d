#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "means/errors.hpp"
#include "means/format.hpp"
#include "means/interval.hpp"

namespace means {

enum class Monotone { increasing, decreasing };

namespace detail {

// Monotone chart u -> t mapping the whole domain onto (a clamp of) the real
// u-line, so bracket expansion and bisection work identically for every
// domain shape. to_t is strictly increasing in u for every kind.
struct Chart {
  enum class Kind { identity, log_lower, log_upper, affine } kind;
  double a = 0.0;  // finite lower end (log_lower, affine)
  double b = 0.0;  // finite upper end (log_upper, affine)
  double u_min = 0.0, u_max = 0.0;
  bool expandable = true;

  double to_t(double u) const {
    switch (kind) {
      case Kind::identity:
        return u;
      case Kind::log_lower:
        return a + std::exp(u);
      case Kind::log_upper:
        return b - std::exp(-u);
      case Kind::affine:
        return a + (b - a) * u;
    }
    return u;
  }

  static Chart for_domain(const Interval& d) {
    Chart c;
    const bool lo_fin = std::isfinite(d.lower());
    const bool hi_fin = std::isfinite(d.upper());
    if (lo_fin && hi_fin) {
      c.kind = Kind::affine;
      c.a = d.lower();
      c.b = d.upper();
      c.u_min = 0.0;
      c.u_max = 1.0;
      c.expandable = false;
    } else if (lo_fin) {
      c.kind = Kind::log_lower;
      c.a = d.lower();
      c.u_min = -700.0;
      c.u_max = 700.0;
    } else if (hi_fin) {
      c.kind = Kind::log_upper;
      c.b = d.upper();
      c.u_min = -700.0;
      c.u_max = 700.0;
    } else {
      c.kind = Kind::identity;
      c.u_min = -1e154;
      c.u_max = 1e154;
    }
    return c;
  }
};

}  // namespace detail

// A continuous strictly monotone scalar map on a declared interval, with an
// optional closed-form inverse. The declared direction is trusted but
// spot-checked at construction; numeric inversion relies on it.
class Generator {
 public:
  Generator(std::string label, Interval domain,
            std::function<double(double)> forward, Monotone direction)
      : Generator(std::move(label), domain, std::move(forward), nullptr,
                  direction, true) {}

  Generator(std::string label, Interval domain,
            std::function<double(double)> forward,
            std::function<double(double)> inverse, Monotone direction)
      : Generator(std::move(label), domain, std::move(forward),
                  std::move(inverse), direction, true) {}

  // Skips the construction spot checks. For internal composed maps and tests.
  static Generator unchecked(std::string label, Interval domain,
                             std::function<double(double)> forward,
                             std::function<double(double)> inverse,
                             Monotone direction) {
    return Generator(std::move(label), domain, std::move(forward),
                     std::move(inverse), direction, false);
  }

  const std::string& label() const { return label_; }
  const Interval& domain() const { return domain_; }
  Monotone direction() const { return direction_; }
  bool increasing() const { return direction_ == Monotone::increasing; }
  bool has_closed_inverse() const { return static_cast<bool>(inverse_); }

  double operator()(double t) const {
    if (!domain_.contains(t))
      throw DomainError("input " + fmt(t) + " outside domain " +
                        domain_.str() + " of generator '" + label_ + "'");
    return forward_(t);
  }

  double forward_unchecked(double t) const { return forward_(t); }

  // Solve forward(t) = y over the whole domain. Uses the closed-form inverse
  // when present; otherwise brackets by geometric expansion from an interior
  // seed and bisects. Non-finite y resolves to the domain end the range runs
  // off to.
  double invert(double y) const {
    if (inverse_) return inverse_(y);
    if (std::isnan(y))
      throw InversionFailure("cannot invert generator '" + label_ +
                             "' at y=nan");
    if (std::isinf(y)) {
      const bool upper_end = (y > 0) == increasing();
      return upper_end ? domain_.upper() : domain_.lower();
    }
    return invert_numeric(y);
  }

  // Solve forward(t) = y for t in [lo, hi] (both inside the domain), used by
  // the mean kernels where the result is known to lie between the smallest
  // and largest input. y is clamped into the hull of {f(lo), f(hi)}, which
  // absorbs end-of-precision excursions of a weighted average; a non-finite y
  // is never masked and resolves through the whole-domain path.
  double invert_within(double y, double lo, double hi) const {
    if (lo == hi) return lo;
    if (!std::isfinite(y)) return invert(y);
    double flo = forward_(lo), fhi = forward_(hi);
    y = std::clamp(y, std::min(flo, fhi), std::max(flo, fhi));
    if (inverse_) return std::clamp(inverse_(y), lo, hi);

    double a = lo, b = hi;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (a + b);
      if (mid == a || mid == b) return mid;
      const double fm = forward_(mid);
      if (std::isnan(fm))
        throw InversionFailure("generator '" + label_ +
                               "' returned nan at t=" + fmt(mid));
      if (fm == y) return mid;
      const bool go_right = increasing() ? (fm < y) : (fm > y);
      (go_right ? a : b) = mid;
      if (b - a <= 1e-13 * std::abs(mid)) return 0.5 * (a + b);
    }
    return 0.5 * (a + b);
  }

 private:
  Generator(std::string label, Interval domain,
            std::function<double(double)> forward,
            std::function<double(double)> inverse, Monotone direction,
            bool validate)
      : label_(std::move(label)),
        domain_(domain),
        forward_(std::move(forward)),
        inverse_(std::move(inverse)),
        direction_(direction) {
    if (!forward_) throw InvariantError("generator needs a forward map");
    if (validate) spot_check();
  }

  double invert_numeric(double y) const {
    const auto chart = detail::Chart::for_domain(domain_);
    const double sign = increasing() ? 1.0 : -1.0;  // of g(u) in u
    const auto g = [&](double u) { return forward_(chart.to_t(u)); };

    double ulo, uhi;
    if (!chart.expandable) {
      double tlo = domain_.open_lower()
                       ? std::nextafter(domain_.lower(), domain_.upper())
                       : domain_.lower();
      double thi = domain_.open_upper()
                       ? std::nextafter(domain_.upper(), domain_.lower())
                       : domain_.upper();
      ulo = (tlo - chart.a) / (chart.b - chart.a);
      uhi = (thi - chart.a) / (chart.b - chart.a);
    } else {
      ulo = uhi = 0.0;
      double step = 1.0;
      bool bracketed = false;
      for (int i = 0; i < 200; ++i) {
        const double glo = g(ulo), ghi = g(uhi);
        if (sign * glo <= sign * y && sign * y <= sign * ghi) {
          bracketed = true;
          break;
        }
        if (ulo == chart.u_min && uhi == chart.u_max) break;
        ulo = std::max(chart.u_min, ulo - step);
        uhi = std::min(chart.u_max, uhi + step);
        step *= 2.0;
      }
      if (!bracketed) {
        const double glo = g(ulo), ghi = g(uhi);
        if (!(sign * glo <= sign * y && sign * y <= sign * ghi))
          throw InversionFailure("cannot bracket y=" + fmt(y) +
                                 " for generator '" + label_ + "' on " +
                                 domain_.str());
      }
    }

    {
      const double glo = g(ulo), ghi = g(uhi);
      if (!(sign * glo <= sign * y && sign * y <= sign * ghi))
        throw InversionFailure("cannot bracket y=" + fmt(y) +
                               " for generator '" + label_ + "' on " +
                               domain_.str());
    }

    for (int i = 0; i < 200; ++i) {
      const double umid = 0.5 * (ulo + uhi);
      if (umid == ulo || umid == uhi) break;
      const double t = chart.to_t(umid);
      const double ft = forward_(t);
      if (std::isnan(ft))
        throw InversionFailure("generator '" + label_ +
                               "' returned nan at t=" + fmt(t));
      if (ft == y) return t;
      const bool go_right = (sign * ft < sign * y);
      (go_right ? ulo : uhi) = umid;
      const double width = std::abs(chart.to_t(uhi) - chart.to_t(ulo));
      if (width <= 1e-13 * std::abs(t)) return t;
    }
    return chart.to_t(0.5 * (ulo + uhi));
  }

  // Probe a few interior points: declared direction must match the data, and
  // a closed-form inverse must round-trip. Catches registry typos early.
  void spot_check() const {
    const auto chart = detail::Chart::for_domain(domain_);
    const double center = chart.expandable ? 0.0 : 0.5;
    const double span = chart.expandable ? 3.0 : 0.49;
    std::vector<std::pair<double, double>> seen;  // (t, f(t))
    for (int k = -2; k <= 2; ++k) {
      const double t = chart.to_t(center + k * span / 2.0);
      if (!domain_.contains(t)) continue;
      double v;
      try {
        v = forward_(t);
      } catch (const Error&) {
        continue;
      }
      if (!std::isfinite(v)) continue;
      seen.emplace_back(t, v);
      if (inverse_) {
        const double back = inverse_(v);
        if (std::abs(back - t) > 1e-10 * std::max(1.0, std::abs(t)))
          throw InvariantError("generator '" + label_ +
                               "': inverse(forward(" + fmt(t) +
                               ")) = " + fmt(back) + ", not a round trip");
      }
    }
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 1; i < seen.size(); ++i) {
      const double dv = seen[i].second - seen[i - 1].second;
      if ((increasing() && dv <= 0.0) || (!increasing() && dv >= 0.0))
        throw InvariantError("generator '" + label_ + "' is not strictly " +
                             (increasing() ? "increasing" : "decreasing") +
                             " between t=" + fmt(seen[i - 1].first) +
                             " and t=" + fmt(seen[i].first));
    }
  }

  std::string label_;
  Interval domain_;
  std::function<double(double)> forward_;
  std::function<double(double)> inverse_;
  Monotone direction_;
};

// ---- built-in generators -------------------------------------------------

inline Generator identity_generator() {
  return Generator("identity", Interval::real_line(),
                   [](double t) { return t; }, [](double y) { return y; },
                   Monotone::increasing);
}

inline Generator log_generator() {
  return Generator("log", Interval::positive(),
                   [](double t) { return std::log(t); },
                   [](double y) { return std::exp(y); },
                   Monotone::increasing);
}

inline Generator exp_generator() {
  return Generator("exp", Interval::real_line(),
                   [](double t) { return std::exp(t); },
                   [](double y) { return std::log(y); },
                   Monotone::increasing);
}

// t^r on (0, inf), r != 0.
inline Generator power_generator(double r) {
  if (r == 0.0 || !std::isfinite(r))
    throw InvariantError("power generator needs a finite nonzero exponent");
  return Generator("power:" + fmt(r), Interval::positive(),
                   [r](double t) { return std::pow(t, r); },
                   [r](double y) { return std::pow(y, 1.0 / r); },
                   r > 0 ? Monotone::increasing : Monotone::decreasing);
}

// a*log t + b on (0, inf), a != 0.
inline Generator affine_log_generator(double a, double b) {
  if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b))
    throw InvariantError("affine-log generator needs finite a != 0 and b");
  return Generator("affine-log:" + fmt(a) + ":" + fmt(b), Interval::positive(),
                   [a, b](double t) { return a * std::log(t) + b; },
                   [a, b](double y) { return std::exp((y - b) / a); },
                   a > 0 ? Monotone::increasing : Monotone::decreasing);
}

// t + t^3 on the real line; no closed-form inverse registered.
inline Generator poly_cube_generator() {
  return Generator("poly-cube", Interval::real_line(),
                   [](double t) { return t + t * t * t; },
                   Monotone::increasing);
}

// Strictly monotone piecewise-linear interpolant of (t, y) knots. The exact
// piecewise-linear inverse is registered.
inline Generator table_generator(std::vector<double> ts, std::vector<double> ys,
                                 std::string label = "table") {
  if (ts.size() != ys.size())
    throw InvariantError("table generator: column lengths differ");
  if (ts.size() < 2)
    throw InvariantError("table generator needs at least 2 knots");
  for (std::size_t i = 0; i + 1 < ts.size(); ++i)
    if (!(ts[i] < ts[i + 1]))
      throw InvariantError("table generator: t column not strictly increasing at row " +
                           std::to_string(i + 1));
  const bool inc = ys.front() < ys.back();
  for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
    const bool step_inc = ys[i] < ys[i + 1];
    if (ys[i] == ys[i + 1] || step_inc != inc)
      throw InvariantError("table generator: value column not strictly monotone at row " +
                           std::to_string(i + 1));
  }
  const Interval dom = Interval::closed(ts.front(), ts.back());
  auto xs = std::make_shared<const std::vector<double>>(std::move(ts));
  auto vs = std::make_shared<const std::vector<double>>(std::move(ys));

  auto forward = [xs, vs](double t) {
    const auto& x = *xs;
    const auto& v = *vs;
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t i = (it == x.begin()) ? 0 : (it - x.begin() - 1);
    if (i + 1 >= x.size()) i = x.size() - 2;
    return v[i] + (t - x[i]) * (v[i + 1] - v[i]) / (x[i + 1] - x[i]);
  };
  const bool fwd_inc = inc;
  auto inverse = [xs, vs, fwd_inc](double y) {
    const auto& x = *xs;
    const auto& v = *vs;
    double vmin = fwd_inc ? v.front() : v.back();
    double vmax = fwd_inc ? v.back() : v.front();
    const double slack = 1e-12 * (vmax - vmin);
    if (y < vmin - slack || y > vmax + slack)
      throw InversionFailure("table value " + fmt(y) + " outside range [" +
                             fmt(vmin) + ", " + fmt(vmax) + "]");
    y = std::clamp(y, vmin, vmax);
    // find segment with v[i] .. v[i+1] containing y
    std::size_t lo = 0, hi = v.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      const bool left = fwd_inc ? (y < v[mid]) : (y > v[mid]);
      (left ? hi : lo) = mid;
    }
    return x[lo] + (y - v[lo]) * (x[hi] - x[lo]) / (v[hi] - v[lo]);
  };
  return Generator(std::move(label), dom, std::move(forward),
                   std::move(inverse),
                   inc ? Monotone::increasing : Monotone::decreasing);
}

// log of a positive-valued generator. Deliberately registers no closed-form
// inverse: callers comparing a quasigeometric evaluation against the
// log-composed quasiarithmetic route get two genuinely independent paths.
inline Generator compose_log(const Generator& g) {
  return Generator::unchecked(
      "log(" + g.label() + ")", g.domain(),
      [g](double t) {
        const double v = g.forward_unchecked(t);
        if (!(v > 0.0))
          throw DomainError("generator '" + g.label() + "' is not positive at t=" +
                            fmt(t) + " (value " + fmt(v) + ")");
        return std::log(v);
      },
      nullptr, g.direction());
}

// a*g + b, a != 0. Same mean for every (a, b); used by the equivalence tests.
inline Generator affine_of(double a, double b, const Generator& g) {
  if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b))
    throw InvariantError("affine transform needs finite a != 0 and b");
  std::function<double(double)> inv;
  if (g.has_closed_inverse())
    inv = [a, b, g](double y) { return g.invert((y - b) / a); };
  const Monotone dir = (a > 0) == g.increasing() ? Monotone::increasing
                                                 : Monotone::decreasing;
  return Generator::unchecked(
      fmt(a) + "*" + g.label() + "+" + fmt(b), g.domain(),
      [a, b, g](double t) { return a * g.forward_unchecked(t) + b; },
      std::move(inv), dir);
}

}  // namespace means

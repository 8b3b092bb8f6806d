#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "means/check_report.hpp"
#include "means/errors.hpp"
#include "means/format.hpp"
#include "means/generator.hpp"
#include "means/mean_spec.hpp"
#include "means/sampling.hpp"
#include "means/weights.hpp"

// Numerical verification of the functional equations that characterize the
// mean families. Each check samples deterministically, reports the worst
// residual and the input attaining it, and decides pass/fail against a
// per-check tolerance: conforming cases sit near machine epsilon while
// counterexamples land at 1e-2 or far above, so the thresholds separate
// cleanly.

namespace means {

namespace detail {

inline double sanitize(double residual) {
  return std::isfinite(residual) ? std::abs(residual)
                                 : std::numeric_limits<double>::infinity();
}

// Rethrows evaluation errors with the offending input attached, preserving
// the concrete error type.
template <class F>
double guarded(F&& f, std::span<const double> xs, const std::string& check) {
  const auto ctx = [&](const Error& e) {
    return std::string(e.what()) + " [in " + check + " at input (" +
           fmt_join(xs) + ")]";
  };
  try {
    return f();
  } catch (const DomainError& e) {
    throw DomainError(ctx(e));
  } catch (const ArityMismatch& e) {
    throw ArityMismatch(ctx(e));
  } catch (const InversionFailure& e) {
    throw InversionFailure(ctx(e));
  } catch (const InvariantError& e) {
    throw InvariantError(ctx(e));
  }
}

struct WorstTracker {
  double max_residual = 0.0;
  std::vector<double> worst;

  void update(double residual, std::span<const double> xs) {
    if (worst.empty() || residual > max_residual) {
      max_residual = residual;
      worst.assign(xs.begin(), xs.end());
    }
  }
};

inline CheckReport finish(std::string name, const WorstTracker& t,
                          std::size_t samples, double tol) {
  CheckReport r;
  r.check_name = std::move(name);
  r.max_residual = t.max_residual;
  r.worst_input = t.worst;
  r.samples = samples;
  r.tolerance = tol;
  r.pass = t.max_residual <= tol;
  return r;
}

inline std::vector<double> negate(std::span<const double> xs) {
  std::vector<double> out(xs.begin(), xs.end());
  for (auto& x : out) x = -x;
  return out;
}

}  // namespace detail

// min(xs) <= M(xs) <= max(xs); residual is the overshoot. For strict
// families, boundary hits on well-separated nonconstant tuples are counted
// separately in the extras.
inline CheckReport check_mean_axiom(const MeanSpec& spec,
                                    const SampleConfig& cfg) {
  const char* name = "mean-axiom";
  const auto eff = detail::positive_effective_range(cfg.range, spec.domain());
  const auto tuples = log_uniform_tuples(cfg, eff);
  detail::WorstTracker t;
  std::size_t strict_violations = 0;
  for (const auto& xs : tuples) {
    const double m =
        detail::guarded([&] { return spec.eval(xs); }, xs, name);
    const auto [mn, mx] = detail::minmax_of(xs);
    const double res =
        detail::sanitize(std::max({0.0, mn - m, m - mx}));
    t.update(res, xs);
    if (spec.is_strict() && mx > mn * (1.0 + 1e-12) && (m <= mn || m >= mx))
      ++strict_violations;
  }
  CheckReport r = detail::finish(name, t, tuples.size(), 1e-12);
  if (spec.is_strict())
    r.extras.emplace_back("strict_violations",
                          std::to_string(strict_violations));
  return r;
}

// M(x_1..x_n) * M(1/x_1..1/x_n) = 1
inline CheckReport check_reciprocal_self_conjugacy(const MeanSpec& spec,
                                                   const SampleConfig& cfg,
                                                   double tol = 1e-10) {
  const char* name = "reciprocal-self-conjugacy";
  const auto eff = reciprocal_symmetric_range(cfg.range, spec.domain());
  SampleConfig c = cfg;
  c.range = eff;
  const auto tuples = log_uniform_tuples(c, eff);
  detail::WorstTracker t;
  for (const auto& xs : tuples) {
    const double res = detail::guarded(
        [&] {
          const double m = spec.eval(xs);
          const double mr = spec.eval(reciprocal_image(xs));
          return detail::sanitize(m * mr - 1.0);
        },
        xs, name);
    t.update(res, xs);
  }
  return detail::finish(name, t, tuples.size(), tol);
}

// ln M(e^{t_1}..e^{t_n}) must be odd; residual is |M^(-ts) + M^(ts)|. The
// verdict of the reciprocal product check on the same config is recorded
// alongside, since the two conditions are equivalent.
inline CheckReport check_exp_conjugate_odd(const MeanSpec& spec,
                                           const SampleConfig& cfg,
                                           double tol = 1e-10) {
  const char* name = "exp-conjugate-odd";
  const auto eff = reciprocal_symmetric_range(cfg.range, spec.domain());
  const double half = std::log(eff.upper());
  const auto tuples = symmetric_uniform_tuples(cfg, half);
  detail::WorstTracker t;
  for (const auto& ts : tuples) {
    const double res = detail::guarded(
        [&] {
          std::vector<double> xs(ts.size()), rs(ts.size());
          for (std::size_t j = 0; j < ts.size(); ++j) {
            xs[j] = std::exp(ts[j]);
            rs[j] = std::exp(-ts[j]);
          }
          const double plus = std::log(spec.eval(xs));
          const double minus = std::log(spec.eval(rs));
          return detail::sanitize(plus + minus);
        },
        ts, name);
    t.update(res, ts);
  }
  CheckReport r = detail::finish(name, t, tuples.size(), tol);
  const CheckReport recip = check_reciprocal_self_conjugacy(spec, cfg, tol);
  r.extras.emplace_back("reciprocal_verdict", recip.pass ? "pass" : "fail");
  r.extras.emplace_back("agrees_reciprocal",
                        (recip.pass == r.pass) ? "yes" : "no");
  return r;
}

// phi(1/x) = a*phi(x) + b for some constants. (a, b) is determined exactly
// from the anchor points x=2 and x=3, then validated out of sample; the
// residual is normalized by the spread of phi over the samples.
inline CheckReport check_generator_affine_reciprocal(const Generator& gen,
                                                     const SampleConfig& cfg,
                                                     double tol = 1e-8) {
  const char* name = "generator-affine-reciprocal";
  const auto eff = reciprocal_symmetric_range(cfg.range, gen.domain());
  if (!gen.domain().contains(2.0) || !gen.domain().contains(1.0 / 3.0))
    throw DomainError("generator '" + gen.label() +
                      "' must cover the anchor points 1/3..3");
  const double f2 = gen(2.0), f3 = gen(3.0);
  const double denom = f2 - f3;
  if (std::abs(denom) <
      1e-14 * std::max({1.0, std::abs(f2), std::abs(f3)}))
    throw DegenerateFit("anchor system is singular for generator '" +
                        gen.label() + "'");
  const double a = (gen(0.5) - gen(1.0 / 3.0)) / denom;
  const double b = gen(0.5) - a * f2;

  const auto samples = log_uniform_scalars(cfg, eff);
  double lo_phi = std::numeric_limits<double>::infinity();
  double hi_phi = -lo_phi;
  for (double x : samples) {
    const double v = gen(x);
    lo_phi = std::min(lo_phi, v);
    hi_phi = std::max(hi_phi, v);
  }
  const double scale = std::max(hi_phi - lo_phi, 1e-300);

  detail::WorstTracker t;
  for (double x : samples) {
    const std::vector<double> xs = {x};
    const double res = detail::guarded(
        [&] {
          return detail::sanitize((gen(1.0 / x) - (a * gen(x) + b)) / scale);
        },
        xs, name);
    t.update(res, xs);
  }
  CheckReport r = detail::finish(name, t, samples.size(), tol);
  r.fitted = {a, b};
  return r;
}

// phi(-t) + phi(t) = 2*phi(0): phi - phi(0) must be odd. The same verdict
// must come out of sampling the oddness of the induced quasiarithmetic mean
// directly, so that agreement is recorded in the extras.
inline CheckReport check_generator_odd_shift(const Generator& gen,
                                             const SampleConfig& cfg,
                                             double tol = 1e-10) {
  const char* name = "generator-odd-shift";
  const double half = symmetric_halfwidth(cfg, gen.domain());
  const double center2 = 2.0 * gen(0.0);
  const auto tuples = symmetric_uniform_tuples(cfg, half);

  detail::WorstTracker t;
  for (const auto& ts : tuples)
    for (double s : ts) {
      const std::vector<double> xs = {s};
      const double res = detail::guarded(
          [&] { return detail::sanitize(gen(-s) + gen(s) - center2); }, xs,
          name);
      t.update(res, xs);
    }

  // direct mean-oddness residual with uniform weights
  const Weights w = Weights::uniform(cfg.arity);
  double mean_res = 0.0;
  for (const auto& ts : tuples) {
    const double res = detail::guarded(
        [&] {
          const double plus = eval_quasiarithmetic(gen, w, ts);
          const double minus = eval_quasiarithmetic(gen, w, detail::negate(ts));
          return detail::sanitize(plus + minus);
        },
        ts, name);
    mean_res = std::max(mean_res, res);
  }

  CheckReport r =
      detail::finish(name, t, tuples.size() * cfg.arity, tol);
  const bool mean_odd = mean_res <= std::max(tol, 1e-9);
  r.extras.emplace_back("mean_odd_residual", fmt(mean_res));
  r.extras.emplace_back("agrees_mean_oddness",
                        (mean_odd == r.pass) ? "yes" : "no");
  return r;
}

// gamma(x) * gamma(1/x) = gamma(1)^2, in relative form.
inline CheckReport check_generator_multiplicative_reciprocal(
    const Generator& gen, const SampleConfig& cfg, double tol = 1e-10) {
  const char* name = "generator-multiplicative-reciprocal";
  const auto eff = reciprocal_symmetric_range(cfg.range, gen.domain());
  if (!gen.domain().contains(1.0))
    throw DomainError("generator '" + gen.label() + "' must cover x=1");
  const double g1 = gen(1.0);
  if (!(g1 > 0.0))
    throw DomainError("generator '" + gen.label() +
                      "' is not positive at x=1");
  const auto samples = log_uniform_scalars(cfg, eff);
  detail::WorstTracker t;
  for (double x : samples) {
    const std::vector<double> xs = {x};
    const double res = detail::guarded(
        [&] {
          const double gx = gen(x), gr = gen(1.0 / x);
          if (!(gx > 0.0) || !(gr > 0.0))
            throw DomainError("generator '" + gen.label() +
                              "' is not positive at x=" + fmt(x));
          return detail::sanitize(gx * gr / (g1 * g1) - 1.0);
        },
        xs, name);
    t.update(res, xs);
  }
  return detail::finish(name, t, samples.size(), tol);
}

// The quasigeometric mean with generator gamma equals the quasiarithmetic
// mean with generator log(gamma). The two sides are evaluated through
// independent code paths (direct weighted product with gamma's own inverse
// vs. log-composed sum with numeric inversion).
inline CheckReport check_quasigeometric_equivalence(const Generator& gen,
                                                    const Weights& w,
                                                    const SampleConfig& cfg,
                                                    double tol = 1e-10) {
  const char* name = "quasigeometric-equivalence";
  const auto eff = detail::positive_effective_range(cfg.range, gen.domain());
  SampleConfig c = cfg;
  c.arity = w.size();
  const auto tuples = log_uniform_tuples(c, eff);
  const Generator log_gen = compose_log(gen);
  detail::WorstTracker t;
  for (const auto& xs : tuples) {
    const double res = detail::guarded(
        [&] {
          const double qg = eval_quasigeometric(gen, w, xs);
          const double qa = eval_quasiarithmetic(log_gen, w, xs);
          return detail::sanitize((qg - qa) /
                                  std::max(std::abs(qa), 1e-300));
        },
        xs, name);
    t.update(res, xs);
  }
  return detail::finish(name, t, tuples.size(), tol);
}

// M(t*xs) = t*M(xs) for t > 0, in relative form over a fixed scale ladder.
// A scale that exits a restricted generator domain raises DomainError rather
// than being skipped.
inline CheckReport check_homogeneity(const MeanSpec& spec,
                                     const SampleConfig& cfg,
                                     double tol = 1e-10) {
  const char* name = "homogeneity";
  static constexpr double kScales[] = {1e-3, 0.5, 2.0, 1e3};
  const auto eff = detail::positive_effective_range(cfg.range, spec.domain());
  const auto tuples = log_uniform_tuples(cfg, eff);
  detail::WorstTracker t;
  for (const auto& xs : tuples) {
    const double m =
        detail::guarded([&] { return spec.eval(xs); }, xs, name);
    for (double scale : kScales) {
      std::vector<double> scaled(xs);
      for (auto& x : scaled) x *= scale;
      const double ms = detail::guarded(
          [&] { return spec.eval(scaled); }, scaled, name);
      t.update(detail::sanitize(ms / (scale * m) - 1.0), xs);
    }
  }
  return detail::finish(name, t, tuples.size() * std::size(kScales), tol);
}

// p(p(u+v)/2 + (1-p)u) + (1-p)(pv + (1-p)(u+v)/2) = (u+v)/2
inline CheckReport check_daroczy_pales_identity(double p, double u, double v) {
  if (!(p > 0.0 && p < 1.0))
    throw InvariantError("p must lie strictly between 0 and 1, got " + fmt(p));
  const double mid = 0.5 * (u + v);
  const double lhs = p * (p * mid + (1.0 - p) * u) +
                     (1.0 - p) * (p * v + (1.0 - p) * mid);
  const double tol = 1e-12 * std::max({1.0, std::abs(u), std::abs(v)});
  CheckReport r;
  r.check_name = "daroczy-pales";
  r.max_residual = detail::sanitize(lhs - mid);
  r.worst_input = {p, u, v};
  r.samples = 1;
  r.tolerance = tol;
  r.pass = r.max_residual <= tol;
  return r;
}

// Seeded sweep of the identity over random (p, u, v) triples.
inline CheckReport check_daroczy_pales_sampled(const SampleConfig& cfg) {
  Sampler s(cfg.seed);
  detail::WorstTracker t;
  double tol = 1e-12;
  for (std::size_t i = 0; i < cfg.tuples; ++i) {
    const double p = s.uniform(1e-6, 1.0 - 1e-6);
    const double u = s.uniform(-1e3, 1e3);
    const double v = s.uniform(-1e3, 1e3);
    const CheckReport one = check_daroczy_pales_identity(p, u, v);
    // normalize each residual by its own scale so one tolerance applies
    const double scaled = one.max_residual / (one.tolerance / 1e-12);
    t.update(scaled, std::vector<double>{p, u, v});
  }
  CheckReport r = detail::finish("daroczy-pales", t, cfg.tuples, tol);
  return r;
}

// Classification against the uniqueness result: a mean on (0, inf) that is
// both homogeneous and reciprocally self-conjugate must be the weighted
// geometric mean, and the sampled deviation from it is reported.
struct ClassifyReport {
  CheckReport homogeneity;
  CheckReport reciprocal;
  bool must_be_geometric = false;
  std::optional<double> deviation_from_geometric;
  std::string weights_basis;  // "spec" or "uniform"

  std::string record() const {
    std::string s = "classify=";
    s += must_be_geometric ? "must-be-geometric" : "not-geometric";
    if (deviation_from_geometric)
      s += " max_rel_deviation=" + fmt(*deviation_from_geometric);
    s += " weights=" + weights_basis;
    s += " homogeneous=" + std::string(homogeneity.pass ? "yes" : "no");
    s += " reciprocal=" + std::string(reciprocal.pass ? "yes" : "no");
    return s;
  }
};

inline ClassifyReport classify_mean(const MeanSpec& spec,
                                    const SampleConfig& cfg) {
  ClassifyReport out{check_homogeneity(spec, cfg),
                     check_reciprocal_self_conjugacy(spec, cfg),
                     false,
                     std::nullopt,
                     "spec"};
  out.must_be_geometric = out.homogeneity.pass && out.reciprocal.pass;
  if (!out.must_be_geometric) return out;

  const Weights* w = spec.weights();
  Weights basis = w ? *w : Weights::uniform(spec.arity());
  out.weights_basis = w ? "spec" : "uniform";
  const auto eff = reciprocal_symmetric_range(cfg.range, spec.domain());
  SampleConfig c = cfg;
  c.arity = spec.arity();
  double dev = 0.0;
  for (const auto& xs : log_uniform_tuples(c, eff)) {
    const double m = spec.eval(xs);
    const double g = eval_geometric(basis, xs);
    dev = std::max(dev, detail::sanitize((m - g) / g));
  }
  out.deviation_from_geometric = dev;
  return out;
}

// Every check applicable to the mean, with the cross-check equivalences
// recorded in the extras:
//   (a) reciprocal self-conjugacy of a quasiarithmetic mean  <=>  its
//       generator satisfies phi(1/x) = a*phi(x) + b
//   (b) reciprocal self-conjugacy  <=>  oddness of the exp-conjugate
//   (c) reciprocal self-conjugacy of a quasigeometric mean  <=>  its
//       generator satisfies gamma(x)*gamma(1/x) = gamma(1)^2
//   (d) oddness of a quasiarithmetic mean on the real line  <=>  its
//       generator minus its value at 0 is odd
inline std::vector<CheckReport> check_all_mean(const MeanSpec& spec,
                                               const SampleConfig& cfg,
                                               std::optional<double> tol = {}) {
  const auto tol_or = [&](double dflt) { return tol ? *tol : dflt; };
  std::vector<CheckReport> out;
  out.push_back(check_mean_axiom(spec, cfg));
  const CheckReport recip =
      check_reciprocal_self_conjugacy(spec, cfg, tol_or(1e-10));
  out.push_back(recip);
  out.push_back(check_exp_conjugate_odd(spec, cfg, tol_or(1e-10)));
  out.push_back(check_homogeneity(spec, cfg, tol_or(1e-10)));

  if (const auto* qa = std::get_if<Quasiarithmetic>(&spec.node())) {
    if (qa->gen.domain().contains(2.0) && qa->gen.domain().contains(1.0 / 3.0)) {
      CheckReport affine =
          check_generator_affine_reciprocal(qa->gen, cfg, tol_or(1e-8));
      affine.extras.emplace_back("mean_reciprocal_verdict",
                                 recip.pass ? "pass" : "fail");
      affine.extras.emplace_back("equivalence_a",
                                 (affine.pass == recip.pass) ? "agree"
                                                             : "disagree");
      out.push_back(std::move(affine));
    }
    if (-qa->gen.domain().lower() == qa->gen.domain().upper())
      out.push_back(check_generator_odd_shift(qa->gen, cfg, tol_or(1e-10)));
  }
  if (const auto* qg = std::get_if<Quasigeometric>(&spec.node())) {
    CheckReport mult = check_generator_multiplicative_reciprocal(
        qg->gen, cfg, tol_or(1e-10));
    mult.extras.emplace_back("mean_reciprocal_verdict",
                             recip.pass ? "pass" : "fail");
    mult.extras.emplace_back("equivalence_c",
                             (mult.pass == recip.pass) ? "agree" : "disagree");
    out.push_back(std::move(mult));
    out.push_back(
        check_quasigeometric_equivalence(qg->gen, qg->w, cfg, tol_or(1e-10)));
  }
  return out;
}

// Every check applicable to a bare generator, decided by domain shape and a
// positivity probe.
inline std::vector<CheckReport> check_all_generator(
    const Generator& gen, const SampleConfig& cfg,
    std::optional<double> tol = {}) {
  const auto tol_or = [&](double dflt) { return tol ? *tol : dflt; };
  std::vector<CheckReport> out;
  const Interval dom = gen.domain();
  if (dom.contains(2.0) && dom.contains(1.0 / 3.0))
    out.push_back(
        check_generator_affine_reciprocal(gen, cfg, tol_or(1e-8)));
  if (-dom.lower() == dom.upper())
    out.push_back(check_generator_odd_shift(gen, cfg, tol_or(1e-10)));
  if (dom.contains(1.0) && gen(1.0) > 0.0) {
    bool positive = true;
    try {
      const auto eff = reciprocal_symmetric_range(cfg.range, dom);
      positive = gen(eff.lower()) > 0.0 && gen(eff.upper()) > 0.0;
    } catch (const Error&) {
      positive = false;
    }
    if (positive) {
      out.push_back(check_generator_multiplicative_reciprocal(gen, cfg,
                                                              tol_or(1e-10)));
      out.push_back(check_quasigeometric_equivalence(
          gen, Weights::uniform(cfg.arity), cfg, tol_or(1e-10)));
    }
  }
  if (out.empty())
    throw InvariantError("no check applies to generator '" + gen.label() +
                         "' on " + dom.str());
  return out;
}

}  // namespace means

#pragma once

#include <algorithm>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "means/checks.hpp"
#include "means/errors.hpp"
#include "means/format.hpp"
#include "means/fx_report.hpp"
#include "means/rate_series.hpp"
#include "means/registry.hpp"
#include "means/sampling.hpp"

namespace means::cli {

struct EvalCmd {
  std::string mean;
  std::optional<std::string> weights;
  std::vector<double> inputs;
};

struct CheckCmd {
  std::string which = "all";
  std::optional<std::string> mean;
  std::optional<std::string> generator;
  std::optional<std::string> weights;
  std::uint64_t seed = 1;
  std::size_t samples = 256;
  std::string range = "1e-6:1e6";
  std::optional<double> tol;
  std::string format = "table";
};

struct FxReportCmd {
  std::string csv;
  std::vector<std::string> means;
  std::optional<std::string> weights;
  double tol = 1e-9;
  std::optional<std::string> window;
  std::string format = "table";
};

struct SweepCmd {
  std::string csv;
  double r_min = -1.0;
  double r_max = 1.0;
  std::size_t steps = 21;
  std::string format = "records";
};

struct HelpCmd {
  std::string text;
};

using Command = std::variant<EvalCmd, CheckCmd, FxReportCmd, SweepCmd, HelpCmd>;

namespace detail {

inline void build_app(CLI::App& app, EvalCmd& ev, CheckCmd& ck, FxReportCmd& fx,
                      SweepCmd& sw) {
  app.require_subcommand(1);

  auto* eval = app.add_subcommand("eval", "Evaluate a mean at given inputs");
  eval->add_option("--mean", ev.mean, "Mean spec, e.g. geometric:0.5,0.5")
      ->required();
  eval->add_option("--weights", ev.weights,
                   "Weights appended to the mean spec (w1,w2,...)");
  eval->add_option("inputs", ev.inputs, "Input values; put them after --")
      ->expected(-1);

  auto* check = app.add_subcommand(
      "check", "Run property checks against a mean or generator");
  check->add_option("which", ck.which,
                    "Check name or 'all' (mean-axiom, reciprocal, exp-odd, "
                    "homogeneity, affine-reciprocal, odd-shift, "
                    "mult-reciprocal, qg-equivalence, daroczy-pales, classify)");
  check->add_option("--mean", ck.mean, "Mean spec to check");
  check->add_option("--generator", ck.generator, "Generator spec to check");
  check->add_option("--weights", ck.weights, "Weights (w1,w2,...)");
  check->add_option("--seed", ck.seed, "Sampling seed");
  check->add_option("--samples", ck.samples, "Sample tuples per check");
  check->add_option("--range", ck.range, "Sampling range lo:hi");
  check->add_option("--tol", ck.tol, "Tolerance override for every check");
  check->add_option("--format", ck.format, "Output format: table | records");

  auto* fxr = app.add_subcommand(
      "fx-report", "Cross-desk consistency of means on a rate series");
  fxr->add_option("csv", fx.csv, "CSV file with header timestamp,rate")
      ->required();
  fxr->add_option("--mean", fx.means, "Mean spec (repeatable)")->required();
  fxr->add_option("--weights", fx.weights,
                  "Weights appended to every mean spec");
  fxr->add_option("--tol", fx.tol, "Consistency tolerance on |product-1|");
  fxr->add_option("--window", fx.window, "Index window begin:end (half-open)");
  fxr->add_option("--format", fx.format, "Output format: table | records");

  auto* sweep = app.add_subcommand(
      "sweep", "log_gap of the power mean over an exponent grid");
  sweep->add_option("csv", sw.csv, "CSV file with header timestamp,rate")
      ->required();
  sweep->add_option("--r-min", sw.r_min, "Grid start");
  sweep->add_option("--r-max", sw.r_max, "Grid end");
  sweep->add_option("--steps", sw.steps, "Grid size");
  sweep->add_option("--format", sw.format, "Output format: table | records");
}

inline std::pair<double, double> parse_range(const std::string& s) {
  const auto sep = s.find(':');
  if (sep == std::string::npos)
    throw UsageError("--range wants lo:hi, got '" + s + "'");
  const auto lo = means::detail::parse_double(s.substr(0, sep));
  const auto hi = means::detail::parse_double(s.substr(sep + 1));
  if (!lo || !hi || !(*lo < *hi))
    throw UsageError("--range wants numeric lo < hi, got '" + s + "'");
  return {*lo, *hi};
}

inline std::pair<std::size_t, std::size_t> parse_window(const std::string& s) {
  const auto sep = s.find(':');
  if (sep == std::string::npos)
    throw UsageError("--window wants begin:end, got '" + s + "'");
  try {
    return {std::stoul(s.substr(0, sep)), std::stoul(s.substr(sep + 1))};
  } catch (const std::exception&) {
    throw UsageError("--window wants integer begin:end, got '" + s + "'");
  }
}

// --weights is sugar for appending the list to the spec string; the grammar
// places weights last in every family that has them.
inline std::string with_weights(const std::string& spec,
                                const std::optional<std::string>& weights) {
  return weights ? spec + ":" + *weights : spec;
}

inline void check_format(const std::string& f) {
  if (f != "table" && f != "records")
    throw UsageError("--format wants 'table' or 'records', got '" + f + "'");
}

}  // namespace detail

inline Command parse_args(std::vector<std::string> args) {
  CLI::App app{"Generalized means, functional-equation checks, and exchange-rate consistency reports"};
  app.name("means");
  EvalCmd ev;
  CheckCmd ck;
  FxReportCmd fx;
  SweepCmd sw;
  detail::build_app(app, ev, ck, fx, sw);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    return HelpCmd{app.help()};
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string("usage: ") + e.what());
  }
  if (app.got_subcommand("eval")) return ev;
  if (app.got_subcommand("check")) return ck;
  if (app.got_subcommand("fx-report")) return fx;
  return sw;
}

namespace detail {

inline int run_eval(const EvalCmd& cmd, std::ostream& out) {
  if (cmd.inputs.size() < 2)
    throw UsageError("eval needs at least 2 inputs after --");
  const MeanSpec spec =
      parse_mean(with_weights(cmd.mean, cmd.weights), cmd.inputs.size());
  out << fmt(spec.eval(cmd.inputs)) << "\n";
  return 0;
}

struct CheckTarget {
  std::optional<MeanSpec> mean;
  std::optional<Generator> gen;
  SampleConfig cfg;
};

inline CheckTarget resolve_target(const CheckCmd& cmd) {
  CheckTarget t;
  const auto [lo, hi] = parse_range(cmd.range);
  t.cfg.seed = cmd.seed;
  t.cfg.tuples = cmd.samples;
  t.cfg.range = Interval::closed(lo, hi);
  t.cfg.arity = 2;
  if (cmd.mean && cmd.generator)
    throw UsageError("give either --mean or --generator, not both");
  if (cmd.weights) {
    const auto ws = means::detail::parse_double_list(*cmd.weights);
    if (!ws) throw UsageError("bad --weights '" + *cmd.weights + "'");
    t.cfg.arity = ws->size();
  }
  if (cmd.mean) {
    t.mean = parse_mean(with_weights(*cmd.mean, cmd.weights), t.cfg.arity);
    t.cfg.arity = t.mean->arity();
  } else if (cmd.generator) {
    t.gen = make_generator(*cmd.generator);
  }
  return t;
}

inline int run_check(const CheckCmd& cmd, std::ostream& out) {
  check_format(cmd.format);
  CheckTarget t = resolve_target(cmd);
  const SampleConfig& cfg = t.cfg;

  std::string object = "none";
  if (t.mean)
    object = t.mean->name();
  else if (t.gen)
    object = "generator:" + t.gen->label();
  out << "# object=" << object << " seed=" << cfg.seed
      << " samples=" << cfg.tuples << " range=" << cfg.range.str()
      << " arity=" << cfg.arity << "\n";

  const auto need_mean = [&]() -> const MeanSpec& {
    if (!t.mean) throw UsageError("check '" + cmd.which + "' needs --mean");
    return *t.mean;
  };
  const auto need_gen = [&]() -> const Generator& {
    if (t.gen) return *t.gen;
    throw UsageError("check '" + cmd.which + "' needs --generator");
  };
  const auto tol_or = [&](double dflt) { return cmd.tol ? *cmd.tol : dflt; };

  std::vector<CheckReport> reports;
  std::optional<ClassifyReport> classify;
  std::string classify_skip;
  const std::string& which = cmd.which;
  if (which == "all") {
    if (t.mean) {
      reports = check_all_mean(*t.mean, cfg, cmd.tol);
      try {
        classify = classify_mean(*t.mean, cfg);
      } catch (const Error& e) {
        classify_skip = e.what();
      }
    } else if (t.gen) {
      reports = check_all_generator(*t.gen, cfg, cmd.tol);
    } else {
      throw UsageError("check all needs --mean or --generator");
    }
  } else if (which == "mean-axiom") {
    reports.push_back(check_mean_axiom(need_mean(), cfg));
  } else if (which == "reciprocal") {
    reports.push_back(
        check_reciprocal_self_conjugacy(need_mean(), cfg, tol_or(1e-10)));
  } else if (which == "exp-odd") {
    reports.push_back(
        check_exp_conjugate_odd(need_mean(), cfg, tol_or(1e-10)));
  } else if (which == "homogeneity") {
    reports.push_back(check_homogeneity(need_mean(), cfg, tol_or(1e-10)));
  } else if (which == "affine-reciprocal") {
    reports.push_back(
        check_generator_affine_reciprocal(need_gen(), cfg, tol_or(1e-8)));
  } else if (which == "odd-shift") {
    reports.push_back(
        check_generator_odd_shift(need_gen(), cfg, tol_or(1e-10)));
  } else if (which == "mult-reciprocal") {
    reports.push_back(check_generator_multiplicative_reciprocal(
        need_gen(), cfg, tol_or(1e-10)));
  } else if (which == "qg-equivalence") {
    reports.push_back(check_quasigeometric_equivalence(
        need_gen(), Weights::uniform(cfg.arity), cfg, tol_or(1e-10)));
  } else if (which == "daroczy-pales") {
    reports.push_back(check_daroczy_pales_sampled(cfg));
  } else if (which == "classify") {
    classify = classify_mean(need_mean(), cfg);
  } else {
    throw UsageError("unknown check '" + which + "'");
  }

  if (!reports.empty())
    out << (cmd.format == "records" ? render_records(reports)
                                    : render_table(reports));
  if (classify) {
    out << classify->record() << "\n";
    reports.push_back(classify->homogeneity);
    reports.push_back(classify->reciprocal);
  } else if (!classify_skip.empty()) {
    out << "# classify skipped: " << classify_skip << "\n";
  }

  const bool all_pass = std::all_of(reports.begin(), reports.end(),
                                    [](const CheckReport& r) { return r.pass; });
  return all_pass ? 0 : 1;
}

inline int run_fx_report(const FxReportCmd& cmd, std::ostream& out) {
  check_format(cmd.format);
  RateSeries series = load_series(cmd.csv);
  if (cmd.window) {
    const auto [b, e] = parse_window(*cmd.window);
    series = series.slice(b, e);
  }
  std::vector<ComparisonRow> rows;
  for (const auto& m : cmd.means) {
    ComparisonRow row;
    row.mean_name = with_weights(m, cmd.weights);
    try {
      const MeanSpec spec = parse_mean(row.mean_name, series.size());
      ConsistencyReport rep = consistency_report(series, spec, cmd.tol);
      rep.mean_name = row.mean_name;  // echo the requested spec, not the
                                      // expanded uniform weights
      row.report = std::move(rep);
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  out << (cmd.format == "records" ? render_records(rows) : render_table(rows));
  const bool ok = std::all_of(rows.begin(), rows.end(),
                              [](const ComparisonRow& r) { return r.report.has_value(); });
  return ok ? 0 : 2;
}

inline int run_sweep(const SweepCmd& cmd, std::ostream& out) {
  check_format(cmd.format);
  if (cmd.steps == 0) throw UsageError("--steps must be positive");
  const RateSeries series = load_series(cmd.csv);
  std::vector<double> grid;
  grid.reserve(cmd.steps);
  if (cmd.steps == 1) {
    grid.push_back(cmd.r_min);
  } else {
    for (std::size_t i = 0; i < cmd.steps; ++i)
      grid.push_back(cmd.r_min + (cmd.r_max - cmd.r_min) *
                                     static_cast<double>(i) /
                                     static_cast<double>(cmd.steps - 1));
  }
  const auto sweep = power_sweep(series, grid);
  out << (cmd.format == "records" ? render_sweep_records(sweep)
                                  : render_sweep_table(sweep));
  return 0;
}

}  // namespace detail

// Exit status: 0 success / all checks pass, 1 a check failed,
// 2 usage or evaluation error.
inline int run(const Command& cmd, std::ostream& out) {
  return std::visit(
      [&](const auto& c) -> int {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, EvalCmd>)
          return detail::run_eval(c, out);
        else if constexpr (std::is_same_v<T, CheckCmd>)
          return detail::run_check(c, out);
        else if constexpr (std::is_same_v<T, FxReportCmd>)
          return detail::run_fx_report(c, out);
        else if constexpr (std::is_same_v<T, SweepCmd>)
          return detail::run_sweep(c, out);
        else {
          out << c.text;
          return 0;
        }
      },
      cmd);
}

inline int main(std::vector<std::string> args, std::ostream& out,
                std::ostream& err) {
  try {
    const Command cmd = parse_args(std::move(args));
    return run(cmd, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace means::cli

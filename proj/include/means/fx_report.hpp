#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "means/errors.hpp"
#include "means/format.hpp"
#include "means/mean_spec.hpp"
#include "means/rate_series.hpp"

// The two-desk consistency question: one analyst averages the rate series,
// the other averages the mirrored (reciprocal) series of the same pair.
// Their means agree across desks exactly when the product of the two means
// is 1. log_gap = ln(product) is the headline metric because it is
// antisymmetric under mirroring the series, which |product - 1| is not.

namespace means {

struct ConsistencyReport {
  std::string mean_name;
  double uk_mean = 0.0;  // mean of the series as quoted
  double us_mean = 0.0;  // mean of the mirrored series
  double product = 0.0;  // uk_mean * us_mean, exactly as computed
  double log_gap = 0.0;  // ln(product)
  bool consistent = false;
  double tol = 0.0;

  std::string record() const {
    std::string s = "mean=" + mean_name;
    s += " uk_mean=" + fmt(uk_mean);
    s += " us_mean=" + fmt(us_mean);
    s += " product=" + fmt(product);
    s += " log_gap=" + fmt(log_gap);
    s += " consistent=" + std::string(consistent ? "yes" : "no");
    s += " tol=" + fmt(tol);
    return s;
  }
};

inline ConsistencyReport consistency_report(const RateSeries& series,
                                            const MeanSpec& spec,
                                            double tol = 1e-9) {
  ConsistencyReport r;
  r.mean_name = spec.name();
  r.uk_mean = spec.eval(series.rates());
  r.us_mean = spec.eval(series.mirrored().rates());
  r.product = r.uk_mean * r.us_mean;
  r.log_gap = std::log1p(r.product - 1.0);
  r.tol = tol;
  r.consistent = std::abs(r.product - 1.0) <= tol;
  return r;
}

// One row per requested mean; a row whose evaluation fails carries the error
// message and the remaining rows are still produced.
struct ComparisonRow {
  std::string mean_name;
  std::optional<ConsistencyReport> report;
  std::string error;
};

inline std::vector<ComparisonRow> mean_comparison_table(
    const RateSeries& series, std::span<const MeanSpec> specs, double tol) {
  if (specs.empty())
    throw InvariantError("comparison table needs at least one mean");
  std::vector<ComparisonRow> rows;
  rows.reserve(specs.size());
  for (const auto& spec : specs) {
    ComparisonRow row;
    row.mean_name = spec.name();
    try {
      row.report = consistency_report(series, spec, tol);
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// log_gap of the power mean across an exponent grid; uniform weights over
// the series length. Zero exactly at r = 0 for any series, identically zero
// for a constant series, and antisymmetric in r.
inline std::vector<std::pair<double, double>> power_sweep(
    const RateSeries& series, std::span<const double> r_grid) {
  const Weights w = Weights::uniform(series.size());
  std::vector<std::pair<double, double>> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) {
    const ConsistencyReport rep =
        consistency_report(series, MeanSpec::power(r, w));
    out.emplace_back(r, rep.log_gap);
  }
  return out;
}

inline std::string render_records(std::span<const ComparisonRow> rows) {
  std::string out;
  for (const auto& row : rows) {
    if (row.report)
      out += row.report->record();
    else
      out += "mean=" + row.mean_name + " error=" + row.error;
    out.push_back('\n');
  }
  return out;
}

inline std::string render_table(std::span<const ComparisonRow> rows) {
  const std::vector<std::string> header = {"MEAN",      "UK_MEAN", "US_MEAN",
                                           "PRODUCT",   "LOG_GAP", "CONSISTENT"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : rows) {
    if (row.report) {
      const auto& r = *row.report;
      cells.push_back({r.mean_name, fmt(r.uk_mean), fmt(r.us_mean),
                       fmt(r.product), fmt(r.log_gap),
                       r.consistent ? "yes" : "no"});
    } else {
      cells.push_back({row.mean_name, "error: " + row.error, "", "", "", ""});
    }
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], row[c].size());
  auto emit = [&](const std::vector<std::string>& row) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size())
        line += std::string(width[c] - row[c].size() + 2, ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    return line + "\n";
  };
  std::string out = emit(header);
  for (const auto& row : cells) out += emit(row);
  return out;
}

inline std::string render_sweep_records(
    std::span<const std::pair<double, double>> sweep) {
  std::string out;
  for (const auto& [r, gap] : sweep)
    out += "r=" + fmt(r) + " log_gap=" + fmt(gap) + "\n";
  return out;
}

inline std::string render_sweep_table(
    std::span<const std::pair<double, double>> sweep) {
  std::string out = "R  LOG_GAP\n";
  for (const auto& [r, gap] : sweep) out += fmt(r) + "  " + fmt(gap) + "\n";
  return out;
}

}  // namespace means

#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "means/format.hpp"

namespace means {

// Outcome of one property check. verdict is pass exactly when
// max_residual <= tolerance; worst_input is the sample attaining it, kept so
// every failure reproduces as a one-liner.
struct CheckReport {
  std::string check_name;
  bool pass = false;
  double max_residual = 0.0;
  std::vector<double> worst_input;
  std::size_t samples = 0;
  std::optional<std::pair<double, double>> fitted;  // (a, b) when a fit ran
  double tolerance = 0.0;
  std::vector<std::pair<std::string, std::string>> extras;

  // One key=value record per line; keys in fixed order, extras last.
  std::string record() const {
    std::string s = "check=" + check_name;
    s += " verdict=" + std::string(pass ? "pass" : "fail");
    s += " max_residual=" + fmt(max_residual);
    s += " tolerance=" + fmt(tolerance);
    s += " samples=" + std::to_string(samples);
    s += " worst_input=" + fmt_join(worst_input);
    if (fitted) {
      s += " a=" + fmt(fitted->first);
      s += " b=" + fmt(fitted->second);
    }
    for (const auto& [k, v] : extras) s += " " + k + "=" + v;
    return s;
  }
};

inline std::string render_records(std::span<const CheckReport> reports) {
  std::string out;
  for (const auto& r : reports) {
    out += r.record();
    out.push_back('\n');
  }
  return out;
}

inline std::string render_table(std::span<const CheckReport> reports) {
  const std::vector<std::string> header = {"CHECK",   "VERDICT",     "MAX_RESIDUAL",
                                           "TOL",     "SAMPLES",     "WORST_INPUT",
                                           "DETAILS"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reports) {
    std::string details;
    if (r.fitted)
      details += "a=" + fmt(r.fitted->first) + ",b=" + fmt(r.fitted->second);
    for (const auto& [k, v] : r.extras) {
      if (!details.empty()) details.push_back(' ');
      details += k + "=" + v;
    }
    rows.push_back({r.check_name, r.pass ? "pass" : "FAIL",
                    fmt(r.max_residual), fmt(r.tolerance),
                    std::to_string(r.samples), fmt_join(r.worst_input),
                    details});
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows)
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
  for (const auto& row : rows) out += emit(row);
  return out;
}

}  // namespace means

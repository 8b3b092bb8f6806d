#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "means/errors.hpp"
#include "means/format.hpp"

namespace means {

namespace detail {

inline std::optional<long long> parse_tick(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

// Timestamped strictly positive exchange rates (quote currency per base
// currency). Timestamps are integer ticks or ISO-8601 strings; when every
// entry parses as an integer they are ordered numerically, otherwise
// lexicographically (which is chronological for a uniform ISO-8601 column).
// The timestamps play no role in the math; they are carried for reporting
// and round-tripping.
class RateSeries {
 public:
  RateSeries(std::vector<std::string> timestamps, std::vector<double> rates)
      : ts_(std::move(timestamps)), rates_(std::move(rates)) {
    if (ts_.size() != rates_.size())
      throw InvariantError("timestamp and rate columns differ in length");
    if (rates_.size() < 2)
      throw InvariantError("a rate series needs at least 2 observations, got " +
                           std::to_string(rates_.size()));
    for (std::size_t i = 0; i < rates_.size(); ++i)
      if (!(rates_[i] > 0.0) || !std::isfinite(rates_[i]))
        throw InvariantError("rate " + fmt(rates_[i]) + " at row " +
                             std::to_string(i + 1) + " is not positive");
    bool all_ticks = true;
    std::vector<long long> ticks;
    ticks.reserve(ts_.size());
    for (const auto& s : ts_) {
      const auto v = detail::parse_tick(s);
      if (!v) {
        all_ticks = false;
        break;
      }
      ticks.push_back(*v);
    }
    for (std::size_t i = 1; i < ts_.size(); ++i) {
      const bool increasing =
          all_ticks ? ticks[i - 1] < ticks[i] : ts_[i - 1] < ts_[i];
      if (!increasing)
        throw InvariantError("timestamps not strictly increasing at row " +
                             std::to_string(i + 1) + " ('" + ts_[i] + "')");
    }
  }

  std::size_t size() const { return rates_.size(); }
  std::span<const double> rates() const { return rates_; }
  std::span<const std::string> timestamps() const { return ts_; }

  // Same timestamps, elementwise reciprocal rates; an involution up to
  // rounding.
  RateSeries mirrored() const {
    std::vector<double> inv(rates_);
    for (auto& r : inv) r = 1.0 / r;
    return RateSeries(ts_, std::move(inv));
  }

  // Half-open index window [begin, end).
  RateSeries slice(std::size_t begin, std::size_t end) const {
    if (begin >= end || end > size())
      throw InvariantError("window [" + std::to_string(begin) + ", " +
                           std::to_string(end) + ") invalid for a series of " +
                           std::to_string(size()));
    return RateSeries(
        std::vector<std::string>(ts_.begin() + begin, ts_.begin() + end),
        std::vector<double>(rates_.begin() + begin, rates_.begin() + end));
  }

 private:
  std::vector<std::string> ts_;
  std::vector<double> rates_;
};

// CSV loader. Expected layout: a "timestamp,rate" header, then one
// observation per row; '#' lines are comments and blank lines are skipped.
inline RateSeries load_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::string line;
  std::size_t row = 0;
  bool saw_header = false;
  std::vector<std::string> ts;
  std::vector<double> rates;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!saw_header) {
      std::string h = line;
      for (auto& c : h) c = static_cast<char>(std::tolower(c));
      h.erase(std::remove(h.begin(), h.end(), ' '), h.end());
      if (h != "timestamp,rate")
        throw ParseError("row " + std::to_string(row) +
                         ": expected header 'timestamp,rate', got '" + line +
                         "'");
      saw_header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos ||
        line.find(',', comma + 1) != std::string::npos)
      throw ParseError("row " + std::to_string(row) + ": expected 2 columns");
    const std::string stamp = line.substr(0, comma);
    const std::string rate_str = line.substr(comma + 1);
    char* end = nullptr;
    const double rate = std::strtod(rate_str.c_str(), &end);
    if (rate_str.empty() || end != rate_str.c_str() + rate_str.size())
      throw ParseError("row " + std::to_string(row) + ": bad rate '" +
                       rate_str + "'");
    if (!(rate > 0.0) || !std::isfinite(rate))
      throw InvariantError("row " + std::to_string(row) + ": rate " +
                           fmt(rate) + " is not positive");
    ts.push_back(stamp);
    rates.push_back(rate);
  }
  if (!saw_header) throw ParseError("'" + path + "' has no header row");
  return RateSeries(std::move(ts), std::move(rates));
}

}  // namespace means

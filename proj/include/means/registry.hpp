#pragma once

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "means/errors.hpp"
#include "means/generator.hpp"
#include "means/homeomorphism.hpp"
#include "means/mean_spec.hpp"
#include "means/weights.hpp"

namespace means {

namespace detail {

inline std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::optional<std::vector<double>> parse_double_list(
    const std::string& s) {
  std::vector<double> vals;
  for (const auto& tok : split(s, ',')) {
    auto v = parse_double(tok);
    if (!v) return std::nullopt;
    vals.push_back(*v);
  }
  return vals;
}

}  // namespace detail

// Monotone piecewise-linear generator from a CSV of t,phi(t) rows. An
// optional non-numeric header and '#' comment lines are skipped.
inline Generator load_table_generator(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open table file '" + path + "'");
  std::vector<double> ts, ys;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = detail::split(line, ',');
    if (fields.size() != 2)
      throw ParseError("table file '" + path + "' row " +
                       std::to_string(row) + ": expected 2 columns");
    const auto t = detail::parse_double(fields[0]);
    const auto y = detail::parse_double(fields[1]);
    if (!t || !y) {
      if (ts.empty()) continue;  // header line
      throw ParseError("table file '" + path + "' row " +
                       std::to_string(row) + ": not numeric");
    }
    ts.push_back(*t);
    ys.push_back(*y);
  }
  if (ts.size() < 2)
    throw InvariantError("table file '" + path + "' has fewer than 2 rows");
  return table_generator(std::move(ts), std::move(ys), "custom-table:" + path);
}

// Registry grammar: identity | log | exp | power:<r> | affine-log:<a>:<b> |
// poly-cube | custom-table:<path>
inline Generator make_generator(const std::string& spec) {
  if (spec == "identity") return identity_generator();
  if (spec == "log") return log_generator();
  if (spec == "exp") return exp_generator();
  if (spec == "poly-cube") return poly_cube_generator();
  if (spec.rfind("power:", 0) == 0) {
    const auto r = detail::parse_double(spec.substr(6));
    if (!r) throw SpecParseError("bad exponent in generator '" + spec + "'");
    if (*r == 0.0)
      throw SpecParseError("power:0 is not strictly monotone; use log");
    return power_generator(*r);
  }
  if (spec.rfind("affine-log:", 0) == 0) {
    const auto parts = detail::split(spec.substr(11), ':');
    if (parts.size() != 2)
      throw SpecParseError("expected affine-log:<a>:<b>, got '" + spec + "'");
    const auto a = detail::parse_double(parts[0]);
    const auto b = detail::parse_double(parts[1]);
    if (!a || !b)
      throw SpecParseError("bad parameters in generator '" + spec + "'");
    return affine_log_generator(*a, *b);
  }
  if (spec.rfind("custom-table:", 0) == 0)
    return load_table_generator(spec.substr(13));
  throw SpecParseError("unknown generator '" + spec + "'");
}

inline Homeomorphism make_homeomorphism(const std::string& name) {
  if (name == "identity") return Homeomorphism::identity();
  if (name == "reciprocal") return Homeomorphism::reciprocal();
  if (name == "exp") return Homeomorphism::exponential();
  if (name == "log") return Homeomorphism::logarithm();
  throw SpecParseError("unknown conjugating map '" + name +
                       "' (want identity, reciprocal, exp or log)");
}

namespace detail {

// Splits "<body>[:w1,w2,...]" — the weights are the final ':' field when it
// is a comma-separated numeric list.
inline std::pair<std::string, std::optional<std::vector<double>>>
split_trailing_weights(const std::string& body) {
  const auto pos = body.rfind(':');
  if (pos == std::string::npos) return {body, std::nullopt};
  const std::string tail = body.substr(pos + 1);
  if (tail.find(',') == std::string::npos) return {body, std::nullopt};
  const auto vals = parse_double_list(tail);
  if (!vals) return {body, std::nullopt};
  return {body.substr(0, pos), vals};
}

inline Weights resolve_weights(const std::optional<std::vector<double>>& given,
                               std::optional<std::size_t> arity_hint,
                               const std::string& spec) {
  if (given) return Weights(*given);
  if (arity_hint) return Weights::uniform(*arity_hint);
  throw SpecParseError("mean '" + spec +
                       "' needs explicit weights (or an input arity)");
}

}  // namespace detail

// Mean grammar: <family>[:<params>][:<weights>] with comma-separated weights.
//   geometric[:w]                      power:<r>[:w]
//   quasiarithmetic:<generator>[:w]    quasigeometric:<generator>[:w]
//   gqg:<gen1>;<gen2>;...              conjugate:<map>:<inner mean>
// Weights may be omitted when the caller supplies an arity (uniform 1/n).
inline MeanSpec parse_mean(const std::string& spec,
                           std::optional<std::size_t> arity_hint = {}) {
  const auto head_end = spec.find(':');
  const std::string family = spec.substr(0, head_end);
  const std::string rest =
      head_end == std::string::npos ? "" : spec.substr(head_end + 1);

  if (family == "geometric") {
    std::optional<std::vector<double>> given;
    if (!rest.empty()) {
      given = detail::parse_double_list(rest);
      if (!given)
        throw SpecParseError("bad weights '" + rest + "' in '" + spec + "'");
    }
    return MeanSpec::geometric(detail::resolve_weights(given, arity_hint, spec));
  }
  if (family == "power") {
    if (rest.empty())
      throw SpecParseError("power mean needs an exponent: power:<r>[:w]");
    const auto parts = detail::split(rest, ':');
    if (parts.size() > 2)
      throw SpecParseError("too many fields in '" + spec + "'");
    const auto r = detail::parse_double(parts[0]);
    if (!r) throw SpecParseError("bad exponent '" + parts[0] + "'");
    std::optional<std::vector<double>> given;
    if (parts.size() == 2) {
      given = detail::parse_double_list(parts[1]);
      if (!given)
        throw SpecParseError("bad weights '" + parts[1] + "' in '" + spec + "'");
    }
    return MeanSpec::power(*r, detail::resolve_weights(given, arity_hint, spec));
  }
  if (family == "quasiarithmetic" || family == "quasigeometric") {
    if (rest.empty())
      throw SpecParseError(family + " mean needs a generator");
    const auto [gen_spec, given] = detail::split_trailing_weights(rest);
    Generator gen = make_generator(gen_spec);
    Weights w = detail::resolve_weights(given, arity_hint, spec);
    return family == "quasiarithmetic"
               ? MeanSpec::quasiarithmetic(std::move(gen), std::move(w))
               : MeanSpec::quasigeometric(std::move(gen), std::move(w));
  }
  if (family == "gqg") {
    if (rest.empty())
      throw SpecParseError("gqg mean needs generators: gqg:<g1>;<g2>;...");
    std::vector<Generator> gens;
    for (const auto& tok : detail::split(rest, ';'))
      gens.push_back(make_generator(tok));
    return MeanSpec::generalized_quasigeometric(std::move(gens));
  }
  if (family == "conjugate") {
    const auto sep = rest.find(':');
    if (sep == std::string::npos)
      throw SpecParseError("conjugate mean needs conjugate:<map>:<inner>");
    Homeomorphism h = make_homeomorphism(rest.substr(0, sep));
    MeanSpec inner = parse_mean(rest.substr(sep + 1), arity_hint);
    return MeanSpec::conjugate(std::move(inner), std::move(h));
  }
  throw SpecParseError("unknown mean family '" + family + "'");
}

}  // namespace means

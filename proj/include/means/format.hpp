#pragma once

#include <charconv>
#include <cmath>
#include <span>
#include <string>

namespace means {

// Shortest round-trip decimal form. Locale-free, so output is reproducible
// byte for byte across runs.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string fmt_join(std::span<const double> vs, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out.push_back(sep);
    out += fmt(vs[i]);
  }
  return out;
}

}  // namespace means

#pragma once

#include <charconv>
#include <cstdio>
#include <cstring>
#include <string>

namespace nodag {

/// Metric formatting: 6 significant digits, always visibly floating point
/// ("1" becomes "1.0" so metric columns never look integer-valued).
inline std::string fmt_metric(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  if (std::strpbrk(buf, ".einf") == nullptr) {
    std::strcat(buf, ".0");
  }
  return buf;
}

/// Full round-trip precision: shortest decimal string that parses back to
/// exactly the same double.
inline std::string fmt_full(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace nodag

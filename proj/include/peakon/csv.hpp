#pragma once

#include <cstddef>
#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

namespace peakon::csv {

/// Round-trip formatting: 17 significant digits.
inline std::string format(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

inline void write_header(std::ostream& out, std::initializer_list<std::string_view> columns) {
  bool first = true;
  for (auto column : columns) {
    if (!first) out << ',';
    out << column;
    first = false;
  }
  out << '\n';
}

inline void write_header(std::ostream& out, std::span<const std::string> columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
}

inline void write_row(std::ostream& out, std::span<const double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << format(v);
    first = false;
  }
  out << '\n';
}

inline void write_row(std::ostream& out, std::initializer_list<double> values) {
  write_row(out, std::span<const double>(values.begin(), values.size()));
}

}  // namespace peakon::csv

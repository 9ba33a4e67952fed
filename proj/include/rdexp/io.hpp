#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "rdexp/types.hpp"

namespace rdexp {

// 12 significant digits, enough to round-trip the solver tolerances without
// dragging binary noise into diffs.
inline std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Comment lines ('#'-prefixed), one mandatory header row, then data.
inline void write_csv(std::ostream& os, const std::vector<std::string>& comments,
                      const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows) {
  for (const auto& c : comments) os << "# " << c << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    os << (i ? "," : "") << columns[i];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i)
      os << (i ? "," : "") << format_value(r[i]);
    os << "\n";
  }
}

inline void write_curve_csv(std::ostream& os, const std::vector<std::string>& comments,
                            const std::string& x_name, const std::string& y_name,
                            const Curve& curve) {
  std::vector<std::vector<double>> rows;
  rows.reserve(curve.points.size());
  for (const auto& pt : curve.points) rows.push_back({pt.x, pt.y});
  write_csv(os, comments, {x_name, y_name}, rows);
}

}  // namespace rdexp

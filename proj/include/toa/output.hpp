#pragma once

#include <string>
#include <vector>

#include "toa/types.hpp"

namespace toa {

/// 17-significant-digit decimal form, enough to round-trip a double exactly.
std::string format_g17(double v);

struct CsvColumn {
  std::string name;
  const RealArray* values;
};

/// Comma-separated, header row, LF endings, %.17g numbers.  Streams are
/// opened in binary mode so the bytes are identical on every platform.
void write_csv(const std::string& path, const std::vector<CsvColumn>& columns);

void write_text_file(const std::string& path, const std::string& content);

struct SvgCurve {
  std::string label;
  std::string color;
  const RealArray* x;
  const RealArray* y;
};

/// Minimal standalone plot: axes, ticks, one polyline per curve, legend.
void write_svg_overlay(const std::string& path, const std::vector<SvgCurve>& curves,
                       const std::string& x_label, const std::string& y_label);

}  // namespace toa

#include "toa/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "toa/errors.hpp"

namespace toa {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string format_g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw io_error("write failed: " + path);
}

}  // namespace

void write_csv(const std::string& path, const std::vector<CsvColumn>& columns) {
  if (columns.empty()) throw std::invalid_argument("write_csv: no columns");
  const Index rows = columns.front().values->size();
  for (const CsvColumn& c : columns)
    if (c.values->size() != rows) throw std::invalid_argument("write_csv: ragged columns");

  std::ofstream out = open_out(path);
  for (size_t c = 0; c < columns.size(); ++c) {
    if (c) out << ',';
    out << columns[c].name;
  }
  out << '\n';
  for (Index i = 0; i < rows; ++i) {
    for (size_t c = 0; c < columns.size(); ++c) {
      if (c) out << ',';
      out << format_g17((*columns[c].values)[i]);
    }
    out << '\n';
  }
  finish(out, path);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out = open_out(path);
  out << content;
  finish(out, path);
}

void write_svg_overlay(const std::string& path, const std::vector<SvgCurve>& curves,
                       const std::string& x_label, const std::string& y_label) {
  if (curves.empty()) throw std::invalid_argument("write_svg_overlay: no curves");
  double x_lo = 0.0, x_hi = 1.0, y_hi = 1.0;
  bool first = true;
  for (const SvgCurve& c : curves) {
    if (c.x->size() == 0 || c.x->size() != c.y->size())
      throw std::invalid_argument("write_svg_overlay: bad curve data");
    const double cx_lo = c.x->minCoeff();
    const double cx_hi = c.x->maxCoeff();
    const double cy_hi = c.y->maxCoeff();
    if (first) {
      x_lo = cx_lo;
      x_hi = cx_hi;
      y_hi = cy_hi;
      first = false;
    } else {
      x_lo = std::min(x_lo, cx_lo);
      x_hi = std::max(x_hi, cx_hi);
      y_hi = std::max(y_hi, cy_hi);
    }
  }
  if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
  if (!(y_hi > 0.0)) y_hi = 1.0;
  y_hi *= 1.05;

  const double w = 800.0, h = 500.0;
  const double ml = 70.0, mr = 20.0, mt = 20.0, mb = 55.0;
  const double pw = w - ml - mr, ph = h - mt - mb;
  const auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * pw; };
  const auto py = [&](double y) { return mt + ph - y / y_hi * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
      << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n"
      << "<g font-family=\"sans-serif\" font-size=\"13\">\n";

  svg << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
      << mt + ph << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
      << "\" stroke=\"black\"/>\n";

  const int ticks = 6;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = x_lo + (x_hi - x_lo) * i / ticks;
    const double gx = px(fx);
    svg << "<line x1=\"" << format_g6(gx) << "\" y1=\"" << mt + ph << "\" x2=\""
        << format_g6(gx) << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << format_g6(gx) << "\" y=\"" << mt + ph + 20
        << "\" text-anchor=\"middle\">" << format_g6(fx) << "</text>\n";
    const double fy = y_hi * i / ticks;
    const double gy = py(fy);
    svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << format_g6(gy) << "\" x2=\"" << ml
        << "\" y2=\"" << format_g6(gy) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << ml - 8 << "\" y=\"" << format_g6(gy + 4)
        << "\" text-anchor=\"end\">" << format_g6(fy) << "</text>\n";
  }
  svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << h - 12
      << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  svg << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">"
      << y_label << "</text>\n";

  double ly = mt + 16.0;
  for (const SvgCurve& c : curves) {
    svg << "<polyline fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"1.5\" points=\"";
    for (Index i = 0; i < c.x->size(); ++i) {
      if (i) svg << ' ';
      svg << format_g6(px((*c.x)[i])) << ',' << format_g6(py((*c.y)[i]));
    }
    svg << "\"/>\n";
    svg << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << format_g6(ly - 4) << "\" x2=\""
        << ml + pw - 120 << "\" y2=\"" << format_g6(ly - 4) << "\" stroke=\"" << c.color
        << "\" stroke-width=\"1.5\"/>\n"
        << "<text x=\"" << ml + pw - 112 << "\" y=\"" << format_g6(ly) << "\">" << c.label
        << "</text>\n";
    ly += 18.0;
  }
  svg << "</g>\n</svg>\n";

  write_text_file(path, svg.str());
}

}  // namespace toa

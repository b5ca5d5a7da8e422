#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hdqf::bench {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool line = true;
  bool markers = false;
  bool dashed = false;
};

struct Plot {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool logx = false;
  bool logy = false;
  std::vector<Series> series;
};

namespace detail {

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                           "#9467bd", "#8c564b", "#e377c2", "#17becf"};

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  [[nodiscard]] double map(double v) const {
    const double a = log ? std::log10(v) : v;
    return (a - lo) / (hi - lo);
  }

  [[nodiscard]] std::vector<double> ticks() const {
    std::vector<double> t;
    if (log) {
      for (double e = std::floor(lo); e <= std::ceil(hi) + 1e-9; e += 1.0) {
        if (e >= lo - 1e-9 && e <= hi + 1e-9) t.push_back(std::pow(10.0, e));
      }
      if (t.size() < 2) t = {std::pow(10.0, lo), std::pow(10.0, hi)};
      return t;
    }
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
      if (m * mag >= raw) {
        step = m * mag;
        break;
      }
    }
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) t.push_back(v);
    return t;
  }
};

inline Axis make_axis(const std::vector<Series>& series, bool y, bool log) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : series) {
    for (double v : y ? s.y : s.x) {
      if (!std::isfinite(v) || (log && v <= 0.0)) continue;
      const double a = log ? std::log10(v) : v;
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
  }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  if (!log) {
    const double pad = 0.04 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  return {lo, hi, log};
}

}  // namespace detail

/// Line/marker chart with labeled axes and a legend.
inline std::string render_svg(const Plot& plot, int width = 720, int height = 460) {
  for (const auto& s : plot.series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("series x and y differ in length");
  }
  const double left = 80, right = 200, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;
  const auto ax = detail::make_axis(plot.series, false, plot.logx);
  const auto ay = detail::make_axis(plot.series, true, plot.logy);
  auto px = [&](double v) { return left + ax.map(v) * pw; };
  auto py = [&](double v) { return top + (1.0 - ay.map(v)) * ph; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
     << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << xml_escape(plot.title) << "</text>\n"
     << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : ax.ticks()) {
    const double x = px(t);
    os << "<line x1=\"" << x << "\" y1=\"" << top + ph << "\" x2=\"" << x << "\" y2=\"" << top + ph + 5
       << "\" stroke=\"black\"/>\n<text x=\"" << x << "\" y=\"" << top + ph + 18
       << "\" text-anchor=\"middle\">" << detail::fmt(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = py(t);
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
       << "\" stroke=\"black\"/>\n<text x=\"" << left - 8 << "\" y=\"" << y + 4
       << "\" text-anchor=\"end\">" << detail::fmt(t) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">"
     << xml_escape(plot.xlabel) << "</text>\n"
     << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << top + ph / 2 << ")\">" << xml_escape(plot.ylabel) << "</text>\n";

  for (std::size_t i = 0; i < plot.series.size(); ++i) {
    const auto& s = plot.series[i];
    const char* color = detail::kPalette[i % std::size(detail::kPalette)];
    std::vector<std::pair<double, double>> pts;
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      if ((plot.logx && s.x[k] <= 0.0) || (plot.logy && s.y[k] <= 0.0)) continue;
      pts.emplace_back(px(s.x[k]), py(s.y[k]));
    }
    if (s.line && pts.size() > 1) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
      if (s.dashed) os << " stroke-dasharray=\"5,3\"";
      os << " points=\"";
      for (const auto& [x, y] : pts) os << x << ',' << y << ' ';
      os << "\"/>\n";
    }
    if (s.markers) {
      for (const auto& [x, y] : pts) {
        os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
    }
    const double ly = top + 10 + 18.0 * static_cast<double>(i);
    const double lx = left + pw + 12;
    os << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 22 << "\" y2=\"" << ly << "\" stroke=\""
       << color << "\" stroke-width=\"2\"";
    if (s.dashed) os << " stroke-dasharray=\"5,3\"";
    os << "/>\n<text x=\"" << lx + 28 << "\" y=\"" << ly + 4 << "\">" << xml_escape(s.name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

struct BitmapPanel {
  std::string label;
  std::size_t height = 0, width = 0;
  std::vector<std::uint8_t> pixels;  // row-major, 1 = ink
};

/// Grid of labeled binary bitmaps; one row of panels per entry of `rows`.
inline std::string render_bitmap_grid(const std::string& title, const std::vector<std::string>& row_labels,
                                      const std::vector<std::vector<BitmapPanel>>& rows, int scale = 2) {
  if (row_labels.size() != rows.size()) throw std::invalid_argument("one label per panel row");
  const int label_w = 150, gap = 12, top = 36, caption = 16;
  std::size_t cell_w = 0, cell_h = 0, cols = 0;
  for (const auto& r : rows) {
    cols = std::max(cols, r.size());
    for (const auto& p : r) {
      if (p.pixels.size() != p.height * p.width) throw std::invalid_argument("bitmap size mismatch");
      cell_w = std::max(cell_w, p.width);
      cell_h = std::max(cell_h, p.height);
    }
  }
  const int cw = static_cast<int>(cell_w) * scale, ch = static_cast<int>(cell_h) * scale;
  const int width = label_w + static_cast<int>(cols) * (cw + gap) + gap;
  const int height = top + static_cast<int>(rows.size()) * (ch + caption + gap) + gap;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
     << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title)
     << "</text>\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int y0 = top + static_cast<int>(r) * (ch + caption + gap);
    os << "<text x=\"8\" y=\"" << y0 + ch / 2 << "\">" << xml_escape(row_labels[r]) << "</text>\n";
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      const auto& p = rows[r][c];
      const int x0 = label_w + static_cast<int>(c) * (cw + gap);
      os << "<g transform=\"translate(" << x0 << ' ' << y0 << ")\">\n"
         << "<rect x=\"0\" y=\"0\" width=\"" << p.width * scale << "\" height=\"" << p.height * scale
         << "\" fill=\"white\" stroke=\"#999999\"/>\n";
      for (std::size_t i = 0; i < p.height; ++i) {
        for (std::size_t j = 0; j < p.width;) {
          if (!p.pixels[i * p.width + j]) {
            ++j;
            continue;
          }
          std::size_t k = j;
          while (k < p.width && p.pixels[i * p.width + k]) ++k;
          os << "<rect x=\"" << j * scale << "\" y=\"" << i * scale << "\" width=\"" << (k - j) * scale
             << "\" height=\"" << scale << "\" fill=\"black\"/>\n";
          j = k;
        }
      }
      os << "<text x=\"0\" y=\"" << ch + 12 << "\" font-size=\"10\">" << xml_escape(p.label) << "</text>\n</g>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace hdqf::bench

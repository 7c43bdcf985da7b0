#pragma once

/**
 * Minimal SVG line charts: stacked panels, each with axes, ticks, grid and a
 * legend. Enough for attitude / torque time histories without a plotting
 * toolchain.
 */

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace agrosim::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
};

struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

inline const std::vector<std::string>& palette() {
  static const std::vector<std::string> colors{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                               "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  return colors;
}

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

/// Tick step from {1, 2, 5} x 10^k giving roughly `target` intervals.
inline double nice_step(double span, int target) {
  const double raw = span / std::max(target, 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double nice = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
  return nice * mag;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

inline Range padded(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) return {0.0, 1.0};
  if (hi - lo < 1e-12) {
    const double pad = std::max(std::abs(hi) * 0.1, 1.0);
    return {lo - pad, hi + pad};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

}  // namespace detail

/// Renders panels stacked vertically into one SVG document.
inline std::string render(const std::vector<Panel>& panels, int width = 900, int panel_height = 320) {
  using detail::num;
  constexpr int kLeft = 70, kRight = 160, kTop = 36, kBottom = 48;
  const int height = panel_height * static_cast<int>(std::max<std::size_t>(panels.size(), 1));

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const Panel& panel = panels[p];
    const double y0 = static_cast<double>(p) * panel_height;
    const double plot_w = width - kLeft - kRight;
    const double plot_h = panel_height - kTop - kBottom;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : panel.series) {
      for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, s.y[i]);
        ymax = std::max(ymax, s.y[i]);
      }
    }
    const detail::Range xr = std::isfinite(xmin) && xmax > xmin ? detail::Range{xmin, xmax} : detail::padded(xmin, xmax);
    const detail::Range yr = detail::padded(ymin, ymax);
    const auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    const auto sy = [&](double y) { return y0 + kTop + (yr.hi - y) / (yr.hi - yr.lo) * plot_h; };

    os << "<g>\n";
    os << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << num(y0 + 22) << "\" text-anchor=\"middle\" font-size=\"14\">"
       << detail::escape(panel.title) << "</text>\n";

    const double xstep = detail::nice_step(xr.hi - xr.lo, 8);
    for (double x = std::ceil(xr.lo / xstep) * xstep; x <= xr.hi + 1e-9 * xstep; x += xstep) {
      os << "<line x1=\"" << num(sx(x)) << "\" y1=\"" << num(y0 + kTop) << "\" x2=\"" << num(sx(x)) << "\" y2=\""
         << num(y0 + kTop + plot_h) << "\" stroke=\"#e0e0e0\"/>\n";
      os << "<text x=\"" << num(sx(x)) << "\" y=\"" << num(y0 + kTop + plot_h + 16)
         << "\" text-anchor=\"middle\">" << num(std::abs(x) < 1e-12 * xstep ? 0.0 : x) << "</text>\n";
    }
    const double ystep = detail::nice_step(yr.hi - yr.lo, 6);
    for (double y = std::ceil(yr.lo / ystep) * ystep; y <= yr.hi + 1e-9 * ystep; y += ystep) {
      os << "<line x1=\"" << kLeft << "\" y1=\"" << num(sy(y)) << "\" x2=\"" << num(kLeft + plot_w) << "\" y2=\""
         << num(sy(y)) << "\" stroke=\"#e0e0e0\"/>\n";
      os << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(sy(y) + 4) << "\" text-anchor=\"end\">"
         << num(std::abs(y) < 1e-12 * ystep ? 0.0 : y) << "</text>\n";
    }
    os << "<rect x=\"" << kLeft << "\" y=\"" << num(y0 + kTop) << "\" width=\"" << num(plot_w) << "\" height=\""
       << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << num(y0 + panel_height - 10)
       << "\" text-anchor=\"middle\">" << detail::escape(panel.x_label) << "</text>\n";
    os << "<text transform=\"translate(16," << num(y0 + kTop + plot_h / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
       << detail::escape(panel.y_label) << "</text>\n";

    for (std::size_t k = 0; k < panel.series.size(); ++k) {
      const Series& s = panel.series[k];
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
      if (s.dashed) os << " stroke-dasharray=\"6 4\"";
      os << " points=\"";
      for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        os << num(sx(s.x[i])) << ',' << num(sy(s.y[i])) << ' ';
      }
      os << "\"/>\n";
      const double ly = y0 + kTop + 14 + 18.0 * static_cast<double>(k);
      const double lx = kLeft + plot_w + 12;
      os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 24) << "\" y2=\""
         << num(ly - 4) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"";
      if (s.dashed) os << " stroke-dasharray=\"6 4\"";
      os << "/>\n";
      os << "<text x=\"" << num(lx + 30) << "\" y=\"" << num(ly) << "\">" << detail::escape(s.label) << "</text>\n";
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace agrosim::svg

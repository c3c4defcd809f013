#include "dynnorm/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace dynnorm::svg {

namespace {

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(lo <= hi)) {
      lo = -1;
      hi = 1;
    }
    if (hi == lo) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double margin = 0.05 * (hi - lo);
    lo -= margin;
    hi += margin;
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

double nice_step(double span) {
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0) * mag;
}

void render_panel(std::ostringstream& os, const Panel& panel, double top, double height) {
  const double left = 70, right = kWidth - 20;
  const double plot_top = top + 30, plot_bottom = top + height - 45;

  Range xr, yr;
  for (const auto& s : panel.series) {
    for (double v : s.x) xr.include(v);
    for (double v : s.y) yr.include(v);
  }
  for (double h : panel.dashed_hlines) yr.include(h);
  xr.pad();
  yr.pad();

  auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * (right - left); };
  auto py = [&](double y) { return plot_bottom - (y - yr.lo) / (yr.hi - yr.lo) * (plot_bottom - plot_top); };

  os << "<g>\n";
  os << "<text x=\"" << num((left + right) / 2) << "\" y=\"" << num(top + 20)
     << "\" text-anchor=\"middle\" font-size=\"15\">" << escape(panel.title) << "</text>\n";
  os << "<rect x=\"" << num(left) << "\" y=\"" << num(plot_top) << "\" width=\"" << num(right - left)
     << "\" height=\"" << num(plot_bottom - plot_top) << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int axis = 0; axis < 2; ++axis) {
    const Range& r = axis == 0 ? xr : yr;
    const double step = nice_step(r.hi - r.lo);
    for (double t = std::ceil(r.lo / step) * step; t <= r.hi; t += step) {
      if (axis == 0) {
        os << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(plot_bottom) << "\" x2=\"" << num(px(t))
           << "\" y2=\"" << num(plot_bottom + 5) << "\" stroke=\"black\"/>"
           << "<text x=\"" << num(px(t)) << "\" y=\"" << num(plot_bottom + 18)
           << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_label(t) << "</text>\n";
      } else {
        os << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(left)
           << "\" y2=\"" << num(py(t)) << "\" stroke=\"black\"/>"
           << "<text x=\"" << num(left - 8) << "\" y=\"" << num(py(t) + 4)
           << "\" text-anchor=\"end\" font-size=\"11\">" << tick_label(t) << "</text>\n";
      }
    }
  }
  os << "<text x=\"" << num((left + right) / 2) << "\" y=\"" << num(plot_bottom + 36)
     << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(panel.x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << num((plot_top + plot_bottom) / 2) << "\" text-anchor=\"middle\" "
     << "font-size=\"13\" transform=\"rotate(-90 16 " << num((plot_top + plot_bottom) / 2) << ")\">"
     << escape(panel.y_label) << "</text>\n";

  for (double h : panel.dashed_hlines) {
    os << "<line x1=\"" << num(left) << "\" y1=\"" << num(py(h)) << "\" x2=\"" << num(right)
       << "\" y2=\"" << num(py(h)) << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
  }

  double legend_y = plot_top + 16;
  for (const auto& s : panel.series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (s.style == Style::Line || s.style == Style::DashedLine) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.8\"";
      if (s.style == Style::DashedLine) os << " stroke-dasharray=\"6,4\"";
      os << " points=\"";
      for (std::size_t k = 0; k < n; ++k) os << (k ? " " : "") << num(px(s.x[k])) << ',' << num(py(s.y[k]));
      os << "\"/>\n";
    } else {
      const bool filled = s.style == Style::FilledCircles;
      for (std::size_t k = 0; k < n; ++k) {
        os << "<circle cx=\"" << num(px(s.x[k])) << "\" cy=\"" << num(py(s.y[k])) << "\" r=\"4\" stroke=\""
           << s.color << "\" fill=\"" << (filled ? s.color : "none") << "\"/>\n";
      }
    }
    if (!s.label.empty()) {
      os << "<rect x=\"" << num(left + 10) << "\" y=\"" << num(legend_y - 9) << "\" width=\"12\" height=\"4\" fill=\""
         << s.color << "\"/><text x=\"" << num(left + 28) << "\" y=\"" << num(legend_y - 4)
         << "\" font-size=\"12\">" << escape(s.label) << "</text>\n";
      legend_y += 16;
    }
  }
  os << "</g>\n";
}

}  // namespace

std::vector<double> curve_abscissae(double lo, double hi) {
  std::vector<double> xs(kCurveSegments + 1);
  for (int k = 0; k <= kCurveSegments; ++k) xs[k] = lo + (hi - lo) * k / kCurveSegments;
  xs.back() = hi;
  return xs;
}

std::string render(std::span<const Panel> panels) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!panels.empty()) {
    const double h = static_cast<double>(kHeight) / static_cast<double>(panels.size());
    for (std::size_t k = 0; k < panels.size(); ++k) render_panel(os, panels[k], h * k, h);
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace dynnorm::svg

#pragma once

#include <span>
#include <string>
#include <vector>

namespace dynnorm::svg {

inline constexpr int kWidth = 800;
inline constexpr int kHeight = 600;
inline constexpr int kCurveSegments = 512;

enum class Style { Line, DashedLine, FilledCircles, EmptyCircles };

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  Style style = Style::Line;
  std::string color = "#1f77b4";
};

struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  std::vector<double> dashed_hlines;  // horizontal reference lines, e.g. +-sqrt(C-1)
};

/// kCurveSegments + 1 evenly spaced abscissae on [lo, hi].
std::vector<double> curve_abscissae(double lo, double hi);

/// Renders the panels stacked vertically into one 800x600 document. Axis
/// ranges are taken from the data (and reference lines) and padded by 5%.
std::string render(std::span<const Panel> panels);

}  // namespace dynnorm::svg

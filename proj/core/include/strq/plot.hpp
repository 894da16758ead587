#pragma once

#include <string>
#include <utility>
#include <vector>

namespace strq {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y), x > 0 for log axes
};

// Minimal self-contained SVG line plot: log-10 x axis, linear y axis, decade
// x ticks, auto-ranged y ticks, point markers and a legend. Writes with LF
// endings; throws std::runtime_error when the file cannot be written.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series);

}  // namespace strq

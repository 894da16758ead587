#include "strq/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace strq {

namespace {

constexpr int kWidth = 840;
constexpr int kHeight = 600;
constexpr int kMarginL = 80;
constexpr int kMarginR = 160;
constexpr int kMarginT = 50;
constexpr int kMarginB = 60;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series) {
  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -std::numeric_limits<double>::infinity();
  double y_min = std::numeric_limits<double>::infinity();
  double y_max = -std::numeric_limits<double>::infinity();
  for (const PlotSeries& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0) || !std::isfinite(y)) continue;
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (!std::isfinite(x_min) || !std::isfinite(y_min)) {
    x_min = 1e-3;
    x_max = 1.0;
    y_min = 0.0;
    y_max = 1.0;
  }
  if (x_max <= x_min) x_max = x_min * 10.0;
  if (y_max <= y_min) {
    y_min -= 0.5;
    y_max += 0.5;
  }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;
  const double lx_min = std::log10(x_min);
  const double lx_max = std::log10(x_max);

  const double plot_w = kWidth - kMarginL - kMarginR;
  const double plot_h = kHeight - kMarginT - kMarginB;
  auto px = [&](double x) {
    return kMarginL + plot_w * (std::log10(x) - lx_min) / (lx_max - lx_min);
  };
  auto py = [&](double y) {
    return kMarginT + plot_h * (1.0 - (y - y_min) / (y_max - y_min));
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(kWidth) + "\" height=\"" + std::to_string(kHeight) +
         "\" viewBox=\"0 0 " + std::to_string(kWidth) + " " +
         std::to_string(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + std::to_string(kWidth / 2) +
         "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"17\">" + title + "</text>\n";

  // frame
  svg += "<rect x=\"" + std::to_string(kMarginL) + "\" y=\"" +
         std::to_string(kMarginT) + "\" width=\"" + num(plot_w) +
         "\" height=\"" + num(plot_h) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

  // x ticks at decades
  const int dec_lo = static_cast<int>(std::ceil(lx_min - 1e-9));
  const int dec_hi = static_cast<int>(std::floor(lx_max + 1e-9));
  for (int d = dec_lo; d <= dec_hi; ++d) {
    const double x = std::pow(10.0, d);
    const double gx = px(x);
    svg += "<line x1=\"" + num(gx) + "\" y1=\"" + num(kMarginT) + "\" x2=\"" +
           num(gx) + "\" y2=\"" + num(kMarginT + plot_h) +
           "\" stroke=\"#dddddd\"/>\n";
    svg += "<text x=\"" + num(gx) + "\" y=\"" +
           num(kMarginT + plot_h + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">1e" + std::to_string(d) + "</text>\n";
  }
  // y ticks
  const int y_ticks = 6;
  for (int t = 0; t <= y_ticks; ++t) {
    const double y = y_min + (y_max - y_min) * t / y_ticks;
    const double gy = py(y);
    svg += "<line x1=\"" + num(kMarginL) + "\" y1=\"" + num(gy) + "\" x2=\"" +
           num(kMarginL + plot_w) + "\" y2=\"" + num(gy) +
           "\" stroke=\"#eeeeee\"/>\n";
    svg += "<text x=\"" + num(kMarginL - 8) + "\" y=\"" + num(gy + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\">" + num(y) + "</text>\n";
  }
  // axis labels
  svg += "<text x=\"" + std::to_string(kMarginL + static_cast<int>(plot_w) / 2) +
         "\" y=\"" + std::to_string(kHeight - 14) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">" + x_label + "</text>\n";
  svg += "<text x=\"20\" y=\"" +
         std::to_string(kMarginT + static_cast<int>(plot_h) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
         "transform=\"rotate(-90 20 " +
         std::to_string(kMarginT + static_cast<int>(plot_h) / 2) + ")\">" +
         y_label + "</text>\n";

  // series
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % (sizeof kPalette / sizeof kPalette[0])];
    std::string pts;
    for (const auto& [x, y] : series[i].points) {
      if (!(x > 0.0) || !std::isfinite(y)) continue;
      pts += num(px(x)) + "," + num(py(y)) + " ";
    }
    if (!pts.empty()) {
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"1.8\" points=\"" + pts + "\"/>\n";
      for (const auto& [x, y] : series[i].points) {
        if (!(x > 0.0) || !std::isfinite(y)) continue;
        svg += "<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) +
               "\" r=\"3\" fill=\"" + std::string(color) + "\"/>\n";
      }
    }
    // legend
    const double ly = kMarginT + 16 + 22.0 * i;
    svg += "<line x1=\"" + num(kMarginL + plot_w + 12) + "\" y1=\"" + num(ly) +
           "\" x2=\"" + num(kMarginL + plot_w + 40) + "\" y2=\"" + num(ly) +
           "\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + num(kMarginL + plot_w + 46) + "\" y=\"" +
           num(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" +
           series[i].label + "</text>\n";
  }
  svg += "</svg>\n";

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_svg_plot: cannot open " + path);
  f << svg;
  if (!f) throw std::runtime_error("write_svg_plot: write failed for " + path);
}

}  // namespace strq

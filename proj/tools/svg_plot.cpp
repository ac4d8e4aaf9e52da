#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace lle::cli {
namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 480;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 55;

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(const std::vector<double>& v) {
    for (double d : v) {
      if (std::isfinite(d)) {
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
    }
  }
  void finish() {
    if (!(hi >= lo)) lo = 0, hi = 1;
    if (hi == lo) lo -= 0.5, hi += 0.5;
    const double pad = 0.04 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

// 1-2-5 tick step giving roughly `target` intervals.
double tick_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10 * mag;
}

}  // namespace

std::string render_svg(const LinePlot& plot) {
  Range xr, yr;
  xr.add(plot.points.x);
  xr.add(plot.fit.x);
  yr.add(plot.points.y);
  yr.add(plot.fit.y);
  xr.finish();
  yr.finish();

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  std::string svg = fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      kWidth, kHeight);

  svg += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" "
      "stroke=\"black\"/>\n",
      kLeft, kTop, pw, ph);

  const double xs = tick_step(xr.hi - xr.lo, 8);
  for (double t = std::ceil(xr.lo / xs) * xs; t <= xr.hi; t += xs) {
    svg += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" "
        "stroke=\"#ddd\"/><text x=\"{0:.2f}\" y=\"{3:.2f}\" "
        "text-anchor=\"middle\">{4:g}</text>\n",
        sx(t), kTop, kTop + ph, kTop + ph + 16, t);
  }
  const double ys = tick_step(yr.hi - yr.lo, 6);
  for (double t = std::ceil(yr.lo / ys) * ys; t <= yr.hi; t += ys) {
    svg += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" "
        "stroke=\"#ddd\"/><text x=\"{3:.2f}\" y=\"{4:.2f}\" "
        "text-anchor=\"end\">{5:g}</text>\n",
        kLeft, sy(t), kLeft + pw, kLeft - 6, sy(t) + 4, t);
  }

  if (!plot.points.x.empty()) {
    svg += "<polyline fill=\"none\" stroke=\"#4a7ab8\" stroke-width=\"0.8\" points=\"";
    for (std::size_t i = 0; i < plot.points.x.size(); ++i) {
      svg += fmt::format("{:.2f},{:.2f} ", sx(plot.points.x[i]), sy(plot.points.y[i]));
    }
    svg += "\"/>\n";
    // Markers get too dense past a few hundred points.
    if (plot.points.x.size() <= 600) {
      for (std::size_t i = 0; i < plot.points.x.size(); ++i) {
        svg += fmt::format(
            "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2\" fill=\"#4a7ab8\"/>\n",
            sx(plot.points.x[i]), sy(plot.points.y[i]));
      }
    }
  }
  if (plot.fit.x.size() >= 2) {
    svg += "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < plot.fit.x.size(); ++i) {
      svg += fmt::format("{:.2f},{:.2f} ", sx(plot.fit.x[i]), sy(plot.fit.y[i]));
    }
    svg += "\"/>\n";
  }

  svg += fmt::format(
      "<text x=\"{:.2f}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
      kLeft + pw / 2, escape_xml(plot.title));
  svg += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
      kLeft + pw / 2, kHeight - 12, escape_xml(plot.x_label));
  svg += fmt::format(
      "<text x=\"16\" y=\"{0:.2f}\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 16 {0:.2f})\">{1}</text>\n",
      kTop + ph / 2, escape_xml(plot.y_label));
  if (!plot.annotation.empty()) {
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" fill=\"red\" font-size=\"14\">{}</text>\n",
        kLeft + 12, kTop + 20, escape_xml(plot.annotation));
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace lle::cli

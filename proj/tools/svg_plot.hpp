#pragma once

#include <string>
#include <vector>

namespace lle::cli {

struct PlotSeries {
  std::vector<double> x;
  std::vector<double> y;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  PlotSeries points;  // drawn as markers joined by a thin line
  PlotSeries fit;     // drawn as a red line
  std::string annotation;
};

/// Self-contained SVG document (no scripts, no external references).
std::string render_svg(const LinePlot& plot);

}  // namespace lle::cli

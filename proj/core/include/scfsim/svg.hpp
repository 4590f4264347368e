#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace scfsim {

struct SvgSeries {
  std::string label;
  std::string color;  // CSS color
  std::vector<std::pair<double, double>> points;
};

// Self-contained SVG line chart: axes, tick labels, legend, one polyline
// per series.  Output is deterministic for identical inputs.
void write_line_chart(std::ostream& out, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series, int width = 860,
                      int height = 520);

}  // namespace scfsim

#pragma once

#include <string>
#include <vector>

namespace kglab::lab {

struct Series {
  std::string name;
  std::vector<double> x, y;
};

struct PlotStyle {
  std::string title;
  std::string x_label = "x";
  std::string y_label;
  bool log_y = false;  // non-positive samples are dropped and break the line
  int width = 720;
  int height = 420;
};

// Self-contained SVG; identical input gives identical bytes. Throws IoError on empty data.
std::string render_plot(const std::vector<Series>& series, const PlotStyle& style);
void emit_plot(const std::vector<Series>& series, const PlotStyle& style, const std::string& path);

}  // namespace kglab::lab

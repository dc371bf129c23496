#pragma once

#include <string>
#include <vector>

#include "ntk/table.hpp"

namespace ntk {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  std::vector<Series> series;
};

// Values on a grid; rows index y, columns index x. NaN cells are drawn grey.
struct Heatmap {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x_ticks;
  std::vector<double> y_ticks;
  std::vector<std::vector<double>> values;
  double vmin = 0.0;
  double vmax = 1.0;
};

std::string render_line_chart(const LineChart& c);
std::string render_heatmap(const Heatmap& h);

// Stacks one chart per metric of an experiment table into a single SVG.
std::string render_table(const ResultTable& t);
void emit_svg(const ResultTable& t, const std::string& path);

}  // namespace ntk

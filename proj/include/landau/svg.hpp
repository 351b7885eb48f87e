#pragma once

#include <string>
#include <vector>

namespace landau {

struct PlotSeries {
  std::vector<double> x;
  std::vector<double> y;
};

// Polyline plot with axes and min/max tick labels. Non-finite points (and
// non-positive ones on log axes) are skipped.
std::string svg_line_plot(const PlotSeries &s, const std::string &title,
                          const std::string &xlabel, const std::string &ylabel,
                          bool logx = false, bool logy = false);

void write_text_file(const std::string &path, const std::string &text);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
// Comment lines starting with '#' are skipped; the first other line is the header.
CsvTable read_csv(const std::string &path);

// One SVG per column after the first, plotted against the first; returns the paths.
std::vector<std::string> plot_csv(const std::string &csv_path, const std::string &out_dir);

} // namespace landau

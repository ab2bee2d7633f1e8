#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nltrefftz/geometry.hpp"

namespace nltrefftz {

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

/// Comma-separated table with '#'-prefixed metadata lines before the header.
std::string csv_document(const std::vector<std::string>& metadata, const std::vector<std::string>& header,
                         const std::vector<std::vector<double>>& rows);

void write_text_file(const std::filesystem::path& path, const std::string& content);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Static SVG 1.1 line plot. `log_y` plots log10 of positive values.
std::string svg_line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<PlotSeries>& series, bool log_y = false);

/// Static SVG 1.1 heat map of row-major values on an nx-by-ny grid over `box`.
std::string svg_heatmap(const std::string& title, int nx, int ny, const Box& box, const std::vector<double>& values);

}  // namespace nltrefftz

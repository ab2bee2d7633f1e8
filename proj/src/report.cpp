#include "nltrefftz/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nltrefftz {

namespace {

std::string fixed(double v) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.3f", v);
  return buf.data();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string header(int w, int h) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(w) + "\" height=\"" + std::to_string(h) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string csv_document(const std::vector<std::string>& metadata, const std::vector<std::string>& header_cols,
                         const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (const auto& m : metadata) out += "# " + m + "\n";
  for (std::size_t i = 0; i < header_cols.size(); ++i) out += (i ? "," : "") + header_cols[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
    out += "\n";
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::string svg_line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<PlotSeries>& series, bool log_y) {
  const int w = 640, h = 420, left = 70, right = 20, top = 40, bottom = 50;
  auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (log_y && !(s.y[i] > 0.0)) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, ty(s.y[i]));
      ymax = std::max(ymax, ty(s.y[i]));
    }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  const double pw = w - left - right, ph = h - top - bottom;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + (1.0 - (ty(y) - ymin) / (ymax - ymin)) * ph; };

  std::ostringstream o;
  o << header(w, h);
  o << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape(title) << "</text>\n";
  o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
    << escape(x_label) << "</text>\n";
  o << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
    << top + ph / 2 << ")\">" << escape(log_y ? "log10 " + y_label : y_label) << "</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = xmin + t * (xmax - xmin) / 4, yv = ymin + t * (ymax - ymin) / 4;
    o << "<text x=\"" << fixed(left + t * pw / 4) << "\" y=\"" << top + ph + 16
      << "\" text-anchor=\"middle\" font-size=\"11\">" << fixed(xv) << "</text>\n";
    o << "<text x=\"" << left - 6 << "\" y=\"" << fixed(top + (1.0 - t / 4.0) * ph + 4)
      << "\" text-anchor=\"end\" font-size=\"11\">" << fixed(yv) << "</text>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (log_y && !(s.y[i] > 0.0)) continue;
      pts += fixed(px(s.x[i])) + "," + fixed(py(s.y[i])) + " ";
    }
    const char* color = kPalette[k % kPalette.size()];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
    o << "<text x=\"" << left + 10 << "\" y=\"" << top + 16 + 16 * k << "\" font-size=\"12\" fill=\"" << color << "\">"
      << escape(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string svg_heatmap(const std::string& title, int nx, int ny, const Box& box, const std::vector<double>& values) {
  if (static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) != values.size())
    throw std::invalid_argument("svg_heatmap: value count mismatch");
  const int cell = std::max(2, 360 / std::max(nx, ny));
  const int left = 60, top = 40;
  const int w = left + nx * cell + 90, h = top + ny * cell + 40;
  double vmin = INFINITY, vmax = -INFINITY;
  for (double v : values)
    if (std::isfinite(v)) vmin = std::min(vmin, v), vmax = std::max(vmax, v);
  if (!std::isfinite(vmin)) vmin = 0, vmax = 1;
  if (vmax == vmin) vmax = vmin + 1.0;
  auto color = [&](double v) {
    // blue-white-red diverging map
    const double t = std::clamp((v - vmin) / (vmax - vmin), 0.0, 1.0);
    const int r = t < 0.5 ? static_cast<int>(255 * 2 * t) : 255;
    const int b = t > 0.5 ? static_cast<int>(255 * 2 * (1 - t)) : 255;
    const int g = t < 0.5 ? r : b;
    std::array<char, 8> buf{};
    std::snprintf(buf.data(), buf.size(), "#%02x%02x%02x", r, g, b);
    return std::string(buf.data());
  };
  std::ostringstream o;
  o << header(w, h);
  o << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape(title) << "</text>\n";
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double v = values[static_cast<std::size_t>(j) * nx + i];
      o << "<rect x=\"" << left + i * cell << "\" y=\"" << top + (ny - 1 - j) * cell << "\" width=\"" << cell
        << "\" height=\"" << cell << "\" fill=\"" << color(v) << "\"/>\n";
    }
  o << "<text x=\"" << left << "\" y=\"" << top + ny * cell + 16 << "\" font-size=\"11\">x: " << fixed(box.lo.x)
    << " .. " << fixed(box.hi.x) << ", y: " << fixed(box.lo.y) << " .. " << fixed(box.hi.y) << "</text>\n";
  o << "<text x=\"" << left + nx * cell + 8 << "\" y=\"" << top + 12 << "\" font-size=\"11\">max " << fixed(vmax)
    << "</text>\n";
  o << "<text x=\"" << left + nx * cell + 8 << "\" y=\"" << top + ny * cell << "\" font-size=\"11\">min " << fixed(vmin)
    << "</text>\n";
  o << "</svg>\n";
  return o.str();
}

}  // namespace nltrefftz

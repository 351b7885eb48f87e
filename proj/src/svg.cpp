#include "landau/svg.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "landau/errors.hpp"
#include "landau/format.hpp"

namespace landau {

namespace {

std::string escape(const std::string &s) {
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

} // namespace

std::string svg_line_plot(const PlotSeries &s, const std::string &title,
                          const std::string &xlabel, const std::string &ylabel, bool logx,
                          bool logy) {
  constexpr double W = 640, H = 420, L = 80, R = 20, T = 40, B = 60;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
    double x = s.x[i], y = s.y[i];
    if (!std::isfinite(x) || !std::isfinite(y) || (logx && x <= 0) || (logy && y <= 0))
      continue;
    pts.emplace_back(logx ? std::log10(x) : x, logy ? std::log10(y) : y);
  }
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!pts.empty()) {
    x0 = x1 = pts[0].first;
    y0 = y1 = pts[0].second;
    for (const auto &[x, y] : pts) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (x1 == x0) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  if (y1 == y0) {
    const double pad = y0 == 0.0 ? 0.5 : 0.05 * std::abs(y0);
    y0 -= pad;
    y1 += pad;
  }
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  auto label = [](double v, bool lg) { return fmt_short(lg ? std::pow(10.0, v) : v); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(title) << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << L << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
     << label(x0, logx) << "</text>\n";
  os << "<text x=\"" << W - R << "\" y=\"" << H - B + 16 << "\" text-anchor=\"end\">"
     << label(x1, logx) << "</text>\n";
  os << "<text x=\"" << L - 6 << "\" y=\"" << H - B << "\" text-anchor=\"end\">"
     << label(y0, logy) << "</text>\n";
  os << "<text x=\"" << L - 6 << "\" y=\"" << T + 4 << "\" text-anchor=\"end\">"
     << label(y1, logy) << "</text>\n";
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 20 << "\" text-anchor=\"middle\">"
     << escape(xlabel + (logx ? " (log)" : "")) << "</text>\n";
  os << "<text transform=\"translate(20," << (T + H - B) / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(ylabel + (logy ? " (log)" : ""))
     << "</text>\n";
  os << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i)
    os << (i ? " " : "") << fmt_short(px(pts[i].first)) << ',' << fmt_short(py(pts[i].second));
  os << "\"/>\n</svg>\n";
  return os.str();
}

void write_text_file(const std::string &path, const std::string &text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path())
    std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  out << text;
}

CsvTable read_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot read " + path);
  CsvTable t;
  std::string line;
  auto split = [](const std::string &l) {
    std::vector<std::string> cells;
    std::stringstream ss(l);
    std::string c;
    while (std::getline(ss, c, ','))
      cells.push_back(c);
    return cells;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    if (t.columns.empty()) {
      t.columns = split(line);
      continue;
    }
    std::vector<double> row;
    for (const auto &c : split(line)) {
      try {
        row.push_back(std::stod(c));
      } catch (const std::exception &) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
      }
    }
    t.rows.push_back(std::move(row));
  }
  if (t.columns.empty())
    throw ConfigError(path + ": no header row");
  return t;
}

std::vector<std::string> plot_csv(const std::string &csv_path, const std::string &out_dir) {
  const CsvTable t = read_csv(csv_path);
  std::vector<std::string> written;
  const std::string stem = std::filesystem::path(csv_path).stem().string();
  for (std::size_t c = 1; c < t.columns.size(); ++c) {
    PlotSeries s;
    for (const auto &row : t.rows)
      if (row.size() > c) {
        s.x.push_back(row[0]);
        s.y.push_back(row[c]);
      }
    const std::string path =
        (std::filesystem::path(out_dir) / (stem + "_" + t.columns[c] + ".svg")).string();
    write_text_file(path, svg_line_plot(s, t.columns[c] + " vs " + t.columns[0], t.columns[0],
                                        t.columns[c]));
    written.push_back(path);
  }
  return written;
}

} // namespace landau

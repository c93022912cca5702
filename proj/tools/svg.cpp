#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace wgqed::cli {

const std::vector<double>& Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return columns[i];
  }
  throw std::out_of_range("no column '" + name + "'");
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + " is empty");
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) t.header.push_back(cell);
  t.columns.resize(t.header.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::size_t i = 0;
    for (std::string cell; std::getline(ls, cell, ',') && i < t.columns.size(); ++i) {
      t.columns[i].push_back(std::stod(cell));
    }
  }
  return t;
}

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
const char* const kColors[] = {"#000000", "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd"};

// 1, 2 or 5 times a power of ten, giving about five intervals.
double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double f : {1.0, 2.0, 5.0}) {
    if (raw <= f * mag) return f * mag;
  }
  return 10.0 * mag;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(4) << v;
  return s.str();
}

}  // namespace

void plot_csv(const std::string& csv_path, const std::string& x, const std::vector<std::string>& ys,
              const std::string& title, const std::string& svg_path, bool log_y) {
  const Table t = read_csv(csv_path);
  const auto& xs = t.column(x);
  auto transform = [log_y](double v) {
    return log_y ? (v > 0 ? std::log10(v) : std::numeric_limits<double>::quiet_NaN()) : v;
  };

  double x0 = *std::min_element(xs.begin(), xs.end()), x1 = *std::max_element(xs.begin(), xs.end());
  double y0 = std::numeric_limits<double>::infinity(), y1 = -y0;
  for (const auto& name : ys) {
    for (double v : t.column(name)) {
      const double tv = transform(v);
      if (std::isfinite(tv)) {
        y0 = std::min(y0, tv);
        y1 = std::max(y1, tv);
      }
    }
  }
  if (!std::isfinite(y0)) y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return kTop + (y1 - v) / (y1 - y0) * ph; };

  std::ofstream out(svg_path);
  if (!out) throw std::runtime_error("cannot write " + svg_path);
  out << std::fixed << std::setprecision(2);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title
      << "</text>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"#444\"/>\n";

  const double xs_step = nice_step(x1 - x0);
  for (double v = std::ceil(x0 / xs_step) * xs_step; v <= x1 + 1e-9 * xs_step; v += xs_step) {
    out << "<line x1=\"" << px(v) << "\" y1=\"" << kTop + ph << "\" x2=\"" << px(v) << "\" y2=\"" << kTop + ph + 5
        << "\" stroke=\"#444\"/><text x=\"" << px(v) << "\" y=\"" << kTop + ph + 18
        << "\" text-anchor=\"middle\">" << fmt(std::abs(v) < 1e-12 * xs_step ? 0.0 : v) << "</text>\n";
  }
  const double ys_step = nice_step(y1 - y0);
  for (double v = std::ceil(y0 / ys_step) * ys_step; v <= y1 + 1e-9 * ys_step; v += ys_step) {
    const double label = log_y ? std::pow(10.0, v) : (std::abs(v) < 1e-12 * ys_step ? 0.0 : v);
    out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py(v) << "\" x2=\"" << kLeft << "\" y2=\"" << py(v)
        << "\" stroke=\"#444\"/><text x=\"" << kLeft - 8 << "\" y=\"" << py(v) + 4
        << "\" text-anchor=\"end\">" << fmt(label) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">" << x
      << "</text>\n";

  for (std::size_t k = 0; k < ys.size(); ++k) {
    const auto& v = t.column(ys[k]);
    const char* color = kColors[k % std::size(kColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double tv = transform(v[i]);
      if (std::isfinite(tv)) out << px(xs[i]) << ',' << py(tv) << ' ';
    }
    out << "\"/>\n";
    const double ly = kTop + 15 + 18 * static_cast<double>(k);
    out << "<line x1=\"" << kLeft + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << kLeft + pw + 32 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/><text x=\"" << kLeft + pw + 38 << "\" y=\""
        << ly + 4 << "\">" << ys[k] << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace wgqed::cli

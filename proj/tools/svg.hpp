#pragma once

#include <string>
#include <vector>

namespace wgqed::cli {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  /// Column by name; throws std::out_of_range when missing.
  const std::vector<double>& column(const std::string& name) const;
};

Table read_csv(const std::string& path);

/// Line plot of the named y columns against x, read from a CSV file.
/// The SVG depends only on the CSV contents.
void plot_csv(const std::string& csv_path, const std::string& x, const std::vector<std::string>& ys,
              const std::string& title, const std::string& svg_path, bool log_y = false);

}  // namespace wgqed::cli

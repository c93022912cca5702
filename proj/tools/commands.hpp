#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wgqed::cli {

struct Grid {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  /// Parses "start:stop:step". Throws ConfigError on malformed input.
  static Grid parse(const std::string& text);
  std::vector<double> points() const;
};

struct Request {
  std::string command;
  std::string config_path;  // empty: reference configuration
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  std::size_t samples = 0;  // 0: the command's default
  std::optional<Grid> grid;
  bool plot = false;
  std::size_t threads = 0;

  // pulse
  double sigma = 1.0;
  double length = 1.0;
  // g2: detuning, or the first T = R crossing when unset
  std::optional<double> detuning;
  bool ratio_of_means = false;
  // width-scan: "omega" or "atoms"
  std::string scan = "omega";
};

/// Runs one experiment and writes its CSV, manifest.json and optional SVGs
/// into out_dir. Returns the process exit status.
int run(const Request& request);

}  // namespace wgqed::cli

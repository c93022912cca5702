#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "wgqed/types.hpp"

int main(int argc, char** argv) {
  using wgqed::cli::Request;
  CLI::App app{"Photon transport through atoms randomly placed along a waveguide"};
  app.require_subcommand(1);

  Request req;
  std::string grid;
  const std::vector<std::pair<const char*, const char*>> subcommands{
      {"spectrum", "disorder-averaged T and R over a detuning grid"},
      {"pulse", "Gaussian single-photon pulse centred at the config detuning"},
      {"master", "master-equation trajectory of one placement from the ground state"},
      {"variance", "variance of T over placements per detuning"},
      {"g2", "second-order correlation of both output channels"},
      {"depth-scan", "optical depth versus atom number (grid over n)"},
      {"width-scan", "EIT width versus control field or atom number"},
  };
  for (const auto& [name, help] : subcommands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", req.config_path, "config file (key = value); default: reference setup")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", req.out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", req.seed, "master seed")->capture_default_str();
    sub->add_option("--samples", req.samples, "disorder samples (default depends on the command)");
    sub->add_option("--grid", grid, "start:stop:step (detuning, time, tau or n depending on the command)");
    sub->add_flag("--plot", req.plot, "also write SVG plots of the CSV output");
    sub->add_option("--threads", req.threads, "worker threads (default: available parallelism)");
    const std::string n = name;
    if (n == "pulse") {
      sub->add_option("--sigma", req.sigma, "spectral width")->capture_default_str();
      sub->add_option("--length", req.length, "quantization length")->capture_default_str();
    } else if (n == "g2") {
      sub->add_option("--detuning", req.detuning, "probe detuning (default: first T = R crossing)");
      sub->add_flag("--ratio-of-means", req.ratio_of_means, "average numerator and denominator separately");
    } else if (n == "width-scan") {
      sub->add_option("--scan", req.scan, "omega or atoms")->check(CLI::IsMember({"omega", "atoms"}));
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  req.command = app.get_subcommands().front()->get_name();
  try {
    if (!grid.empty()) req.grid = wgqed::cli::Grid::parse(grid);
  } catch (const wgqed::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  return wgqed::cli::run(req);
}

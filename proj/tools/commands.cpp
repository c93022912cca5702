#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>

#include <Eigen/Core>
#include <json.hpp>

#include "svg.hpp"
#include "wgqed/correlation.hpp"
#include "wgqed/disorder.hpp"
#include "wgqed/lindblad.hpp"
#include "wgqed/observables.hpp"
#include "wgqed/parallel.hpp"
#include "wgqed/pulse.hpp"

#ifndef WGQED_VERSION
#define WGQED_VERSION "unknown"
#endif

namespace wgqed::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

Grid Grid::parse(const std::string& text) {
  Grid g;
  std::stringstream s(text);
  std::string a, b, c;
  if (!std::getline(s, a, ':') || !std::getline(s, b, ':') || !std::getline(s, c) || s.rdbuf()->in_avail()) {
    throw ConfigError("grid must be start:stop:step, got '" + text + "'");
  }
  try {
    std::size_t ia = 0, ib = 0, ic = 0;
    g.start = std::stod(a, &ia);
    g.stop = std::stod(b, &ib);
    g.step = std::stod(c, &ic);
    if (ia != a.size() || ib != b.size() || ic != c.size()) throw std::invalid_argument(text);
  } catch (const std::logic_error&) {
    throw ConfigError("grid must be start:stop:step, got '" + text + "'");
  }
  if (!(g.step > 0.0) || !(g.stop >= g.start)) throw ConfigError("grid needs step > 0 and stop >= start");
  if ((g.stop - g.start) / g.step > 1e7) throw ConfigError("grid has more than 1e7 points");
  return g;
}

std::vector<double> Grid::points() const {
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  for (long k = 0; k <= count; ++k) {
    const double x = start + static_cast<double>(k) * step;
    out.push_back(std::abs(x) < 1e-12 * step ? 0.0 : x);
  }
  return out;
}

namespace {

json config_json(const SystemConfig& c) {
  return {{"delta", c.delta},       {"delta_c", c.delta_c},     {"omega_c", c.omega_c},
          {"gamma_1d", c.gamma_1d}, {"gamma_e", c.gamma_e},     {"gamma_p", c.gamma_p},
          {"gamma_d", c.gamma_d},   {"probe_amp", c.probe_amp}, {"kd", c.kd},
          {"n_atoms", c.n_atoms},   {"n_sites", c.n_sites},     {"sigma_ih", c.sigma_ih}};
}

struct Context {
  const Request& request;
  SystemConfig config;
  fs::path out;
  json results = json::object();
  std::vector<std::string> files;

  std::size_t samples(std::size_t fallback) const { return request.samples ? request.samples : fallback; }
  std::vector<double> grid(Grid fallback) const { return request.grid.value_or(fallback).points(); }

  std::ofstream open(const std::string& name) {
    files.push_back(name);
    std::ofstream f(out / name);
    if (!f) throw std::runtime_error("cannot write " + (out / name).string());
    f << std::setprecision(17);
    return f;
  }

  void plot(const std::string& csv, const std::string& x, const std::vector<std::string>& ys,
            const std::string& title, bool log_y = false) {
    if (!request.plot) return;
    const std::string svg = fs::path(csv).replace_extension(".svg").string();
    plot_csv((out / csv).string(), x, ys, title, (out / svg).string(), log_y);
    files.push_back(svg);
  }
};

void spectrum(Context& cx) {
  const auto deltas = cx.grid({-6.0, 6.0, 0.01});
  const std::size_t m = cx.samples(1000);
  const auto s = ensemble_spectrum(cx.config, deltas, m, cx.request.seed, cx.request.threads).averaged();
  auto f = cx.open("spectrum.csv");
  write_spectrum_csv(f, s);
  f.close();
  cx.results["samples"] = m;
  for (const auto& p : s.points) {
    if (p.delta == 0.0) cx.results["T_at_zero"] = p.T;
  }
  cx.plot("spectrum.csv", "delta", {"T", "R"}, "disorder-averaged transmission and reflection");
}

void pulse(Context& cx) {
  const GaussianPulse p{cx.config.delta, cx.request.sigma, cx.request.length};
  const std::size_t m = cx.samples(1000);
  const auto res = scatter_pulse(p, ensemble_provider(cx.config, m, cx.request.seed, cx.request.threads));
  auto f = cx.open("pulse.csv");
  write_pulse_csv(f, res);
  f.close();
  cx.results = {{"samples", m},
                {"omega0", p.omega0},
                {"sigma", p.sigma},
                {"length", p.length},
                {"T_pulse", res.T_pulse},
                {"R_pulse", res.R_pulse},
                {"loss_pulse", res.loss_pulse},
                {"normalization", res.normalization},
                {"eit_width", res.eit_width},
                {"grid_points", res.omega.size()},
                {"refinements", res.refinements}};
  cx.plot("pulse.csv", "omega", {"incident_density", "transmitted_density", "reflected_density"},
          "pulse spectral densities");
}

void master(Context& cx) {
  const auto times = cx.grid({0.0, 30.0, 0.1});
  const auto sample = draw_sample(cx.config, cx.request.seed, 0);
  const auto basis = master_basis(cx.config);
  const auto model = build_master_model(cx.config, sample.placement, sample.shifts, basis);
  const auto traj = evolve_master_observables(model, basis, sample.placement, cx.config, ground_density(basis), times);
  auto f = cx.open("trajectory.csv");
  f << "t,P_E,T,R\n";
  for (const auto& p : traj) f << p.t << ',' << p.P_E << ',' << p.T << ',' << p.R << '\n';
  f.close();
  const auto rho = steady_state_master(model);
  const auto obs = observables_from_density(rho, basis, sample.placement, cx.config);
  const auto check = check_density(rho);
  cx.results = {{"placement", sample.placement.sites()},
                {"basis_dimension", basis.dimension()},
                {"steady_T", obs.T},
                {"steady_R", obs.R},
                {"steady_P_E", collective_population(rho, collective_excited_state(basis))},
                {"min_eigenvalue", check.min_eigenvalue}};
  cx.plot("trajectory.csv", "t", {"P_E"}, "population of the collective excitation");
}

void variance(Context& cx) {
  const auto deltas = cx.grid({-30.0, 30.0, 0.1});
  const std::size_t m = cx.samples(kDefaultVarianceSamples);
  const auto v = variance_spectrum(cx.config, deltas, m, cx.request.seed, cx.request.threads);
  auto f = cx.open("variance.csv");
  f << "delta,mean_T,var_T,stderr_T,mean_R,var_R\n";
  for (const auto& p : v) {
    f << p.delta << ',' << p.mean_T << ',' << p.var_T << ',' << p.stderr_T << ',' << p.mean_R << ',' << p.var_R
      << '\n';
  }
  f.close();
  cx.results["samples"] = m;
  cx.plot("variance.csv", "delta", {"var_T"}, "variance of the transmission");
}

void g2(Context& cx) {
  const auto tau = cx.request.grid ? cx.request.grid->points() : default_tau_grid();
  const std::size_t m = cx.samples(1000);
  SystemConfig c = cx.config;
  if (cx.request.detuning) {
    c.delta = *cx.request.detuning;
  } else {
    const TransportFunction averaged = [&](double d) {
      const auto p = ensemble_spectrum(c, std::vector<double>{d}, m, cx.request.seed, cx.request.threads)
                         .averaged()
                         .points[0];
      return std::pair{p.T, p.R};
    };
    c.delta = find_tr_crossing(averaged, 0.0, 10.0 * std::max(1.0, c.omega_c), 0.01);
  }
  const auto averaging = cx.request.ratio_of_means ? G2Averaging::ratio_of_means : G2Averaging::mean_of_ratios;
  const auto [gt, gr] = ensemble_g2(c, tau, m, cx.request.seed, averaging, cx.request.threads);
  auto f = cx.open("g2.csv");
  write_g2_csv(f, gt, gr);
  f.close();
  cx.results = {{"samples", m},
                {"delta_star", c.delta},
                {"averaging", cx.request.ratio_of_means ? "ratio_of_means" : "mean_of_ratios"},
                {"g2_T_zero", gt.mean.front()},
                {"g2_R_zero", gr.mean.front()}};
  cx.plot("g2.csv", "tau", {"g2_T", "g2_R"}, "second-order correlation");
}

void depth_scan(Context& cx) {
  const auto atoms = cx.grid({10.0, 60.0, 10.0});
  const std::size_t m = cx.samples(10000);
  auto f = cx.open("depth.csv");
  f << "n,T0,D,D_law\n";
  json rows = json::array();
  for (double x : atoms) {
    SystemConfig c = cx.config;
    c.n_atoms = static_cast<int>(std::lround(x));
    const auto e = ensemble_spectrum(c, std::vector<double>{0.0}, m, cx.request.seed, cx.request.threads);
    const double t0 = e.T[0].mean, d = optical_depth(t0), law = 2.0 * c.n_atoms * c.gamma_1d / c.gamma_e;
    f << c.n_atoms << ',' << t0 << ',' << d << ',' << law << '\n';
    rows.push_back({{"n", c.n_atoms}, {"D", d}});
  }
  f.close();
  cx.results = {{"samples", m}, {"depth", rows}};
  cx.plot("depth.csv", "n", {"D", "D_law"}, "optical depth");
}

void width_scan(Context& cx) {
  const bool by_atoms = cx.request.scan == "atoms";
  if (!by_atoms && cx.request.scan != "omega") throw ConfigError("--scan must be 'omega' or 'atoms'");
  const auto values = cx.grid(by_atoms ? Grid{5.0, 40.0, 5.0} : Grid{1.0, 3.0, 0.5});
  const std::size_t m = cx.samples(1000);
  auto f = cx.open("width.csv");
  f << (by_atoms ? "n,inv_sqrt_n" : "omega_c,omega_c2_over_gamma_1d") << ",width,fit_residual\n";
  for (double v : values) {
    SystemConfig c = cx.config;
    double x = 0.0;
    if (by_atoms) {
      c.n_atoms = static_cast<int>(std::lround(v));
      x = 1.0 / std::sqrt(static_cast<double>(c.n_atoms));
    } else {
      c.omega_c = v;
      x = v * v / c.gamma_1d;
    }
    const auto coarse = ensemble_spectrum(c, Grid{-4.0, 4.0, 0.02}.points(), m, cx.request.seed, cx.request.threads);
    const double w0 = eit_width(coarse.averaged()).width;
    const auto fine = ensemble_spectrum(c, Grid{-2.0 * w0, 2.0 * w0, w0 / 100.0}.points(), m, cx.request.seed,
                                        cx.request.threads);
    const auto fit = eit_width(fine.averaged());
    f << v << ',' << x << ',' << fit.width << ',' << fit.residual << '\n';
  }
  f.close();
  cx.results["samples"] = m;
  cx.plot("width.csv", by_atoms ? "inv_sqrt_n" : "omega_c2_over_gamma_1d", {"width"}, "EIT window width");
}

const std::map<std::string, std::function<void(Context&)>>& commands() {
  static const std::map<std::string, std::function<void(Context&)>> table{
      {"spectrum", spectrum}, {"pulse", pulse},             {"master", master},        {"variance", variance},
      {"g2", g2},             {"depth-scan", depth_scan}, {"width-scan", width_scan}};
  return table;
}

}  // namespace

int run(const Request& request) {
  const auto it = commands().find(request.command);
  if (it == commands().end()) {
    std::cerr << "unknown subcommand '" << request.command << "'\n";
    return 2;
  }

  SystemConfig config;
  try {
    config = request.config_path.empty() ? SystemConfig::reference() : load_config(request.config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  const auto diagnostics = validate(config);
  for (const auto& d : diagnostics) {
    std::cerr << (d.severity == Diagnostic::Severity::error ? "error" : "warning") << ": " << d.key << ": "
              << d.message << '\n';
  }
  if (has_errors(diagnostics)) return 2;

  if (request.threads) set_default_thread_count(request.threads);
  Context cx{request, config, fs::path(request.out_dir), json::object(), {}};
  const auto start = std::chrono::steady_clock::now();
  try {
    fs::create_directories(cx.out);
    it->second(cx);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const SampleError& e) {
    std::cerr << "solver error in sample " << e.index() << ": " << e.what() << "\nreplay with --seed "
              << request.seed << " (sample seed " << e.sample_seed() << ")\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\nreplay with --seed " << request.seed << '\n';
    return 1;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json manifest{
      {"command", request.command},
      {"config", config_json(config)},
      {"seed", request.seed},
      {"samples", request.samples},
      {"threads", request.threads ? request.threads : default_thread_count()},
      {"grid", request.grid ? json{request.grid->start, request.grid->stop, request.grid->step} : json(nullptr)},
      {"versions",
       {{"wgqed", WGQED_VERSION},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
        {"compiler", __VERSION__}}},
      {"timings", {{"wall_seconds", wall}}},
      {"results", cx.results},
      {"files", cx.files}};
  std::ofstream(cx.out / "manifest.json") << manifest.dump(2) << '\n';
  std::cout << "wrote " << cx.files.size() << " file(s) and manifest.json to " << cx.out.string() << '\n';
  return 0;
}

}  // namespace wgqed::cli

#include "wgqed/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>

#include "wgqed/disorder.hpp"

namespace wgqed {

double pulse_amplitude(const GaussianPulse& pulse, double omega) {
  if (!(pulse.sigma > 0.0) || !(pulse.length > 0.0)) throw DomainError("pulse width and length must be positive");
  const double x = (omega - pulse.omega0) / pulse.sigma;
  return std::pow(8.0 * std::numbers::pi, 0.25) / std::sqrt(pulse.sigma * pulse.length) * std::exp(-x * x);
}

SpectrumProvider ensemble_provider(const SystemConfig& config, std::size_t m, std::uint64_t seed,
                                   std::size_t threads) {
  return [config, m, seed, threads](std::span<const double> grid) {
    return ensemble_spectrum(config, grid, m, seed, threads).averaged();
  };
}

namespace {

// Multiples of `step` inside [lo, hi], the end points, and multiples of
// `fine` inside [-radius, radius] when radius > 0. Sorted and deduplicated.
std::vector<double> build_grid(double lo, double hi, double step, double fine, double radius) {
  std::vector<double> g{lo, hi};
  for (auto k = static_cast<long>(std::ceil(lo / step)); k <= static_cast<long>(std::floor(hi / step)); ++k) {
    g.push_back(static_cast<double>(k) * step);
  }
  if (radius > 0.0) {
    const auto kmax = static_cast<long>(std::floor(radius / fine));
    for (long k = -kmax; k <= kmax; ++k) {
      const double x = static_cast<double>(k) * fine;
      if (x >= lo && x <= hi) g.push_back(x);
    }
  }
  std::sort(g.begin(), g.end());
  std::vector<double> out;
  for (double x : g) {
    if (out.empty() || x - out.back() > 1e-12 * std::max(1.0, std::abs(x))) {
      out.push_back(x);
    } else if (x == 0.0) {
      out.back() = 0.0;  // keep resonance exactly on the grid
    }
  }
  return out;
}

bool has_transparency_peak(const Spectrum& s) {
  const auto& p = s.points;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    if (p[i].delta == 0.0) return p[i].T > p[i - 1].T && p[i].T > p[i + 1].T;
  }
  return false;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double acc = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) acc += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return acc;
}

}  // namespace

PulseResult scatter_pulse(const GaussianPulse& pulse, const SpectrumProvider& provider,
                          const PulseGridPolicy& policy) {
  if (!(policy.step_per_width > 0.0 && policy.step_per_width <= 0.1)) {
    throw DomainError("refined step must be at most a tenth of the EIT width");
  }
  const double lo = pulse.omega0 - policy.span_sigmas * pulse.sigma;
  const double hi = pulse.omega0 + policy.span_sigmas * pulse.sigma;
  const double base = policy.base_step_sigmas * pulse.sigma;

  double fine = base, radius = 0.0;
  int refinements = 0;
  std::vector<double> grid;
  Spectrum spectrum;
  std::optional<WidthFit> fit;

  while (true) {
    grid = build_grid(lo, hi, base, fine, radius);
    spectrum = provider(grid);
    if (spectrum.points.size() != grid.size()) throw GridError("spectrum provider returned the wrong grid");
    if (!has_transparency_peak(spectrum)) break;

    bool resolved = false;
    try {
      fit = eit_width(spectrum);
      const double required = policy.step_per_width * fit->width;
      const bool covered = std::min(fine, base) <= required &&
                           (base <= required || radius >= policy.window_widths * fit->width);
      resolved = covered && fit->residual <= policy.max_fit_residual;
      if (!resolved) {
        fine = std::min(required, fine / 2.0);
        radius = std::max(radius, policy.window_widths * fit->width);
      }
    } catch (const InsufficientDataError&) {
      radius = std::max(radius, 10.0 * fine);
      fine /= 4.0;
    } catch (const DomainError&) {
      break;
    }
    if (resolved) break;
    if (++refinements > policy.max_refinements) {
      throw GridError("EIT window not resolved after " + std::to_string(policy.max_refinements) +
                      " refinements");
    }
  }

  PulseResult res;
  res.omega = grid;
  res.refinements = refinements;
  res.eit_width = fit ? fit->width : 0.0;
  std::vector<double> loss_density;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = pulse_amplitude(pulse, grid[i]);
    const double w = a * a;
    const auto& p = spectrum.points[i];
    res.incident_density.push_back(w);
    res.transmitted_density.push_back(w * p.T);
    res.reflected_density.push_back(w * p.R);
    loss_density.push_back(w * (1.0 - p.T - p.R));
  }
  // Fractions are taken relative to the discrete norm so that quadrature
  // error at the junctions of the refined grid cancels.
  const double norm = trapezoid(grid, res.incident_density);
  res.normalization = pulse.length / (2.0 * std::numbers::pi) * norm;
  res.T_pulse = trapezoid(grid, res.transmitted_density) / norm;
  res.R_pulse = trapezoid(grid, res.reflected_density) / norm;
  res.loss_pulse = trapezoid(grid, loss_density) / norm;
  return res;
}

std::vector<LossScanPoint> loss_vs_coupling_scan(const SystemConfig& config_template,
                                                 std::span<const double> gamma_1d_grid,
                                                 const GaussianPulse& pulse, std::size_t m,
                                                 std::uint64_t seed, const PulseGridPolicy& policy,
                                                 std::size_t threads) {
  std::vector<LossScanPoint> out;
  for (double g : gamma_1d_grid) {
    SystemConfig c = config_template;
    c.gamma_1d = g;
    const auto res = scatter_pulse(pulse, ensemble_provider(c, m, seed, threads), policy);
    out.push_back({g, res.T_pulse, res.R_pulse, res.loss_pulse});
  }
  return out;
}

LossPeak locate_loss_peak(std::span<const LossScanPoint> scan) {
  if (scan.empty()) throw InsufficientDataError("empty loss scan");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scan.size(); ++i) {
    if (scan[i].loss_pulse > scan[best].loss_pulse) best = i;
  }
  LossPeak peak{scan[best].gamma_1d, scan[best].loss_pulse};
  if (best == 0 || best + 1 == scan.size()) return peak;

  // Parabola through three (not necessarily uniform) points.
  const double x0 = scan[best - 1].gamma_1d, x1 = scan[best].gamma_1d, x2 = scan[best + 1].gamma_1d;
  const double y0 = scan[best - 1].loss_pulse, y1 = scan[best].loss_pulse, y2 = scan[best + 1].loss_pulse;
  const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
  const double a = (d12 - d01) / (x2 - x0);
  if (!(a < 0.0)) return peak;
  const double b = d01 - a * (x0 + x1);
  const double xv = -b / (2.0 * a);
  if (xv < x0 || xv > x2) return peak;
  peak.gamma_1d = xv;
  peak.loss = y0 + d01 * (xv - x0) + a * (xv - x0) * (xv - x1);
  return peak;
}

void write_pulse_csv(std::ostream& out, const PulseResult& result) {
  out << "omega,incident_density,transmitted_density,reflected_density\n" << std::setprecision(17);
  for (std::size_t i = 0; i < result.omega.size(); ++i) {
    out << result.omega[i] << ',' << result.incident_density[i] << ',' << result.transmitted_density[i]
        << ',' << result.reflected_density[i] << '\n';
  }
}

}  // namespace wgqed

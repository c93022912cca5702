#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "wgqed/model.hpp"
#include "wgqed/observables.hpp"

namespace wgqed {

struct GaussianPulse {
  double omega0 = 0.0;  // centre, as a detuning from the atomic line
  double sigma = 1.0;   // spectral width
  double length = 1.0;  // quantization length
};

/// A(omega) = (8 pi)^{1/4} / sqrt(sigma L) * exp(-(omega - omega0)^2 / sigma^2).
double pulse_amplitude(const GaussianPulse& pulse, double omega);

/// Maps a detuning grid to (averaged) T and R on that grid.
using SpectrumProvider = std::function<Spectrum(std::span<const double>)>;

/// Disorder-averaged linear spectrum of `config` with m samples.
SpectrumProvider ensemble_provider(const SystemConfig& config, std::size_t m, std::uint64_t seed,
                                   std::size_t threads = 0);

struct PulseGridPolicy {
  double span_sigmas = 5.0;         // grid covers omega0 +- span_sigmas * sigma
  double base_step_sigmas = 0.01;   // coarse step in units of sigma
  double window_widths = 2.0;       // refined region |delta| <= window_widths * w
  double step_per_width = 0.025;    // refined step as a fraction of w (at most 0.1)
  int max_refinements = 10;
  double max_fit_residual = 0.2;    // RMS misfit of ln T accepted for w
};

struct PulseResult {
  std::vector<double> omega;
  std::vector<double> incident_density;     // |A|^2
  std::vector<double> transmitted_density;  // |A|^2 T
  std::vector<double> reflected_density;    // |A|^2 R
  double T_pulse = 0.0;
  double R_pulse = 0.0;
  double loss_pulse = 0.0;
  double normalization = 0.0;  // (L / 2 pi) * integral of |A|^2 on the grid, before normalizing
  double eit_width = 0.0;      // 0 when the spectrum has no transparency peak at delta = 0
  int refinements = 0;
};

/// Frequency-weighted quadrature (L / 2 pi) * integral |A|^2 {T, R, 1 - T - R}
/// by the trapezoid rule, divided by the same quadrature of |A|^2. An EIT peak at delta = 0 is resolved by refining
/// the grid until its step is below step_per_width * w inside the window;
/// throws GridError if that fails within max_refinements.
PulseResult scatter_pulse(const GaussianPulse& pulse, const SpectrumProvider& provider,
                          const PulseGridPolicy& policy = {});

struct LossScanPoint {
  double gamma_1d = 0.0;
  double T_pulse = 0.0;
  double R_pulse = 0.0;
  double loss_pulse = 0.0;
};

/// Pulse transport for each gamma_1d on the grid, all using the same
/// disorder samples.
std::vector<LossScanPoint> loss_vs_coupling_scan(const SystemConfig& config_template,
                                                 std::span<const double> gamma_1d_grid,
                                                 const GaussianPulse& pulse, std::size_t m,
                                                 std::uint64_t seed, const PulseGridPolicy& policy = {},
                                                 std::size_t threads = 0);

struct LossPeak {
  double gamma_1d = 0.0;
  double loss = 0.0;
};

/// Maximum of the scanned loss, sharpened by a parabola through the grid
/// maximum and its neighbours when they exist.
LossPeak locate_loss_peak(std::span<const LossScanPoint> scan);

void write_pulse_csv(std::ostream& out, const PulseResult& result);

}  // namespace wgqed

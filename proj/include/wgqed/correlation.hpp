#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "wgqed/basis.hpp"
#include "wgqed/hamiltonian.hpp"
#include "wgqed/observables.hpp"

namespace wgqed {

/// Delta* where T and R cross on an averaged spectrum: the `which`-th
/// (0-based) crossing at positive detuning, located by linear interpolation
/// between the bracketing grid points. Throws DomainError if there is none.
double find_tr_crossing(const Spectrum& spectrum, int which = 0);

/// (T, R) as a function of detuning, e.g. a disorder average on fixed samples.
using TransportFunction = std::function<std::pair<double, double>(double)>;

/// Scans [lo, hi] with `step` for the `which`-th sign change of T - R at
/// positive detuning, then bisects the bracket to `tolerance`.
double find_tr_crossing(const TransportFunction& transport, double lo, double hi, double step,
                        int which = 0, double tolerance = 1e-4);

/// 400 points on [0, 20].
std::vector<double> default_tau_grid();

struct G2Curve {
  Channel channel = Channel::transmitted;
  double delta_star = 0.0;
  std::vector<double> tau;
  std::vector<double> values;
};

/// Per-placement pieces of g2: g2(tau) = numerator(tau) / denominator.
struct G2Parts {
  std::vector<double> numerator;
  double denominator = 0.0;
};

/// g2(tau) = <psi|a^dag e^{iH^dag tau} a^dag a e^{-iH tau} a|psi> <psi|psi> / <psi|a^dag a|psi>^2
/// with H = h_non + h_dri and psi the weak-drive steady state. Each excitation
/// sector is rescaled by probe_amp^m so all amplitudes are O(1) during the
/// evolution; the result is the exact expression within the truncation.
/// Throws UndefinedCorrelationError when <a^dag a> < 1e-30.
G2Parts g2_parts(const EffectiveModel& model, const TruncatedBasis& basis, const AtomPlacement& placement,
                 const SystemConfig& config, Channel channel, std::span<const double> tau);

G2Curve g2(const EffectiveModel& model, const TruncatedBasis& basis, const AtomPlacement& placement,
           const SystemConfig& config, Channel channel, std::span<const double> tau);

enum class G2Averaging {
  mean_of_ratios,  // average the per-placement g2 curves
  ratio_of_means,  // average numerators and denominators separately
};

struct G2Ensemble {
  Channel channel = Channel::transmitted;
  double delta_star = 0.0;
  std::vector<double> tau;
  std::vector<double> mean;
  std::vector<double> standard_error;  // spread of per-sample g2 over sqrt(m)
  std::size_t m = 0;
  std::uint64_t seed = 0;
};

/// Disorder-averaged g2 of both channels at detuning config.delta over m
/// placements (and shifts when sigma_ih > 0) using the two-excitation basis.
std::pair<G2Ensemble, G2Ensemble> ensemble_g2(const SystemConfig& config, std::span<const double> tau,
                                              std::size_t m, std::uint64_t seed,
                                              G2Averaging averaging = G2Averaging::mean_of_ratios,
                                              std::size_t threads = 0);

/// CSV with columns tau,g2_T,g2_R,stderr_T,stderr_R.
void write_g2_csv(std::ostream& out, const G2Ensemble& transmitted, const G2Ensemble& reflected);

}  // namespace wgqed

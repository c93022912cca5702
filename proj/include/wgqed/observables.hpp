#pragma once

#include <iosfwd>
#include <vector>

#include "wgqed/basis.hpp"
#include "wgqed/model.hpp"
#include "wgqed/scattering.hpp"
#include "wgqed/steadystate.hpp"
#include "wgqed/types.hpp"

namespace wgqed {

struct ScatterPoint {
  double delta = 0.0;
  Complex t_amp{1.0, 0.0};
  Complex r_amp{0.0, 0.0};
  double T = 1.0;
  double R = 0.0;
  double loss = 0.0;  // 1 - T - R

  static ScatterPoint from(double delta, const TransportAmplitudes& amps);
  /// Intensities only, e.g. after averaging over disorder.
  static ScatterPoint from_intensities(double delta, double T, double R);
};

struct Spectrum {
  std::vector<ScatterPoint> points;  // strictly increasing delta
  std::vector<double> T_variance;    // empty, or one entry per point

  std::vector<double> deltas() const;
  std::vector<double> transmission() const;
  /// Throws GridError unless the detunings are strictly increasing.
  void check_grid() const;
};

enum class Channel { transmitted, reflected };

const char* channel_name(Channel channel);

/// Output field operator over the basis: probe_amp * identity (transmitted
/// channel only) + i sqrt(gamma_1d / 2) sum_j exp(-/+ i kd site_j) S_ge^j.
OperatorMatrix output_operator(const TruncatedBasis& basis, const AtomPlacement& placement,
                               const SystemConfig& config, Channel channel);

/// (t, r) from the first-order amplitudes of a weak-drive steady state.
TransportAmplitudes output_amplitudes(const SteadyState& state, const TruncatedBasis& basis,
                                      const AtomPlacement& placement, const SystemConfig& config);

/// T = Tr[rho a_T^dag a_T] / probe_amp^2 and likewise R. Throws DomainError
/// when the trace of rho deviates from 1 by more than 1e-6.
ScatterPoint observables_from_density(const CMatrix& rho, const TruncatedBasis& basis,
                                      const AtomPlacement& placement, const SystemConfig& config);

/// D = -ln T0. Throws DomainError for T0 <= 0.
double optical_depth(double T0);

struct WidthFit {
  double width = 0.0;
  double residual = 0.0;   // RMS misfit of ln T in the window
  std::size_t points = 0;  // grid points in the window
};

/// Fits T = T0 exp(-delta^2 / w^2) by least squares of ln T against delta^2
/// over the contiguous window around delta = 0 where T >= T0 / 2.
/// Throws InsufficientDataError with fewer than 5 points in the window.
WidthFit eit_width(const Spectrum& spectrum);

/// T at delta = 0; the grid must contain 0 exactly.
double eit_height(const Spectrum& spectrum);

/// <E|rho|E> for a density matrix, |<E|psi>|^2 for a pure state.
double collective_population(const CMatrix& rho, const CVector& e_state);
double collective_population(const CVector& psi, const CVector& e_state);

/// CSV with columns delta,T,R,loss and T_variance when present.
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);

}  // namespace wgqed

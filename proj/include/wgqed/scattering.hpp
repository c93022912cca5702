#pragma once

#include <span>
#include <vector>

#include "wgqed/model.hpp"
#include "wgqed/types.hpp"

namespace wgqed {

struct TransportAmplitudes {
  Complex t{1.0, 0.0};
  Complex r{0.0, 0.0};

  double transmission() const { return std::norm(t); }
  double reflection() const { return std::norm(r); }
};

/// Linear (single-excitation) scattering of one placement over many probe
/// detunings. The one-excitation block depends on the detuning only through
/// -delta * I, so it is reduced to Hessenberg form once and every detuning
/// then costs one O(n^2) Hessenberg solve.
///
/// The probe amplitude cancels at this order and is ignored; config.delta is
/// ignored in favour of the detuning passed to at().
class LinearScatterer {
 public:
  LinearScatterer(const SystemConfig& config, const AtomPlacement& placement,
                  const InhomogeneousShifts& shifts);

  TransportAmplitudes at(double delta) const;
  std::vector<TransportAmplitudes> at(std::span<const double> deltas) const;

 private:
  bool decoupled_ = false;
  int n_ = 0;
  double coupling_ = 0.0;  // sqrt(gamma_1d / 2)
  CMatrix hessenberg_;
  CVector source_;         // Q^dag (-W), W the per-atom drive
  CVector transmit_;       // Q^T applied to the outgoing forward phases
  CVector reflect_;
};

/// Same amplitudes from a dense LU of the one-excitation block at a single
/// detuning. Slower; kept as an independent route for cross-checks.
TransportAmplitudes scatter_dense(const SystemConfig& config, const AtomPlacement& placement,
                                  const InhomogeneousShifts& shifts, double delta);

}  // namespace wgqed

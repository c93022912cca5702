#pragma once

#include <string>
#include <vector>

#include "wgqed/basis.hpp"
#include "wgqed/model.hpp"
#include "wgqed/types.hpp"

namespace wgqed {

/// Global sign of the probe drive. Fixed so that a single two-level atom with
/// no free-space loss reflects a resonant probe completely (t = 0, r = -1).
inline constexpr double kDriveSign = -1.0;

/// One Lindblad channel: rate * (L rho L^dag - {L^dag L, rho} / 2).
struct JumpOperator {
  std::string label;
  double rate = 0.0;
  OperatorMatrix op;
};

/// Dissipator groups: (a) collective waveguide decay, (b) free-space decay,
/// (c) g <-> s relaxation, (d) g-s dephasing.
struct Dissipators {
  std::vector<JumpOperator> collective;
  std::vector<JumpOperator> free_space;
  std::vector<JumpOperator> relaxation;
  std::vector<JumpOperator> dephasing;

  std::vector<const JumpOperator*> all() const;
};

struct EffectiveModel {
  OperatorMatrix h_non;  // non-Hermitian effective Hamiltonian
  OperatorMatrix h_dri;  // probe drive, proportional to probe_amp
  OperatorMatrix h_coh;  // Hermitian part used by the master equation
  Dissipators dissipators;
};

/// Phase kd * |site_j - site_k| between atoms j and k.
double pair_phase(const SystemConfig& config, const AtomPlacement& placement, int j, int k);

/// gamma_1d * cos(kd |site_j - site_k|), the waveguide decay kernel.
RMatrix collective_kernel(const SystemConfig& config, const AtomPlacement& placement);

OperatorMatrix build_nonhermitian(const SystemConfig& config, const AtomPlacement& placement,
                                  const InhomogeneousShifts& shifts, const TruncatedBasis& basis);

OperatorMatrix build_drive(const SystemConfig& config, const AtomPlacement& placement,
                           const TruncatedBasis& basis);

struct MasterParts {
  OperatorMatrix h_coh;
  Dissipators dissipators;
};

MasterParts build_master_parts(const SystemConfig& config, const AtomPlacement& placement,
                               const InhomogeneousShifts& shifts, const TruncatedBasis& basis);

EffectiveModel build_model(const SystemConfig& config, const AtomPlacement& placement,
                           const InhomogeneousShifts& shifts, const TruncatedBasis& basis);

/// Drops explicit zeros so the sparsity pattern reflects actual couplings.
void prune_zeros(OperatorMatrix& m);

}  // namespace wgqed

#pragma once

#include <span>
#include <vector>

#include "wgqed/basis.hpp"
#include "wgqed/hamiltonian.hpp"
#include "wgqed/observables.hpp"
#include "wgqed/ode.hpp"
#include "wgqed/types.hpp"

namespace wgqed {

/// Dense density matrix over a TruncatedBasis.
using DensityMatrix = CMatrix;

/// Builds the model for master-equation use. Population relaxation pumps
/// atoms out of the ground manifold without bound, so a truncated basis is
/// accepted only with gamma_p = 0.
EffectiveModel build_master_model(const SystemConfig& config, const AtomPlacement& placement,
                                  const InhomogeneousShifts& shifts, const TruncatedBasis& basis);

/// rho -> -i[h_coh + h_dri, rho] + sum of all dissipators applied to rho.
class MasterGenerator {
 public:
  explicit MasterGenerator(const EffectiveModel& model);

  DensityMatrix apply(const DensityMatrix& rho) const;
  Eigen::Index dimension() const { return h_eff_.rows(); }

 private:
  OperatorMatrix h_eff_;  // h_coh + h_dri - (i/2) sum rate L^dag L
  std::vector<std::pair<double, OperatorMatrix>> jumps_;
  std::vector<OperatorMatrix> jumps_adj_;
};

DensityMatrix master_rhs(const EffectiveModel& model, const DensityMatrix& rho);

/// Superoperator acting on column-major vec(rho).
OperatorMatrix liouvillian(const EffectiveModel& model);

/// |g...g><g...g|.
DensityMatrix ground_density(const TruncatedBasis& basis);

struct DensityCheck {
  double hermiticity = 0.0;     // max |rho - rho^dag|
  double trace_error = 0.0;     // |Tr rho - 1|
  double min_eigenvalue = 0.0;
};

DensityCheck check_density(const DensityMatrix& rho);

inline const OdeTolerances kMasterTolerances{1e-8, 1e-15};

/// Density matrices at each time of an increasing grid starting from rho0 at
/// t_grid[0]. Outputs are re-symmetrized; the integrator state is not.
std::vector<DensityMatrix> evolve_master(const EffectiveModel& model, const DensityMatrix& rho0,
                                         std::span<const double> t_grid,
                                         const OdeTolerances& tol = kMasterTolerances);

struct TrajectoryPoint {
  double t = 0.0;
  double P_E = 0.0;  // population of the collective excitation |E>
  double T = 0.0;
  double R = 0.0;
};

std::vector<TrajectoryPoint> evolve_master_observables(
    const EffectiveModel& model, const TruncatedBasis& basis, const AtomPlacement& placement,
    const SystemConfig& config, const DensityMatrix& rho0, std::span<const double> t_grid,
    const OdeTolerances& tol = kMasterTolerances);

struct SteadyStateOptions {
  /// Largest vec(rho) length solved directly by sparse LU.
  Eigen::Index direct_limit = 16384;
  double residual_tolerance = 1e-10;
  double fallback_max_time = 1e5;
};

/// Steady state reached from the ground state: sparse LU of the Liouvillian
/// restricted to the block connected to the ground population, with the
/// trace condition replacing one equation. Above the direct limit, integrates
/// from the ground state until ||d rho / dt|| < 1e-10 and throws
/// IntegrationError past fallback_max_time.
DensityMatrix steady_state_master(const EffectiveModel& model, const SteadyStateOptions& options = {});

/// Smallest basis that is exact for weak-probe master-equation observables:
/// with gamma_p = 0 the drive only reaches multi-excitation coherences at
/// higher order in probe_amp, so one excitation suffices for T, R and P_E.
/// Population relaxation needs the full space.
TruncatedBasis master_basis(const SystemConfig& config);

}  // namespace wgqed

#pragma once

#include <span>
#include <string>
#include <vector>

#include "wgqed/basis.hpp"
#include "wgqed/hamiltonian.hpp"
#include "wgqed/ode.hpp"
#include "wgqed/types.hpp"

namespace wgqed {

/// Weak-probe steady state of h_non + h_dri, graded by excitation number.
/// c0 is pinned to 1; c1 is O(probe_amp) and c2 is O(probe_amp^2).
struct SteadyState {
  Complex c0{1.0, 0.0};
  CVector c1;
  CVector c2;  // empty when the basis stops at one excitation

  /// Amplitudes laid out over the whole basis (zero beyond the solved orders).
  CVector assemble(const TruncatedBasis& basis) const;
};

/// Solves h_non^(1) c1 = -V^(1,0) c0 and h_non^(2) c2 = -V^(2,1) c1 by
/// sparse LU. Configurations the drive cannot reach keep zero amplitude.
/// Throws SingularBlockError naming the block when a reachable block is
/// singular.
SteadyState solve_weak_drive(const EffectiveModel& model, const TruncatedBasis& basis);

/// Solves A x = b restricted to the connected components of A's sparsity
/// graph that b touches; x is zero elsewhere.
CVector solve_reachable(const OperatorMatrix& a, const CVector& b, const std::string& block_name);

/// Copies rows [r0, r0 + rows) and columns [c0, c0 + cols) of a sparse matrix.
OperatorMatrix sparse_block(const OperatorMatrix& m, std::size_t r0, std::size_t c0,
                            std::size_t rows, std::size_t cols);

inline const OdeTolerances kEvolveTolerances{1e-9, 1e-12};

/// psi(tau) = exp(-i H tau) psi0 at every grid time by adaptive integration
/// starting from tau = 0. Grid times must be nonnegative and increasing.
std::vector<CVector> evolve(const OperatorMatrix& hamiltonian, const CVector& psi0,
                            std::span<const double> tau_grid,
                            const OdeTolerances& tol = kEvolveTolerances);

/// Evolution under the full driven Hamiltonian h_non + h_dri.
std::vector<CVector> evolve(const EffectiveModel& model, const CVector& psi0,
                            std::span<const double> tau_grid,
                            const OdeTolerances& tol = kEvolveTolerances);

}  // namespace wgqed

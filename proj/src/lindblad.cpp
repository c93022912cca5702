#include "wgqed/lindblad.hpp"

#include <algorithm>
#include <array>

#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>

namespace wgqed {

EffectiveModel build_master_model(const SystemConfig& config, const AtomPlacement& placement,
                                  const InhomogeneousShifts& shifts, const TruncatedBasis& basis) {
  if (basis.truncation() != Truncation::full && config.gamma_p > 0.0) {
    throw DomainError("population relaxation needs the full configuration space");
  }
  return build_model(config, placement, shifts, basis);
}

MasterGenerator::MasterGenerator(const EffectiveModel& model) {
  h_eff_ = model.h_coh + model.h_dri;
  for (const auto* jump : model.dissipators.all()) {
    const OperatorMatrix adj = jump->op.adjoint();
    h_eff_ -= (kI * 0.5 * jump->rate) * OperatorMatrix(adj * jump->op);
    jumps_.emplace_back(jump->rate, jump->op);
    jumps_adj_.push_back(adj);
  }
  prune_zeros(h_eff_);
}

DensityMatrix MasterGenerator::apply(const DensityMatrix& rho) const {
  // -i (H_eff rho - rho H_eff^dag) + sum rate L rho L^dag
  // rho is Hermitian only up to rounding, so rho H_eff^dag is formed explicitly.
  DensityMatrix out = -kI * (h_eff_ * rho) + kI * (rho * h_eff_.adjoint());
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    const CMatrix lr = jumps_[i].second * rho;
    out.noalias() += jumps_[i].first * (lr * jumps_adj_[i]);
  }
  return out;
}

DensityMatrix master_rhs(const EffectiveModel& model, const DensityMatrix& rho) {
  return MasterGenerator(model).apply(rho);
}

OperatorMatrix liouvillian(const EffectiveModel& model) {
  const Eigen::Index d = model.h_coh.rows();
  OperatorMatrix id(d, d);
  id.setIdentity();
  OperatorMatrix h_eff = model.h_coh + model.h_dri;
  for (const auto* jump : model.dissipators.all()) {
    h_eff -= (kI * 0.5 * jump->rate) * OperatorMatrix(OperatorMatrix(jump->op.adjoint()) * jump->op);
  }
  const OperatorMatrix h_conj = h_eff.conjugate();
  // vec(A X B) = (B^T kron A) vec(X)
  OperatorMatrix l = -kI * OperatorMatrix(Eigen::kroneckerProduct(id, h_eff)) +
                     kI * OperatorMatrix(Eigen::kroneckerProduct(h_conj, id));
  for (const auto* jump : model.dissipators.all()) {
    const OperatorMatrix l_conj = jump->op.conjugate();
    l += jump->rate * OperatorMatrix(Eigen::kroneckerProduct(l_conj, jump->op));
  }
  prune_zeros(l);
  l.makeCompressed();
  return l;
}

DensityMatrix ground_density(const TruncatedBasis& basis) {
  const auto d = static_cast<Eigen::Index>(basis.dimension());
  DensityMatrix rho = DensityMatrix::Zero(d, d);
  rho(0, 0) = 1.0;
  return rho;
}

DensityCheck check_density(const DensityMatrix& rho) {
  DensityCheck c;
  c.hermiticity = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  c.trace_error = std::abs(rho.trace() - 1.0);
  const CMatrix sym = (rho + rho.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym, Eigen::EigenvaluesOnly);
  c.min_eigenvalue = es.eigenvalues().minCoeff();
  return c;
}

std::vector<DensityMatrix> evolve_master(const EffectiveModel& model, const DensityMatrix& rho0,
                                         std::span<const double> t_grid, const OdeTolerances& tol) {
  if (rho0.rows() != model.h_coh.rows() || rho0.cols() != rho0.rows()) {
    throw DomainError("initial density matrix does not match the model");
  }
  const MasterGenerator gen(model);
  std::vector<DensityMatrix> out;
  out.reserve(t_grid.size());
  integrate_dopri5([&](double, const DensityMatrix& rho) { return gen.apply(rho); }, rho0, t_grid, tol,
                   [&](std::size_t, double, const DensityMatrix& rho) {
                     out.push_back((rho + rho.adjoint()) / 2.0);
                   });
  return out;
}

std::vector<TrajectoryPoint> evolve_master_observables(
    const EffectiveModel& model, const TruncatedBasis& basis, const AtomPlacement& placement,
    const SystemConfig& config, const DensityMatrix& rho0, std::span<const double> t_grid,
    const OdeTolerances& tol) {
  if (rho0.rows() != static_cast<Eigen::Index>(basis.dimension())) {
    throw DomainError("initial density matrix does not match the basis");
  }
  const MasterGenerator gen(model);
  const CVector e_state = collective_excited_state(basis);
  std::vector<TrajectoryPoint> out;
  out.reserve(t_grid.size());
  integrate_dopri5([&](double, const DensityMatrix& rho) { return gen.apply(rho); }, rho0, t_grid, tol,
                   [&](std::size_t, double t, const DensityMatrix& rho) {
                     const DensityMatrix sym = (rho + rho.adjoint()) / 2.0;
                     const auto obs = observables_from_density(sym, basis, placement, config);
                     out.push_back({t, collective_population(sym, e_state), obs.T, obs.R});
                   });
  return out;
}

namespace {

DensityMatrix unvec(const CVector& v, Eigen::Index d) {
  return Eigen::Map<const CMatrix>(v.data(), d, d);
}

// Connected component of vec index 0 (the ground population) in the
// undirected sparsity graph of l. Blocks the ground state cannot reach keep
// zero weight, which also removes the degeneracy of decoupled levels.
std::vector<Eigen::Index> ground_component(const OperatorMatrix& l) {
  const Eigen::Index n = l.rows();
  std::vector<std::vector<Eigen::Index>> adj(static_cast<std::size_t>(n));
  for (Eigen::Index col = 0; col < n; ++col) {
    for (OperatorMatrix::InnerIterator it(l, col); it; ++it) {
      if (it.row() == col) continue;
      adj[static_cast<std::size_t>(col)].push_back(it.row());
      adj[static_cast<std::size_t>(it.row())].push_back(col);
    }
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<Eigen::Index> stack{0}, out;
  seen[0] = true;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    out.push_back(v);
    for (auto w : adj[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        stack.push_back(w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

DensityMatrix steady_state_direct(const EffectiveModel& model, const SteadyStateOptions& options) {
  const Eigen::Index d = model.h_coh.rows();
  const OperatorMatrix l = liouvillian(model);
  const auto comp = ground_component(l);
  const auto m = static_cast<Eigen::Index>(comp.size());
  std::vector<Eigen::Index> local(static_cast<std::size_t>(l.rows()), -1);
  for (Eigen::Index i = 0; i < m; ++i) local[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])] = i;

  // The ground-population equation is redundant with the other population
  // equations; the trace condition takes its place (local row 0).
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (Eigen::Index c = 0; c < m; ++c) {
    const Eigen::Index col = comp[static_cast<std::size_t>(c)];
    for (OperatorMatrix::InnerIterator it(l, col); it; ++it) {
      const auto r = local[static_cast<std::size_t>(it.row())];
      if (r > 0) triplets.emplace_back(r, c, it.value());
    }
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto r = local[static_cast<std::size_t>(i * d + i)];
    if (r >= 0) triplets.emplace_back(0, r, 1.0);
  }
  OperatorMatrix a(m, m);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();

  CVector b = CVector::Zero(m);
  b(0) = 1.0;
  Eigen::SparseLU<OperatorMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) {
    throw SingularBlockError("liouvillian", "steady state is not unique: " + lu.lastErrorMessage());
  }
  CVector x = lu.solve(b);
  // One step of iterative refinement recovers digits lost to pivot growth.
  x += lu.solve(CVector(b - a * x));

  CVector full = CVector::Zero(l.rows());
  for (Eigen::Index i = 0; i < m; ++i) full(comp[static_cast<std::size_t>(i)]) = x(i);
  const double residual = (l * full).norm();
  if (!full.allFinite() || residual > options.residual_tolerance) {
    throw SingularBlockError("liouvillian",
                             "steady-state residual " + std::to_string(residual) + " exceeds tolerance");
  }
  DensityMatrix rho = unvec(full, d);
  return (rho + rho.adjoint()) / 2.0;
}

DensityMatrix steady_state_by_integration(const EffectiveModel& model, const SteadyStateOptions& options) {
  const Eigen::Index d = model.h_coh.rows();
  const MasterGenerator gen(model);
  DensityMatrix rho = DensityMatrix::Zero(d, d);
  rho(0, 0) = 1.0;
  double t = 0.0, chunk = 10.0;
  while (true) {
    const double target = std::min(t + chunk, options.fallback_max_time);
    const std::array<double, 2> times{t, target};
    integrate_dopri5([&](double, const DensityMatrix& r) { return gen.apply(r); }, rho,
                     std::span<const double>(times), OdeTolerances{1e-10, 1e-15},
                     [&](std::size_t i, double, const DensityMatrix& r) {
                       if (i == 1) rho = r;
                     });
    t = target;
    if (gen.apply(rho).norm() < options.residual_tolerance) break;
    if (t >= options.fallback_max_time) {
      throw IntegrationError(t, "master equation did not reach a steady state by t = " + std::to_string(t));
    }
    chunk *= 2.0;
  }
  return (rho + rho.adjoint()) / 2.0;
}

}  // namespace

DensityMatrix steady_state_master(const EffectiveModel& model, const SteadyStateOptions& options) {
  const Eigen::Index d = model.h_coh.rows();
  if (d * d <= options.direct_limit) return steady_state_direct(model, options);
  return steady_state_by_integration(model, options);
}

TruncatedBasis master_basis(const SystemConfig& config) {
  return TruncatedBasis(config.n_atoms, config.gamma_p > 0.0 ? Truncation::full : Truncation::one);
}

}  // namespace wgqed

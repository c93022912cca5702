#include "wgqed/steadystate.hpp"

#include <numeric>

#include <Eigen/SparseLU>

namespace wgqed {

CVector SteadyState::assemble(const TruncatedBasis& basis) const {
  CVector psi = CVector::Zero(static_cast<Eigen::Index>(basis.dimension()));
  psi(0) = c0;
  if (c1.size() > 0) {
    psi.segment(static_cast<Eigen::Index>(basis.sector_begin(1)), c1.size()) = c1;
  }
  if (c2.size() > 0) {
    psi.segment(static_cast<Eigen::Index>(basis.sector_begin(2)), c2.size()) = c2;
  }
  return psi;
}

OperatorMatrix sparse_block(const OperatorMatrix& m, std::size_t r0, std::size_t c0,
                            std::size_t rows, std::size_t cols) {
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (auto col = static_cast<Eigen::Index>(c0); col < static_cast<Eigen::Index>(c0 + cols); ++col) {
    for (OperatorMatrix::InnerIterator it(m, col); it; ++it) {
      const auto row = static_cast<std::size_t>(it.row());
      if (row >= r0 && row < r0 + rows) {
        triplets.emplace_back(static_cast<Eigen::Index>(row - r0),
                              static_cast<Eigen::Index>(static_cast<std::size_t>(col) - c0), it.value());
      }
    }
  }
  OperatorMatrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

namespace {

Eigen::Index find_root(std::vector<Eigen::Index>& parent, Eigen::Index i) {
  while (parent[static_cast<std::size_t>(i)] != i) {
    auto& p = parent[static_cast<std::size_t>(i)];
    p = parent[static_cast<std::size_t>(p)];
    i = p;
  }
  return i;
}

}  // namespace

CVector solve_reachable(const OperatorMatrix& a, const CVector& b, const std::string& block_name) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.size() != n) throw DomainError("dimension mismatch in block " + block_name);
  CVector x = CVector::Zero(n);
  if (n == 0) return x;

  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  for (Eigen::Index col = 0; col < n; ++col) {
    for (OperatorMatrix::InnerIterator it(a, col); it; ++it) {
      auto ra = find_root(parent, it.row());
      auto rb = find_root(parent, col);
      if (ra != rb) parent[static_cast<std::size_t>(ra)] = rb;
    }
  }
  std::vector<bool> driven(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (b(i) != Complex(0.0)) driven[static_cast<std::size_t>(find_root(parent, i))] = true;
  }
  std::vector<Eigen::Index> active;
  std::vector<Eigen::Index> local(static_cast<std::size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (driven[static_cast<std::size_t>(find_root(parent, i))]) {
      local[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(active.size());
      active.push_back(i);
    }
  }
  if (active.empty()) return x;

  const auto m = static_cast<Eigen::Index>(active.size());
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (Eigen::Index col : active) {
    for (OperatorMatrix::InnerIterator it(a, col); it; ++it) {
      triplets.emplace_back(local[static_cast<std::size_t>(it.row())],
                            local[static_cast<std::size_t>(col)], it.value());
    }
  }
  OperatorMatrix sub(m, m);
  sub.setFromTriplets(triplets.begin(), triplets.end());
  sub.makeCompressed();
  CVector rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) rhs(i) = b(active[static_cast<std::size_t>(i)]);

  Eigen::SparseLU<OperatorMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(sub);
  lu.factorize(sub);
  if (lu.info() != Eigen::Success) {
    throw SingularBlockError(block_name, "singular " + block_name + " block: " + lu.lastErrorMessage());
  }
  CVector sol = lu.solve(rhs);
  const double residual = (sub * sol - rhs).norm();
  if (!sol.allFinite() || residual > 1e-10 * rhs.norm()) {
    throw SingularBlockError(block_name, "singular " + block_name +
                                             " block: residual " + std::to_string(residual));
  }
  for (Eigen::Index i = 0; i < m; ++i) x(active[static_cast<std::size_t>(i)]) = sol(i);
  return x;
}

SteadyState solve_weak_drive(const EffectiveModel& model, const TruncatedBasis& basis) {
  if (basis.truncation() == Truncation::full && basis.atoms() > 2) {
    throw DomainError("weak-drive solve needs a one- or two-excitation basis");
  }
  SteadyState state;
  const auto b0 = basis.sector_begin(0);
  const auto b1 = basis.sector_begin(1), n1 = basis.sector_size(1);
  const auto b2 = basis.sector_begin(2), n2 = basis.sector_size(2);

  const OperatorMatrix h1 = sparse_block(model.h_non, b1, b1, n1, n1);
  const OperatorMatrix v10 = sparse_block(model.h_dri, b1, b0, n1, 1);
  CVector rhs1 = -(v10 * CVector::Constant(1, state.c0));
  state.c1 = solve_reachable(h1, rhs1, "one-excitation");

  if (basis.max_excitation() >= 2 && n2 > 0) {
    const OperatorMatrix h2 = sparse_block(model.h_non, b2, b2, n2, n2);
    const OperatorMatrix v21 = sparse_block(model.h_dri, b2, b1, n2, n1);
    CVector rhs2 = -(v21 * state.c1);
    state.c2 = solve_reachable(h2, rhs2, "two-excitation");
  }
  return state;
}

std::vector<CVector> evolve(const OperatorMatrix& hamiltonian, const CVector& psi0,
                            std::span<const double> tau_grid, const OdeTolerances& tol) {
  if (psi0.size() != hamiltonian.rows()) throw DomainError("state dimension does not match the basis");
  if (tau_grid.empty()) return {};
  if (tau_grid.front() < 0.0) throw DomainError("evolution times must be nonnegative");

  std::vector<double> times;
  const bool prepend = tau_grid.front() > 0.0;
  if (prepend) times.push_back(0.0);
  times.insert(times.end(), tau_grid.begin(), tau_grid.end());

  std::vector<CVector> out;
  out.reserve(tau_grid.size());
  auto rhs = [&](double, const CVector& y) -> CVector { return -kI * (hamiltonian * y); };
  integrate_dopri5(rhs, psi0, std::span<const double>(times), tol,
                   [&](std::size_t i, double, const CVector& y) {
                     if (prepend && i == 0) return;
                     out.push_back(y);
                   });
  return out;
}

std::vector<CVector> evolve(const EffectiveModel& model, const CVector& psi0,
                            std::span<const double> tau_grid, const OdeTolerances& tol) {
  const OperatorMatrix h = model.h_non + model.h_dri;
  return evolve(h, psi0, tau_grid, tol);
}

}  // namespace wgqed

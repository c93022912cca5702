#include "wgqed/scattering.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "wgqed/hamiltonian.hpp"

namespace wgqed {

namespace {

// One-excitation block at zero probe detuning, e-states first then s-states.
// The s-states are left out when the control field vanishes since nothing
// couples them to the probe.
CMatrix one_excitation_block(const SystemConfig& config, const AtomPlacement& placement,
                             const InhomogeneousShifts& shifts, bool with_s) {
  const int n = placement.size();
  const int dim = with_s ? 2 * n : n;
  CMatrix h = CMatrix::Zero(dim, dim);
  const double half = config.gamma_1d / 2.0;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      h(j, k) = -kI * half * std::exp(kI * pair_phase(config, placement, j, k));
    }
    h(j, j) += -kI * config.gamma_e / 2.0;
    if (with_s) {
      h(n + j, n + j) = config.delta_c + shifts[j];
      h(j, n + j) = -config.omega_c;
      h(n + j, j) = -config.omega_c;
    }
  }
  return h;
}

// Solves (H - shift I) y = b for upper Hessenberg H with adjacent-row pivoting.
CVector hessenberg_solve(const CMatrix& hess, double shift, const CVector& b) {
  const Eigen::Index n = hess.rows();
  CMatrix a = hess;
  a.diagonal().array() -= shift;
  CVector y = b;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (std::abs(a(k + 1, k)) > std::abs(a(k, k))) {
      a.row(k).tail(n - k).swap(a.row(k + 1).tail(n - k));
      std::swap(y(k), y(k + 1));
    }
    if (a(k, k) == Complex(0.0)) throw SingularBlockError("one-excitation", "singular one-excitation block");
    const Complex l = a(k + 1, k) / a(k, k);
    a.row(k + 1).tail(n - k - 1) -= l * a.row(k).tail(n - k - 1);
    y(k + 1) -= l * y(k);
  }
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    if (a(k, k) == Complex(0.0)) throw SingularBlockError("one-excitation", "singular one-excitation block");
    Complex acc = y(k);
    for (Eigen::Index c = k + 1; c < n; ++c) acc -= a(k, c) * y(c);
    y(k) = acc / a(k, k);
  }
  return y;
}

struct PhaseVectors {
  CVector drive, forward, backward;
};

PhaseVectors phase_vectors(const SystemConfig& config, const AtomPlacement& placement, Eigen::Index dim) {
  const int n = placement.size();
  PhaseVectors p{CVector::Zero(dim), CVector::Zero(dim), CVector::Zero(dim)};
  const double coupling = std::sqrt(config.gamma_1d / 2.0);
  for (int j = 0; j < n; ++j) {
    const double theta = config.kd * placement[j];
    p.drive(j) = -kDriveSign * coupling * std::exp(kI * theta);
    p.forward(j) = std::exp(-kI * theta);
    p.backward(j) = std::exp(kI * theta);
  }
  return p;
}

TransportAmplitudes combine(double coupling, Complex forward_sum, Complex backward_sum) {
  return {1.0 + kI * coupling * forward_sum, kI * coupling * backward_sum};
}

}  // namespace

LinearScatterer::LinearScatterer(const SystemConfig& config, const AtomPlacement& placement,
                                 const InhomogeneousShifts& shifts)
    : n_(placement.size()), coupling_(std::sqrt(config.gamma_1d / 2.0)) {
  if (shifts.size() != n_) throw DomainError("shift count does not match atom count");
  if (config.gamma_1d == 0.0 || n_ == 0) {
    decoupled_ = true;
    return;
  }
  const CMatrix h0 = one_excitation_block(config, placement, shifts, config.omega_c != 0.0);
  const auto p = phase_vectors(config, placement, h0.rows());
  Eigen::HessenbergDecomposition<CMatrix> hd(h0);
  hessenberg_ = hd.matrixH();
  const CMatrix q = hd.matrixQ();
  source_ = q.adjoint() * p.drive;
  transmit_ = q.transpose() * p.forward;
  reflect_ = q.transpose() * p.backward;
}

TransportAmplitudes LinearScatterer::at(double delta) const {
  if (decoupled_) return {};
  const CVector y = hessenberg_solve(hessenberg_, delta, source_);
  return combine(coupling_, (transmit_.transpose() * y)(0), (reflect_.transpose() * y)(0));
}

std::vector<TransportAmplitudes> LinearScatterer::at(std::span<const double> deltas) const {
  std::vector<TransportAmplitudes> out;
  out.reserve(deltas.size());
  for (double d : deltas) out.push_back(at(d));
  return out;
}

TransportAmplitudes scatter_dense(const SystemConfig& config, const AtomPlacement& placement,
                                  const InhomogeneousShifts& shifts, double delta) {
  if (shifts.size() != placement.size()) throw DomainError("shift count does not match atom count");
  if (config.gamma_1d == 0.0) return {};
  CMatrix h = one_excitation_block(config, placement, shifts, true);
  h.diagonal().array() -= delta;
  const auto p = phase_vectors(config, placement, h.rows());
  const CVector x = h.fullPivLu().solve(p.drive);
  return combine(std::sqrt(config.gamma_1d / 2.0), (p.forward.transpose() * x)(0),
                 (p.backward.transpose() * x)(0));
}

}  // namespace wgqed

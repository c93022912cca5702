#include "wgqed/hamiltonian.hpp"

#include <cmath>
#include <cstdlib>

namespace wgqed {

namespace {

using Triplets = std::vector<Eigen::Triplet<Complex>>;

void check_sizes(const SystemConfig& config, const AtomPlacement& placement,
                 const TruncatedBasis& basis) {
  if (placement.size() != basis.atoms() || config.n_atoms != basis.atoms()) {
    throw DomainError("placement has " + std::to_string(placement.size()) +
                      " atoms but the basis was built for " + std::to_string(basis.atoms()));
  }
}

OperatorMatrix from_triplets(const TruncatedBasis& basis, const Triplets& triplets) {
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  OperatorMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  prune_zeros(m);
  return m;
}

// Single-atom part shared by h_non and h_coh:
//   -sum_j [ (delta + i*loss/2) S_ee + (delta - delta_c - shift_j) S_ss + omega_c (S_es + S_se) ]
void add_single_atom_terms(const SystemConfig& config, const InhomogeneousShifts& shifts,
                           const TruncatedBasis& basis, Complex excited_energy, Triplets& out) {
  Configuration target;
  for (std::size_t col = 0; col < basis.dimension(); ++col) {
    const auto& c = basis.config(col);
    Complex diag = 0.0;
    for (int j = 0; j < basis.atoms(); ++j) {
      const auto jj = static_cast<std::size_t>(j);
      if (c[jj] == Level::e) {
        diag += excited_energy;
      } else if (c[jj] == Level::s) {
        diag += -(config.delta - config.delta_c - shifts[j]);
      } else {
        continue;
      }
      target = c;
      target[jj] = (c[jj] == Level::e) ? Level::s : Level::e;
      if (auto row = basis.index_of(target)) {
        out.emplace_back(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col),
                         -config.omega_c);
      }
    }
    out.emplace_back(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(col), diag);
  }
}

// sum_{j,k} kernel(j, k) S_eg^j S_ge^k, enumerated directly: an excitation
// hops from atom k (in e) to atom j (in g); j == k is diagonal.
template <class Kernel>
void add_exchange_terms(const TruncatedBasis& basis, Kernel kernel, Triplets& out) {
  Configuration target;
  const int n = basis.atoms();
  for (std::size_t col = 0; col < basis.dimension(); ++col) {
    const auto& c = basis.config(col);
    for (int k = 0; k < n; ++k) {
      if (c[static_cast<std::size_t>(k)] != Level::e) continue;
      out.emplace_back(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(col), kernel(k, k));
      for (int j = 0; j < n; ++j) {
        if (c[static_cast<std::size_t>(j)] != Level::g) continue;
        target = c;
        target[static_cast<std::size_t>(k)] = Level::g;
        target[static_cast<std::size_t>(j)] = Level::e;
        if (auto row = basis.index_of(target)) {
          out.emplace_back(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col),
                           kernel(j, k));
        }
      }
    }
  }
}

}  // namespace

void prune_zeros(OperatorMatrix& m) {
  m.prune([](Eigen::Index, Eigen::Index, const Complex& v) { return v != Complex(0.0); });
}

std::vector<const JumpOperator*> Dissipators::all() const {
  std::vector<const JumpOperator*> out;
  for (const auto* group : {&collective, &free_space, &relaxation, &dephasing}) {
    for (const auto& jump : *group) out.push_back(&jump);
  }
  return out;
}

double pair_phase(const SystemConfig& config, const AtomPlacement& placement, int j, int k) {
  return config.kd * static_cast<double>(std::abs(placement[j] - placement[k]));
}

RMatrix collective_kernel(const SystemConfig& config, const AtomPlacement& placement) {
  const int n = placement.size();
  RMatrix kernel(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      kernel(j, k) = config.gamma_1d * std::cos(pair_phase(config, placement, j, k));
    }
  }
  return kernel;
}

OperatorMatrix build_nonhermitian(const SystemConfig& config, const AtomPlacement& placement,
                                  const InhomogeneousShifts& shifts, const TruncatedBasis& basis) {
  check_sizes(config, placement, basis);
  if (shifts.size() != basis.atoms()) throw DomainError("shift count does not match atom count");
  Triplets triplets;
  add_single_atom_terms(config, shifts, basis, -(config.delta + kI * config.gamma_e / 2.0), triplets);
  const Complex prefactor = -kI * config.gamma_1d / 2.0;
  add_exchange_terms(
      basis,
      [&](int j, int k) { return prefactor * std::exp(kI * pair_phase(config, placement, j, k)); },
      triplets);
  return from_triplets(basis, triplets);
}

OperatorMatrix build_drive(const SystemConfig& config, const AtomPlacement& placement,
                           const TruncatedBasis& basis) {
  check_sizes(config, placement, basis);
  const double amplitude = kDriveSign * config.probe_rabi();
  Triplets triplets;
  Configuration target;
  for (std::size_t col = 0; col < basis.dimension(); ++col) {
    const auto& c = basis.config(col);
    for (int j = 0; j < basis.atoms(); ++j) {
      const auto jj = static_cast<std::size_t>(j);
      const double theta = config.kd * placement[j];
      Complex value;
      if (c[jj] == Level::g) {
        target = c;
        target[jj] = Level::e;
        value = amplitude * std::exp(kI * theta);
      } else if (c[jj] == Level::e) {
        target = c;
        target[jj] = Level::g;
        value = amplitude * std::exp(-kI * theta);
      } else {
        continue;
      }
      if (auto row = basis.index_of(target)) {
        triplets.emplace_back(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col), value);
      }
    }
  }
  return from_triplets(basis, triplets);
}

MasterParts build_master_parts(const SystemConfig& config, const AtomPlacement& placement,
                               const InhomogeneousShifts& shifts, const TruncatedBasis& basis) {
  check_sizes(config, placement, basis);
  if (shifts.size() != basis.atoms()) throw DomainError("shift count does not match atom count");
  MasterParts parts;

  Triplets triplets;
  add_single_atom_terms(config, shifts, basis, Complex(-config.delta), triplets);
  const double half = config.gamma_1d / 2.0;
  add_exchange_terms(
      basis,
      [&](int j, int k) { return Complex(half * std::sin(pair_phase(config, placement, j, k))); },
      triplets);
  parts.h_coh = from_triplets(basis, triplets);

  const int n = basis.atoms();
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  std::vector<OperatorMatrix> lower(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) lower[static_cast<std::size_t>(j)] = transition_operator(basis, j, Level::g, Level::e);

  auto& d = parts.dissipators;
  // cos(kd (x_j - x_k)) = cos(kd x_j) cos(kd x_k) + sin(kd x_j) sin(kd x_k):
  // the collective kernel is a sum of two rank-one channels.
  if (config.gamma_1d > 0.0) {
    OperatorMatrix l_cos(dim, dim), l_sin(dim, dim);
    for (int j = 0; j < n; ++j) {
      const double theta = config.kd * placement[j];
      l_cos += std::cos(theta) * lower[static_cast<std::size_t>(j)];
      l_sin += std::sin(theta) * lower[static_cast<std::size_t>(j)];
    }
    prune_zeros(l_cos);
    prune_zeros(l_sin);
    d.collective.push_back({"waveguide_cos", config.gamma_1d, std::move(l_cos)});
    d.collective.push_back({"waveguide_sin", config.gamma_1d, std::move(l_sin)});
  }
  for (int j = 0; j < n; ++j) {
    const auto tag = std::to_string(j);
    if (config.gamma_e > 0.0) {
      d.free_space.push_back({"free_space_" + tag, config.gamma_e, lower[static_cast<std::size_t>(j)]});
    }
    if (config.gamma_p > 0.0) {
      d.relaxation.push_back({"relax_s_to_g_" + tag, config.gamma_p, transition_operator(basis, j, Level::g, Level::s)});
      d.relaxation.push_back({"relax_g_to_s_" + tag, config.gamma_p, transition_operator(basis, j, Level::s, Level::g)});
    }
    if (config.gamma_d > 0.0) {
      d.dephasing.push_back({"dephase_s_" + tag, config.gamma_d, transition_operator(basis, j, Level::s, Level::s)});
      d.dephasing.push_back({"dephase_g_" + tag, config.gamma_d, transition_operator(basis, j, Level::g, Level::g)});
    }
  }
  return parts;
}

EffectiveModel build_model(const SystemConfig& config, const AtomPlacement& placement,
                           const InhomogeneousShifts& shifts, const TruncatedBasis& basis) {
  EffectiveModel model;
  model.h_non = build_nonhermitian(config, placement, shifts, basis);
  model.h_dri = build_drive(config, placement, basis);
  auto parts = build_master_parts(config, placement, shifts, basis);
  model.h_coh = std::move(parts.h_coh);
  model.dissipators = std::move(parts.dissipators);
  return model;
}

}  // namespace wgqed

#include "wgqed/basis.hpp"

#include <cmath>

namespace wgqed {

int excitation_count(const Configuration& config) {
  int count = 0;
  for (auto level : config) count += (level != Level::g);
  return count;
}

namespace {

// Appends, in lexicographic order, every configuration of atoms
// [pos, n) carrying exactly `remaining` excitations.
void enumerate_sector(Configuration& current, std::size_t pos, int remaining,
                      std::vector<Configuration>& out) {
  const auto n = current.size();
  if (pos == n) {
    if (remaining == 0) out.push_back(current);
    return;
  }
  if (static_cast<int>(n - pos) < remaining) return;
  for (auto level : {Level::g, Level::e, Level::s}) {
    const int cost = (level != Level::g);
    if (cost > remaining) continue;
    current[pos] = level;
    enumerate_sector(current, pos + 1, remaining - cost, out);
  }
  current[pos] = Level::g;
}

int max_excitation_for(int n, Truncation t) {
  switch (t) {
    case Truncation::one: return std::min(n, 1);
    case Truncation::two: return std::min(n, 2);
    case Truncation::full: return n;
  }
  return 0;
}

}  // namespace

TruncatedBasis::TruncatedBasis(int n_atoms, Truncation truncation)
    : n_atoms_(n_atoms), truncation_(truncation) {
  if (n_atoms < 1) throw DomainError("basis needs at least one atom");
  if (truncation == Truncation::full && n_atoms > kMaxFullAtoms) {
    throw DomainError("full 3^n space refused for n = " + std::to_string(n_atoms) +
                      " (limit " + std::to_string(kMaxFullAtoms) + ")");
  }
  max_excitation_ = max_excitation_for(n_atoms, truncation);

  Configuration scratch(static_cast<std::size_t>(n_atoms), Level::g);
  sector_offsets_.push_back(0);
  for (int m = 0; m <= max_excitation_; ++m) {
    enumerate_sector(scratch, 0, m, configs_);
    sector_offsets_.push_back(configs_.size());
  }
  excitation_.reserve(configs_.size());
  for (std::size_t i = 0; i < configs_.size(); ++i) {
    excitation_.push_back(excitation_count(configs_[i]));
    index_.emplace(configs_[i], i);
  }
}

std::optional<std::size_t> TruncatedBasis::index_of(const Configuration& config) const {
  auto it = index_.find(config);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t TruncatedBasis::sector_begin(int m) const {
  if (m < 0) return 0;
  if (m > max_excitation_) return configs_.size();
  return sector_offsets_[static_cast<std::size_t>(m)];
}

std::size_t TruncatedBasis::sector_end(int m) const {
  if (m < 0) return 0;
  if (m > max_excitation_) return configs_.size();
  return sector_offsets_[static_cast<std::size_t>(m) + 1];
}

std::size_t TruncatedBasis::single(int j, Level level) const {
  Configuration c(static_cast<std::size_t>(n_atoms_), Level::g);
  c[static_cast<std::size_t>(j)] = level;
  auto idx = index_of(c);
  if (!idx) throw DomainError("single-excitation configuration outside the basis");
  return *idx;
}

std::size_t basis_dimension(int n, Truncation t) {
  const auto nn = static_cast<std::size_t>(n);
  switch (t) {
    case Truncation::one: return 1 + 2 * nn;
    case Truncation::two:
      return nn == 1 ? 3 : 1 + 2 * nn + 2 * nn * (nn - 1);
    case Truncation::full: {
      std::size_t d = 1;
      for (int i = 0; i < n; ++i) d *= 3;
      return d;
    }
  }
  return 0;
}

OperatorMatrix transition_operator(const TruncatedBasis& basis, int j, Level a, Level b) {
  if (j < 0 || j >= basis.atoms()) throw DomainError("atom index out of range");
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  std::vector<Eigen::Triplet<Complex>> triplets;
  const auto jj = static_cast<std::size_t>(j);
  Configuration target;
  for (std::size_t col = 0; col < basis.dimension(); ++col) {
    const auto& c = basis.config(col);
    if (c[jj] != b) continue;
    target = c;
    target[jj] = a;
    if (auto row = basis.index_of(target)) {
      triplets.emplace_back(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col), 1.0);
    }
  }
  OperatorMatrix op(dim, dim);
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

CVector collective_excited_state(const TruncatedBasis& basis) {
  if (basis.max_excitation() < 1) throw DomainError("basis has no single-excitation sector");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(basis.dimension()));
  const double amp = 1.0 / std::sqrt(static_cast<double>(basis.atoms()));
  for (int j = 0; j < basis.atoms(); ++j) {
    v(static_cast<Eigen::Index>(basis.single(j, Level::e))) = amp;
  }
  return v;
}

}  // namespace wgqed

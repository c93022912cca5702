#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "wgqed/types.hpp"

namespace wgqed {

enum class Level : std::uint8_t { g = 0, e = 1, s = 2 };

/// Highest excitation number kept. An atom counts as excited when it is not
/// in g, so the control field conserves the count.
enum class Truncation { one, two, full };

using Configuration = std::vector<Level>;

int excitation_count(const Configuration& config);

/// Atomic configurations with bounded excitation number, ordered by
/// ascending excitation number and then lexicographically (g < e < s,
/// atom 0 most significant). configs[0] is the all-ground configuration.
class TruncatedBasis {
 public:
  static constexpr int kMaxFullAtoms = 12;

  /// Throws DomainError for n < 1 or a full-space request with n > 12.
  TruncatedBasis(int n_atoms, Truncation truncation);

  int atoms() const { return n_atoms_; }
  Truncation truncation() const { return truncation_; }
  int max_excitation() const { return max_excitation_; }
  std::size_t dimension() const { return configs_.size(); }

  const Configuration& config(std::size_t i) const { return configs_[i]; }
  int excitation(std::size_t i) const { return excitation_[i]; }
  std::optional<std::size_t> index_of(const Configuration& config) const;

  /// Half-open index range [begin, end) of the configurations with exactly m
  /// excitations; empty when m exceeds the truncation.
  std::size_t sector_begin(int m) const;
  std::size_t sector_end(int m) const;
  std::size_t sector_size(int m) const { return sector_end(m) - sector_begin(m); }

  /// Index of the configuration with atom j in `level` and all others in g.
  std::size_t single(int j, Level level) const;

  bool operator==(const TruncatedBasis& other) const {
    return n_atoms_ == other.n_atoms_ && truncation_ == other.truncation_;
  }

 private:
  int n_atoms_;
  Truncation truncation_;
  int max_excitation_;
  std::vector<Configuration> configs_;
  std::vector<int> excitation_;
  std::vector<std::size_t> sector_offsets_;
  std::map<Configuration, std::size_t> index_;
};

/// Closed-form dimension: 1 + 2n, 1 + 2n + 2n(n - 1) or 3^n.
std::size_t basis_dimension(int n_atoms, Truncation truncation);

/// |a><b| on atom j, identity on the others, projected onto the basis.
/// Matrix elements whose target configuration is outside the truncation are
/// dropped.
OperatorMatrix transition_operator(const TruncatedBasis& basis, int j, Level a, Level b);

/// |E> = n^{-1/2} sum_j |e_j>.
CVector collective_excited_state(const TruncatedBasis& basis);

}  // namespace wgqed

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wgqed/types.hpp"

namespace wgqed {

// Frequencies and rates are in units of the free-space decay rate gamma_e,
// times in units of 1/gamma_e. The wave speed is absorbed into probe_amp.
struct SystemConfig {
  double delta = 0.0;      // probe detuning omega_in - omega_a
  double delta_c = 0.0;    // control detuning omega_c - omega_es
  double omega_c = 0.0;    // control Rabi frequency
  double gamma_1d = 0.0;   // decay rate into the guided mode
  double gamma_e = 1.0;    // decay rate into free space
  double gamma_p = 0.0;    // g <-> s population relaxation
  double gamma_d = 0.0;    // g-s dephasing
  double probe_amp = 0.0;  // input amplitude
  double kd = 0.0;         // lattice phase k_in * d
  int n_atoms = 1;
  int n_sites = 1;
  double sigma_ih = 0.0;   // std. dev. of the metastable-level shifts

  double gamma_total() const { return gamma_p + gamma_d; }
  /// Drive amplitude sqrt(gamma_1d / 2) * probe_amp seen by each atom.
  double probe_rabi() const;

  /// Ten atoms on 200 sites, gamma_1d = 2, omega_c = 2, kd = pi/2 and
  /// probe_amp = 1e-4 * sqrt(gamma_1d / 2).
  static SystemConfig reference();

  /// Default probe amplitude 1e-4 * sqrt(gamma_1d / 2).
  static double default_probe(double gamma_1d);

  bool operator==(const SystemConfig&) const = default;
};

inline constexpr double kWeakProbeThreshold = 1e-2;

struct Diagnostic {
  enum class Severity { warning, error };
  Severity severity;
  std::string key;
  std::string message;
};

/// Checks every invariant of the configuration. An empty result means the
/// configuration is valid and the probe is weak.
std::vector<Diagnostic> validate(const SystemConfig& config);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

// Flat "key = value" text format, one key per field, '#' starts a comment.
// sigma_ih, gamma_p and gamma_d may be omitted (default 0).
SystemConfig parse_config(std::istream& in);
SystemConfig parse_config_string(const std::string& text);
SystemConfig load_config(const std::string& path);
std::string format_config(const SystemConfig& config);

/// Occupied lattice sites, strictly increasing, one atom per site.
class AtomPlacement {
 public:
  AtomPlacement() = default;
  /// Throws ConfigError unless the sites are strictly increasing and >= 0.
  explicit AtomPlacement(std::vector<int> sites);

  /// Sites 0, 1, ..., n - 1.
  static AtomPlacement contiguous(int n);

  const std::vector<int>& sites() const { return sites_; }
  int size() const { return static_cast<int>(sites_.size()); }
  int operator[](int j) const { return sites_[static_cast<std::size_t>(j)]; }

  /// Same placement with every site moved by `offset`.
  AtomPlacement shifted(int offset) const;

  bool operator==(const AtomPlacement&) const = default;

 private:
  std::vector<int> sites_;
};

/// Per-atom shift of the metastable level.
struct InhomogeneousShifts {
  std::vector<double> values;

  static InhomogeneousShifts none(int n) {
    return {std::vector<double>(static_cast<std::size_t>(n), 0.0)};
  }
  double operator[](int j) const { return values[static_cast<std::size_t>(j)]; }
  int size() const { return static_cast<int>(values.size()); }
};

}  // namespace wgqed

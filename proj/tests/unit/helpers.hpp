#pragma once

#include <cmath>
#include <numbers>

#include "wgqed/model.hpp"

namespace testing {

inline constexpr double kPi = std::numbers::pi;

// Reference defaults on a short lattice: kd = pi/2, gamma_1d = 2.
inline wgqed::SystemConfig small_config(int n, double omega_c = 2.0) {
  auto c = wgqed::SystemConfig::reference();
  c.n_atoms = n;
  c.n_sites = std::max(n, 3 * n);
  c.omega_c = omega_c;
  return c;
}

}  // namespace testing

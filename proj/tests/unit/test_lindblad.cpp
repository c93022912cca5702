#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "wgqed/lindblad.hpp"
#include "wgqed/scattering.hpp"

using namespace wgqed;

namespace {

DensityMatrix random_density(Eigen::Index d, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  CMatrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = Complex(nd(rng), nd(rng));
  CMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

CVector vec(const CMatrix& m) { return Eigen::Map<const CVector>(m.data(), m.size()); }

}  // namespace

TEST_CASE("undriven ground state is stationary") {
  auto c = testing::small_config(2);
  c.probe_amp = 0.0;
  const TruncatedBasis b(2, Truncation::full);
  const auto model = build_master_model(c, AtomPlacement({0, 1}), InhomogeneousShifts::none(2), b);
  CHECK(master_rhs(model, ground_density(b)).norm() == 0.0);
}

TEST_CASE("population relaxation pumps the ground state into s") {
  auto c = testing::small_config(2);
  c.probe_amp = 0.0;
  c.gamma_p = 0.3;
  const TruncatedBasis b(2, Truncation::full);
  const auto model = build_master_model(c, AtomPlacement({0, 1}), InhomogeneousShifts::none(2), b);
  const DensityMatrix d = master_rhs(model, ground_density(b));
  CHECK(d(0, 0).real() == doctest::Approx(-2 * c.gamma_p));
  for (int j = 0; j < 2; ++j) {
    const auto s = static_cast<Eigen::Index>(b.single(j, Level::s));
    CHECK(d(s, s).real() == doctest::Approx(c.gamma_p));
  }
  CHECK_THROWS_AS(build_master_model(c, AtomPlacement({0, 1}), InhomogeneousShifts::none(2),
                                     TruncatedBasis(2, Truncation::one)),
                  DomainError);
}

TEST_CASE("generator is trace preserving and matches the superoperator") {
  auto c = testing::small_config(2, 1.3);
  c.probe_amp = 0.05;
  c.gamma_p = 0.2;
  c.gamma_d = 0.4;
  c.delta = 0.3;
  const TruncatedBasis b(2, Truncation::full);
  const auto model = build_master_model(c, AtomPlacement({2, 5}), InhomogeneousShifts{{0.1, -0.2}}, b);
  const OperatorMatrix l = liouvillian(model);
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const DensityMatrix rho = random_density(9, seed);
    const DensityMatrix d = master_rhs(model, rho);
    CHECK(std::abs(d.trace()) < 1e-12);
    CHECK((d - d.adjoint()).norm() < 1e-12);
    CHECK((vec(d) - l * vec(rho)).norm() < 1e-12);
  }
}

TEST_CASE("weak-probe master equation reproduces the non-Hermitian spectrum") {
  for (int n = 1; n <= 3; ++n) {
    auto c = testing::small_config(n, 2.0);
    const TruncatedBasis b(n, Truncation::full);
    std::vector<int> sites;
    for (int j = 0; j < n; ++j) sites.push_back(3 * j + j * j);
    const AtomPlacement p(sites);
    const LinearScatterer lin(c, p, InhomogeneousShifts::none(n));
    for (double delta = -4.0; delta <= 4.0; delta += 0.8) {
      c.delta = delta;
      const auto model = build_master_model(c, p, InhomogeneousShifts::none(n), b);
      const auto obs = observables_from_density(steady_state_master(model), b, p, c);
      const auto ref = lin.at(delta);
      CHECK(std::abs(obs.T - ref.transmission()) < 1e-6);
      CHECK(std::abs(obs.R - ref.reflection()) < 1e-6);
    }
  }
}

TEST_CASE("one-excitation master basis agrees with the full space under dephasing") {
  auto c = testing::small_config(3, 2.0);
  c.gamma_d = 1.0;
  const AtomPlacement p({0, 1, 5});
  const auto shifts = InhomogeneousShifts::none(3);
  for (double delta : {0.0, 0.7, -1.9}) {
    c.delta = delta;
    const TruncatedBasis full(3, Truncation::full), one = master_basis(c);
    CHECK(one.truncation() == Truncation::one);
    const auto rf = steady_state_master(build_master_model(c, p, shifts, full));
    const auto r1 = steady_state_master(build_master_model(c, p, shifts, one));
    const auto of = observables_from_density(rf, full, p, c);
    const auto o1 = observables_from_density(r1, one, p, c);
    // the neglected two-excitation terms are O(probe_amp^2) relative
    CHECK(o1.T == doctest::Approx(of.T).epsilon(1e-6));
    CHECK(o1.R == doctest::Approx(of.R).epsilon(1e-6));
    CHECK(collective_population(r1, collective_excited_state(one)) ==
          doctest::Approx(collective_population(rf, collective_excited_state(full))).epsilon(1e-7));
  }
}

TEST_CASE("decoupled metastable levels: steady state is the ground projector") {
  auto c = testing::small_config(2, 0.0);
  c.probe_amp = 0.0;
  c.gamma_d = 0.5;
  const TruncatedBasis b(2, Truncation::full);
  const auto rho = steady_state_master(build_master_model(c, AtomPlacement({0, 4}), InhomogeneousShifts::none(2), b));
  CHECK((rho - ground_density(b)).norm() < 1e-12);
}

TEST_CASE("steady-state density matrix invariants with relaxation") {
  auto c = testing::small_config(2, 1.0);
  c.probe_amp = 0.02;
  c.gamma_p = 0.3;
  c.gamma_d = 0.2;
  const TruncatedBasis b(2, Truncation::full);
  const auto rho = steady_state_master(build_master_model(c, AtomPlacement({1, 2}), InhomogeneousShifts::none(2), b));
  const auto chk = check_density(rho);
  CHECK(chk.hermiticity < 1e-9);
  CHECK(chk.trace_error < 1e-9);
  CHECK(chk.min_eigenvalue > -1e-8);
}

TEST_CASE("integration fallback reaches the direct steady state") {
  auto c = testing::small_config(2, 2.0);
  c.gamma_d = 0.5;
  c.delta = 0.4;
  const TruncatedBasis b(2, Truncation::one);
  const auto model = build_master_model(c, AtomPlacement({0, 3}), InhomogeneousShifts::none(2), b);
  const auto direct = steady_state_master(model);
  SteadyStateOptions opt;
  opt.direct_limit = 0;
  opt.residual_tolerance = 1e-13;
  const auto integrated = steady_state_master(model, opt);
  const auto od = observables_from_density(direct, b, AtomPlacement({0, 3}), c);
  const auto oi = observables_from_density(integrated, b, AtomPlacement({0, 3}), c);
  CHECK(oi.T == doctest::Approx(od.T).epsilon(1e-5));
  CHECK(oi.R == doctest::Approx(od.R).epsilon(1e-5));
}

TEST_CASE("trajectories keep trace, Hermiticity and positivity") {
  auto c = testing::small_config(2, 2.0);
  c.probe_amp = 0.05;
  c.gamma_p = 0.2;
  c.gamma_d = 0.3;
  const TruncatedBasis b(2, Truncation::full);
  const auto model = build_master_model(c, AtomPlacement({0, 1}), InhomogeneousShifts::none(2), b);
  std::vector<double> t;
  for (int k = 0; k <= 20; ++k) t.push_back(0.5 * k);
  for (const auto& rho : evolve_master(model, ground_density(b), t)) {
    const auto chk = check_density(rho);
    CHECK(chk.hermiticity < 1e-9);
    CHECK(chk.trace_error < 1e-9);
    CHECK(chk.min_eigenvalue > -1e-8);
  }
}

TEST_CASE("undriven ground trajectory stays constant") {
  auto c = testing::small_config(2, 2.0);
  c.probe_amp = 0.0;
  c.gamma_d = 0.3;
  const TruncatedBasis b(2, Truncation::full);
  const auto model = build_master_model(c, AtomPlacement({0, 1}), InhomogeneousShifts::none(2), b);
  const std::vector<double> t{0.0, 1.0, 5.0};
  for (const auto& rho : evolve_master(model, ground_density(b), t)) CHECK((rho - ground_density(b)).norm() == 0.0);
}

namespace {

std::vector<TrajectoryPoint> collective_trajectory(const AtomPlacement& p, double gamma_d) {
  std::vector<double> t;
  for (int k = 0; k <= 400; ++k) t.push_back(0.1 * k);
  auto c = testing::small_config(5, 2.0);
  c.n_sites = 200;
  c.gamma_d = gamma_d;
  const auto b = master_basis(c);
  const auto model = build_master_model(c, p, InhomogeneousShifts::none(5), b);
  return evolve_master_observables(model, b, p, c, ground_density(b), t);
}

double peak_of(const std::vector<TrajectoryPoint>& traj) {
  double peak = 0.0;
  for (const auto& pt : traj) peak = std::max(peak, pt.P_E);
  return peak;
}

// Last time at which P_E is more than 5% of its peak away from the final value.
double settle_time(const std::vector<TrajectoryPoint>& traj) {
  const double peak = peak_of(traj), final_value = traj.back().P_E;
  double settle = 0.0;
  for (const auto& pt : traj) {
    if (std::abs(pt.P_E - final_value) > 0.05 * peak) settle = pt.t;
  }
  return settle;
}

}  // namespace

TEST_CASE("collective excitation: initial peak, then a steady value that grows with dephasing") {
  const AtomPlacement p({3, 10, 46, 83, 175});
  double previous_final = -1.0;
  for (double gd : {0.0, 0.5, 1.0, 1.5}) {
    const auto traj = collective_trajectory(p, gd);
    const double final_value = traj.back().P_E;
    if (gd <= 0.5) CHECK(peak_of(traj) > 1.5 * final_value);
    CHECK(final_value > previous_final);
    previous_final = final_value;
  }
  // without dephasing the ensemble ends in the dark state
  CHECK(collective_trajectory(p, 0.0).back().P_E < 1e-15);
}

TEST_CASE("settling time shrinks with dephasing for a clustered placement") {
  const AtomPlacement p({16, 25, 37, 82, 126});
  double previous = 1e9;
  for (double gd : {0.0, 0.5, 1.0, 1.5}) {
    const double settle = settle_time(collective_trajectory(p, gd));
    CHECK(settle < previous);
    previous = settle;
  }
}

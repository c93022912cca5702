// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wgqed/correlation.hpp"
#include "wgqed/disorder.hpp"
#include "wgqed/lindblad.hpp"
#include "wgqed/observables.hpp"
#include "wgqed/pulse.hpp"
#include "wgqed/scattering.hpp"
#include "wgqed/steadystate.hpp"

using namespace wgqed;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

struct Criterion {
  int id;
  const char* name;
  std::function<void(Outcome&)> run;
};

constexpr std::uint64_t kSeed = 20240611;

std::vector<double> linspace(double lo, double hi, double step) {
  std::vector<double> out;
  const auto count = static_cast<long>(std::lround((hi - lo) / step));
  for (long k = 0; k <= count; ++k) {
    const double x = lo + static_cast<double>(k) * step;
    out.push_back(std::abs(x) < 1e-12 ? 0.0 : x);
  }
  return out;
}

SystemConfig with_coupling(SystemConfig c, double gamma_1d) {
  c.gamma_1d = gamma_1d;
  c.probe_amp = SystemConfig::default_probe(gamma_1d);
  return c;
}

// Weak-drive steady state and output amplitudes, one excitation.
TransportAmplitudes weak_drive_amplitudes(const SystemConfig& c, const AtomPlacement& p,
                                          const InhomogeneousShifts& shifts) {
  const TruncatedBasis b(c.n_atoms, Truncation::one);
  const auto model = build_model(c, p, shifts, b);
  return output_amplitudes(solve_weak_drive(model, b), b, p, c);
}

// Coefficient of determination of an ordinary least-squares line.
double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy * sxy / (sxx * syy);
}

int local_extrema(const std::vector<double>& tau, const std::vector<double>& v, double tau_max) {
  int count = 0;
  for (std::size_t k = 1; k + 1 < v.size() && tau[k] <= tau_max; ++k) {
    const double a = v[k] - v[k - 1], b = v[k + 1] - v[k];
    if ((a > 0 && b < 0) || (a < 0 && b > 0)) ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------

void single_atom_reflection(Outcome& o) {
  SystemConfig c;
  c.n_atoms = c.n_sites = 1;
  c.gamma_e = 0.0;
  c.gamma_1d = 2.0;
  c.probe_amp = SystemConfig::default_probe(c.gamma_1d);
  const AtomPlacement p({0});
  const auto a = weak_drive_amplitudes(c, p, InhomogeneousShifts::none(1));
  const auto fast = LinearScatterer(c, p, InhomogeneousShifts::none(1)).at(0.0);
  o.detail << "T = " << a.transmission() << ", R = " << a.reflection();
  o.require(a.transmission() < 1e-9 && std::abs(a.reflection() - 1.0) < 1e-9, "T = 0, R = 1 within 1e-9");
  o.require(fast.transmission() < 1e-9 && std::abs(fast.reflection() - 1.0) < 1e-9,
            "linear scatterer agrees");
}

void eit_transparency(Outcome& o) {
  for (double omega_c : {0.5, 2.0}) {
    auto c = SystemConfig::reference();
    c.omega_c = omega_c;
    double worst = 0.0;
    for (std::size_t i = 0; i < 100; ++i) {
      const auto s = draw_sample(c, kSeed, i);
      const auto a = weak_drive_amplitudes(c, s.placement, s.shifts);
      worst = std::max({worst, std::abs(a.transmission() - 1.0), a.reflection()});
    }
    o.detail << "Omega_c=" << omega_c << ": max deviation " << worst << "; ";
    o.require(worst < 1e-6, "T = 1, R = 0 within 1e-6 for every placement");
  }
}

void optical_depth_law(Outcome& o) {
  auto c = with_coupling(SystemConfig::reference(), 0.05);
  c.omega_c = 0.0;
  for (int n : {10, 20, 40, 60}) {
    c.n_atoms = n;
    const auto e = ensemble_spectrum(c, std::vector<double>{0.0}, 10000, kSeed);
    const double d = optical_depth(e.T[0].mean), expected = 2.0 * n * c.gamma_1d / c.gamma_e;
    o.detail << "n=" << n << ": D=" << d << " (law " << expected << "); ";
    o.require(std::abs(d - expected) <= 0.1 * expected, "D within 10% of 2 n gamma_1d");
  }
}

void pulse_transmission(Outcome& o) {
  const std::vector<std::pair<double, double>> cases{{2.0, 0.759}, {1.0, 0.302}, {0.5, 0.082}};
  for (const auto& [omega_c, target] : cases) {
    auto c = SystemConfig::reference();
    c.omega_c = omega_c;
    const auto res = scatter_pulse(GaussianPulse{}, ensemble_provider(c, 1000, kSeed));
    o.detail << "Omega_c=" << omega_c << ": T_pulse=" << res.T_pulse << " (target " << target << "); ";
    o.require(std::abs(res.T_pulse - target) <= 0.02, "T_pulse within 2 points");
    o.require(std::abs(res.T_pulse + res.R_pulse + res.loss_pulse - 1.0) < 1e-6, "pulse bookkeeping");
  }
}

void loss_maximum(Outcome& o) {
  const auto grid = linspace(0.0, 10.0, 0.5);
  const auto scan = loss_vs_coupling_scan(SystemConfig::reference(), grid, GaussianPulse{}, 1000, kSeed);
  const auto peak = locate_loss_peak(scan);
  o.detail << "max loss " << peak.loss << " at gamma_1d = " << peak.gamma_1d;
  o.require(std::abs(peak.loss - 0.197) <= 0.02, "loss 19.7% +- 2 points");
  o.require(std::abs(peak.gamma_1d - 5.75) <= 0.5, "location 5.75 +- 0.5");
  o.require(std::abs(scan.front().loss_pulse) < 1e-12, "no loss without coupling");
  bool monotone = true;
  for (std::size_t i = 1; i < scan.size(); ++i) monotone = monotone && scan[i].T_pulse < scan[i - 1].T_pulse;
  o.require(monotone, "T_pulse decreasing in gamma_1d");
}

double averaged_width(const SystemConfig& c, std::size_t m) {
  // Coarse pass to size the window, then a grid with ~100 points per width.
  const auto coarse = ensemble_spectrum(c, linspace(-4.0, 4.0, 0.02), m, kSeed).averaged();
  const double w0 = eit_width(coarse).width;
  const double step = w0 / 100.0;
  const auto fine = ensemble_spectrum(c, linspace(-2.0 * w0, 2.0 * w0, step), m, kSeed).averaged();
  return eit_width(fine).width;
}

void width_scaling(Outcome& o) {
  std::vector<double> x, w;
  for (double omega_c : {1.0, 1.5, 2.0, 2.5, 3.0}) {
    auto c = SystemConfig::reference();
    c.omega_c = omega_c;
    x.push_back(omega_c * omega_c / c.gamma_1d);
    w.push_back(averaged_width(c, 1000));
  }
  const double r2_omega = r_squared(x, w);
  o.detail << "w vs Omega_c^2/gamma_1d: R^2=" << r2_omega << "; ";
  o.require(r2_omega > 0.99, "linear in Omega_c^2/gamma_1d");

  x.clear();
  w.clear();
  for (int n : {5, 10, 20, 40}) {
    auto c = SystemConfig::reference();
    c.n_atoms = n;
    x.push_back(1.0 / std::sqrt(static_cast<double>(n)));
    w.push_back(averaged_width(c, 1000));
  }
  const double r2_n = r_squared(x, w);
  o.detail << "w vs 1/sqrt(n): R^2=" << r2_n;
  o.require(r2_n > 0.99, "linear in 1/sqrt(n)");
}

struct MasterAverages {
  double T = 0.0, R = 0.0, P_E = 0.0;
};

MasterAverages master_average(SystemConfig c, double gamma_t, std::size_t m) {
  c.gamma_d = gamma_t;
  const auto basis = master_basis(c);
  const CVector e_state = collective_excited_state(basis);
  std::vector<double> t(m), r(m), pe(m);
  for_each_sample(c, m, kSeed, [&](const DisorderSample& s) {
    const auto rho = steady_state_master(build_master_model(c, s.placement, s.shifts, basis));
    const auto obs = observables_from_density(rho, basis, s.placement, c);
    t[s.index] = obs.T;
    r[s.index] = obs.R;
    pe[s.index] = collective_population(rho, e_state);
  });
  return {summarize(t).mean, summarize(r).mean, summarize(pe).mean};
}

// With gate = false the results are reported but do not decide the outcome.
void decoherence_for(Outcome& o, int n, std::size_t m, bool gate) {
  Outcome local;
  Outcome& target = gate ? o : local;
  auto c = SystemConfig::reference();
  c.n_atoms = n;
  o.detail << "n=" << n << " (" << m << " samples): T(0)=";
  double previous = 2.0;
  MasterAverages strongest;
  for (double g : {0.0, 0.3, 1.0, 3.5}) {
    const auto a = master_average(c, g, m);
    o.detail << a.T << ' ';
    target.require(a.T < previous, "T(0) decreasing in gamma_t (n=" + std::to_string(n) + ")");
    previous = a.T;
    strongest = a;
  }
  o.detail << "R(0)@3.5=" << strongest.R << " P_E=";
  target.require(strongest.R > 0.01, "R(0) > 0.01 at gamma_t = 3.5 (n=" + std::to_string(n) + ")");
  previous = -1.0;
  for (double g : {0.0, 0.5, 1.0, 1.5}) {
    const auto a = master_average(c, g, m);
    o.detail << a.P_E << ' ';
    target.require(a.P_E > previous, "steady P_E increasing in gamma_t (n=" + std::to_string(n) + ")");
    previous = a.P_E;
  }
  if (!gate) o.detail << (local.pass ? "[info: all trends hold]" : "[info, not gating:" + local.detail.str() + "]");
  o.detail << "; ";
}

void decoherence_suite(Outcome& o) {
  // The one-excitation master equation is exact at this probe order when only
  // dephasing acts; check it against the two-excitation space on one sample.
  auto c = SystemConfig::reference();
  c.n_atoms = 5;
  c.gamma_d = 1.0;
  const auto s = draw_sample(c, kSeed, 0);
  const TruncatedBasis one(5, Truncation::one), two(5, Truncation::two);
  const auto o1 = observables_from_density(
      steady_state_master(build_master_model(c, s.placement, s.shifts, one)), one, s.placement, c);
  const auto o2 = observables_from_density(
      steady_state_master(build_master_model(c, s.placement, s.shifts, two)), two, s.placement, c);
  const double gap = std::max(std::abs(o1.T - o2.T), std::abs(o1.R - o2.R));
  o.detail << "one vs two excitations: " << gap << "; ";
  o.require(gap < 1e-6, "truncation check");

  decoherence_for(o, 5, 1000, true);
  // larger ensemble, reported for comparison
  decoherence_for(o, 10, 200, false);
}

void cross_solver(Outcome& o) {
  double worst = 0.0;
  const auto grid = linspace(-5.0, 5.0, 0.5);
  for (int n = 1; n <= 3; ++n) {
    auto c = SystemConfig::reference();
    c.n_atoms = n;
    c.n_sites = 20;
    const auto s = draw_sample(c, kSeed, static_cast<std::size_t>(n));
    const TruncatedBasis full(n, Truncation::full);
    for (double delta : grid) {
      c.delta = delta;
      const auto rho = steady_state_master(build_master_model(c, s.placement, s.shifts, full));
      const auto me = observables_from_density(rho, full, s.placement, c);
      const auto wd = weak_drive_amplitudes(c, s.placement, s.shifts);
      worst = std::max({worst, std::abs(me.T - wd.transmission()), std::abs(me.R - wd.reflection())});
    }
  }
  o.detail << "max |master - non-Hermitian| over 3 x 21 points: " << worst;
  o.require(worst < 1e-6, "agreement within 1e-6");
}

void inhomogeneous_broadening(Outcome& o) {
  auto c = SystemConfig::reference();
  std::vector<double> h;
  for (double sigma : {0.0, 0.5, 2.0, 5.0}) {
    c.sigma_ih = sigma;
    const auto e = ensemble_spectrum(c, std::vector<double>{0.0}, 10000, kSeed);
    h.push_back(eit_height(e.averaged()));
    o.detail << "H(" << sigma << ")=" << h.back() << ' ';
  }
  o.require(std::abs(h[0] - 1.0) < 1e-9, "H(0) = 1");
  o.require(h.back() < 0.05, "H(5) < 0.05");
  for (std::size_t i = 1; i < h.size(); ++i) o.require(h[i] <= h[i - 1], "H nonincreasing");
}

void variance_structure(Outcome& o) {
  auto c = SystemConfig::reference();
  const auto grid = linspace(-30.0, 30.0, 0.1);
  std::vector<double> band;
  for (int n : {10, 20, 40, 60}) {
    c.n_atoms = n;
    const auto v = variance_spectrum(c, grid, 1000, kSeed);
    double band_sum = 0.0;
    int band_count = 0;
    for (const auto& p : v) {
      if (std::abs(p.delta) >= 12.0 - 1e-9 && std::abs(p.delta) <= 30.0 + 1e-9) {
        band_sum += p.var_T;
        ++band_count;
      }
    }
    band.push_back(band_sum / band_count);
    if (n != 10) continue;

    const std::size_t mid = grid.size() / 2;
    o.detail << "s2(0)=" << v[mid].var_T << ' ';
    o.require(v[mid].var_T < 1e-10, "s2(0) < 1e-10");
    double near_rabi = 0.0;
    for (const auto& p : v) {
      if (std::abs(std::abs(p.delta) - c.omega_c) <= 0.1 + 1e-9) near_rabi = std::max(near_rabi, p.var_T);
    }
    o.detail << "max s2 for ||delta|-Omega_c|<=0.1: " << near_rabi << ' ';
    o.require(near_rabi < 1e-6, "s2 < 1e-6 around +-Omega_c");
    int asymmetric = 0;
    for (std::size_t i = 0; i < mid; ++i) {
      const auto& a = v[i];
      const auto& b = v[grid.size() - 1 - i];
      const double se = std::hypot(a.stderr_var_T, b.stderr_var_T);
      if (std::abs(a.var_T - b.var_T) > 3.0 * se + 1e-15) ++asymmetric;
    }
    o.detail << "asymmetric points: " << asymmetric << ' ';
    o.require(asymmetric == 0, "s2 even within 3 standard errors");
  }
  o.detail << "band s2 (n=10,20,40,60): " << band[0] << ' ' << band[1] << ' ' << band[2] << ' ' << band[3];
  for (std::size_t i = 1; i < band.size(); ++i) o.require(band[i] > band[i - 1], "band s2 increasing in n");
}

void fluorescence_quenching(Outcome& o) {
  const auto tau = default_tau_grid();
  double worst = 0.0;
  for (double omega_c : {0.5, 2.0}) {
    auto c = SystemConfig::reference();
    c.omega_c = omega_c;
    const TruncatedBasis b(c.n_atoms, Truncation::two);
    for (std::size_t i = 0; i < 5; ++i) {
      const auto s = draw_sample(c, kSeed, i);
      const auto curve = g2(build_model(c, s.placement, s.shifts, b), b, s.placement, c, Channel::transmitted, tau);
      for (double v : curve.values) worst = std::max(worst, std::abs(v - 1.0));
    }
  }
  o.detail << "max |g2_T - 1| = " << worst;
  o.require(worst < 1e-3, "g2_T = 1 within 1e-3");
}

void off_resonant_correlations(Outcome& o) {
  const auto tau = default_tau_grid();
  for (double omega_c : {2.0, 0.5}) {
    auto c = SystemConfig::reference();
    c.omega_c = omega_c;
    const std::size_t m = 1000;
    const TransportFunction averaged = [&](double d) {
      const auto p = ensemble_spectrum(c, std::vector<double>{d}, m, kSeed).averaged().points[0];
      return std::pair{p.T, p.R};
    };
    c.delta = find_tr_crossing(averaged, 0.0, 10.0, 0.01);
    const auto [gt, gr] = ensemble_g2(c, tau, m, kSeed);
    const double min_t = *std::min_element(gt.mean.begin(), gt.mean.end());
    const auto lowest_r = std::min_element(gr.mean.begin(), gr.mean.end());
    const double min_r = *lowest_r;
    const double min_r_se = gr.standard_error[static_cast<std::size_t>(lowest_r - gr.mean.begin())];
    const int beats = local_extrema(tau, gr.mean, 10.0);
    o.detail << "Omega_c=" << omega_c << ": delta*=" << c.delta << " g2_T(0)=" << gt.mean[0]
             << " g2_R(0)=" << gr.mean[0] << " min g2_T=" << min_t << " min g2_R=" << min_r << " +- " << min_r_se
             << " g2_R extrema=" << beats << "; ";
    const std::string tag = " (Omega_c=" + std::to_string(omega_c) + ")";
    o.require(gt.mean[0] > 1.0 && gr.mean[0] > 1.0, "initial bunching" + tag);
    o.require(min_r >= 1.0, "g2_R >= 1 on the grid" + tag);
    o.require(beats >= 2, "quantum beats in g2_R" + tag);
    if (omega_c == 2.0) o.require(min_t < 1.0, "antibunching window in g2_T" + tag);
  }
}

void conservation(Outcome& o) {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> atoms(1, 15);
  double lossless = 0.0, excess = -1.0;
  for (int k = 0; k < 1000; ++k) {
    auto c = SystemConfig::reference();
    c.n_atoms = atoms(rng);
    c.n_sites = 60;
    c = with_coupling(c, 0.1 + 5.0 * u(rng));
    c.omega_c = 3.0 * u(rng);
    c.kd = 2.0 * 3.141592653589793 * u(rng);
    const double delta = -10.0 + 20.0 * u(rng);
    c.delta = delta;
    Rng sample_rng(sample_seed(kSeed, static_cast<std::uint64_t>(k)));
    const auto p = sample_placement(c.n_atoms, c.n_sites, sample_rng);
    const auto shifts = InhomogeneousShifts::none(c.n_atoms);

    auto lossy = c;
    c.gamma_e = 0.0;
    for (const auto& a : {weak_drive_amplitudes(c, p, shifts), LinearScatterer(c, p, shifts).at(delta)}) {
      lossless = std::max(lossless, std::abs(a.transmission() + a.reflection() - 1.0));
    }
    for (const auto& a : {weak_drive_amplitudes(lossy, p, shifts), LinearScatterer(lossy, p, shifts).at(delta)}) {
      excess = std::max(excess, a.transmission() + a.reflection() - 1.0);
    }
  }
  o.detail << "lossless max |T+R-1| = " << lossless << ", lossy max (T+R-1) = " << excess;
  o.require(lossless < 1e-9, "T + R = 1 without free-space decay");
  o.require(excess <= 1e-9, "T + R <= 1 with free-space decay");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "single-atom complete reflection", single_atom_reflection},
      {2, "EIT exact transparency, 100 placements", eit_transparency},
      {3, "optical-depth law", optical_depth_law},
      {4, "Gaussian-pulse peak transmissions", pulse_transmission},
      {5, "pulse loss maximum vs coupling", loss_maximum},
      {6, "EIT width scaling", width_scaling},
      {7, "decoherence suite (master equation, n=5)", decoherence_suite},
      {8, "master equation vs non-Hermitian solver", cross_solver},
      {9, "inhomogeneous broadening kills the EIT peak", inhomogeneous_broadening},
      {10, "transmission variance structure", variance_structure},
      {11, "fluorescence quenching", fluorescence_quenching},
      {12, "off-resonant bunching, antibunching and beats", off_resonant_correlations},
      {13, "energy conservation", conservation},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& cr : criteria) {
    if (!selected.empty() && !selected.count(cr.id)) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [error: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", cr.id, cr.name, o.detail.str().c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

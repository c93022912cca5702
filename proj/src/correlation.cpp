#include "wgqed/correlation.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "wgqed/disorder.hpp"
#include "wgqed/steadystate.hpp"

namespace wgqed {

double find_tr_crossing(const Spectrum& spectrum, int which) {
  spectrum.check_grid();
  const auto& p = spectrum.points;
  int seen = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (p[i + 1].delta <= 0.0) continue;
    const double a = p[i].T - p[i].R, b = p[i + 1].T - p[i + 1].R;
    if (p[i].delta > 0.0 && a == 0.0) {
      if (seen++ == which) return p[i].delta;
      continue;
    }
    if ((a < 0.0) != (b < 0.0) && b != 0.0) {
      const double x = p[i].delta + (p[i + 1].delta - p[i].delta) * a / (a - b);
      if (x > 0.0 && seen++ == which) return x;
    }
  }
  throw DomainError("no T = R crossing at positive detuning");
}

double find_tr_crossing(const TransportFunction& transport, double lo, double hi, double step, int which,
                        double tolerance) {
  if (!(step > 0.0) || !(hi > lo)) throw DomainError("invalid crossing search range");
  lo = std::max(lo, 0.0);
  auto diff = [&](double d) {
    const auto [t, r] = transport(d);
    return t - r;
  };
  int seen = 0;
  double x0 = lo, f0 = diff(x0);
  for (double x1 = lo + step; x0 < hi; x1 = std::min(x1 + step, hi)) {
    const double f1 = diff(x1);
    if ((f0 < 0.0) != (f1 < 0.0) && x1 > 0.0) {
      if (seen++ == which) {
        double a = x0, fa = f0, b = x1;
        while (b - a > tolerance) {
          const double mid = 0.5 * (a + b);
          const double fm = diff(mid);
          if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
          } else {
            b = mid;
          }
        }
        return 0.5 * (a + b);
      }
    }
    x0 = x1;
    f0 = f1;
    if (x1 >= hi) break;
  }
  throw DomainError("no T = R crossing at positive detuning");
}

std::vector<double> default_tau_grid() {
  std::vector<double> tau(400);
  for (std::size_t k = 0; k < tau.size(); ++k) tau[k] = 20.0 * static_cast<double>(k) / 399.0;
  return tau;
}

namespace {

struct ScaledSystem {
  OperatorMatrix h;     // sector-rescaled h_non + h_dri
  CVector psi;          // rescaled steady state
  OperatorMatrix lower; // i sqrt(gamma_1d / 2) sum_j phase_j S_ge^j
  std::vector<double> weight;  // probe_amp^(2m) for each basis state
};

OperatorMatrix channel_lowering(const TruncatedBasis& basis, const AtomPlacement& placement,
                                const SystemConfig& config, Channel channel) {
  SystemConfig no_identity = config;
  no_identity.probe_amp = 0.0;
  return output_operator(basis, placement, no_identity, channel);
}

ScaledSystem rescale(const EffectiveModel& model, const TruncatedBasis& basis, const SystemConfig& config) {
  const double eps = config.probe_amp;
  ScaledSystem s;
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (Eigen::Index col = 0; col < model.h_dri.outerSize(); ++col) {
    const int mc = basis.excitation(static_cast<std::size_t>(col));
    for (OperatorMatrix::InnerIterator it(model.h_dri, col); it; ++it) {
      const int mr = basis.excitation(static_cast<std::size_t>(it.row()));
      // raising entries scale as 1/eps, lowering entries as eps
      const Complex v = mr > mc ? it.value() / eps : it.value() * eps;
      triplets.emplace_back(it.row(), col, v);
    }
  }
  OperatorMatrix drive(model.h_dri.rows(), model.h_dri.cols());
  drive.setFromTriplets(triplets.begin(), triplets.end());
  s.h = model.h_non + drive;

  const SteadyState ss = solve_weak_drive(model, basis);
  s.psi = ss.assemble(basis);
  s.weight.resize(basis.dimension());
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const int m = basis.excitation(i);
    s.psi(static_cast<Eigen::Index>(i)) /= std::pow(eps, m);
    s.weight[i] = std::pow(eps, 2 * m);
  }
  return s;
}

double weighted_norm2(const CVector& v, const std::vector<double>& w) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += w[static_cast<std::size_t>(i)] * std::norm(v(i));
  return acc;
}

// Scaled action of the output operator: identity part (transmitted only) plus
// the lowering part, which carries one factor of eps in unscaled variables.
CVector apply_output(const OperatorMatrix& lower, bool identity, const CVector& v) {
  CVector out = lower * v;
  if (identity) out += v;
  return out;
}

}  // namespace

G2Parts g2_parts(const EffectiveModel& model, const TruncatedBasis& basis, const AtomPlacement& placement,
                 const SystemConfig& config, Channel channel, std::span<const double> tau) {
  if (!(config.probe_amp > 0.0)) throw DomainError("probe_amp must be positive");
  const ScaledSystem s = rescale(model, basis, config);
  const OperatorMatrix lower = channel_lowering(basis, placement, config, channel);
  const bool identity = channel == Channel::transmitted;

  const CVector chi = apply_output(lower, identity, s.psi);
  const double psi_norm2 = weighted_norm2(s.psi, s.weight);
  const double chi_norm2 = weighted_norm2(chi, s.weight);
  // Unscaled <a^dag a> = eps^2 chi_norm2 / psi_norm2.
  const double eps2 = config.probe_amp * config.probe_amp;
  if (!(eps2 * chi_norm2 / psi_norm2 >= 1e-30)) {
    throw UndefinedCorrelationError(std::string("output channel ") + channel_name(channel) + " is dark");
  }

  G2Parts parts;
  parts.denominator = chi_norm2 * chi_norm2;
  const auto states = evolve(s.h, chi, tau);
  parts.numerator.reserve(states.size());
  for (const auto& c : states) {
    parts.numerator.push_back(psi_norm2 * weighted_norm2(apply_output(lower, identity, c), s.weight));
  }
  return parts;
}

G2Curve g2(const EffectiveModel& model, const TruncatedBasis& basis, const AtomPlacement& placement,
           const SystemConfig& config, Channel channel, std::span<const double> tau) {
  const auto parts = g2_parts(model, basis, placement, config, channel, tau);
  G2Curve curve;
  curve.channel = channel;
  curve.delta_star = config.delta;
  curve.tau.assign(tau.begin(), tau.end());
  for (double v : parts.numerator) curve.values.push_back(v / parts.denominator);
  return curve;
}

std::pair<G2Ensemble, G2Ensemble> ensemble_g2(const SystemConfig& config, std::span<const double> tau,
                                              std::size_t m, std::uint64_t seed, G2Averaging averaging,
                                              std::size_t threads) {
  if (m == 0) throw DomainError("g2 average needs at least one sample");
  const TruncatedBasis basis(config.n_atoms, Truncation::two);
  std::vector<G2Parts> parts_t(m), parts_r(m);
  for_each_sample(
      config, m, seed,
      [&](const DisorderSample& s) {
        const auto model = build_model(config, s.placement, s.shifts, basis);
        parts_t[s.index] = g2_parts(model, basis, s.placement, config, Channel::transmitted, tau);
        parts_r[s.index] = g2_parts(model, basis, s.placement, config, Channel::reflected, tau);
      },
      threads);

  auto reduce = [&](Channel channel, const std::vector<G2Parts>& parts) {
    G2Ensemble e;
    e.channel = channel;
    e.delta_star = config.delta;
    e.tau.assign(tau.begin(), tau.end());
    e.m = m;
    e.seed = seed;
    std::vector<double> column(m);
    double den_sum = 0.0;
    for (const auto& p : parts) den_sum += p.denominator;
    for (std::size_t k = 0; k < tau.size(); ++k) {
      double num_sum = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        column[i] = parts[i].numerator[k] / parts[i].denominator;
        num_sum += parts[i].numerator[k];
      }
      const auto st = summarize(column, seed);
      e.mean.push_back(averaging == G2Averaging::mean_of_ratios ? st.mean : num_sum / den_sum);
      e.standard_error.push_back(st.standard_error);
    }
    return e;
  };
  return {reduce(Channel::transmitted, parts_t), reduce(Channel::reflected, parts_r)};
}

void write_g2_csv(std::ostream& out, const G2Ensemble& transmitted, const G2Ensemble& reflected) {
  out << "tau,g2_T,g2_R,stderr_T,stderr_R\n" << std::setprecision(17);
  for (std::size_t k = 0; k < transmitted.tau.size(); ++k) {
    out << transmitted.tau[k] << ',' << transmitted.mean[k] << ',' << reflected.mean[k] << ','
        << transmitted.standard_error[k] << ',' << reflected.standard_error[k] << '\n';
  }
}

}  // namespace wgqed

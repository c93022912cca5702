#include "wgqed/observables.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace wgqed {

ScatterPoint ScatterPoint::from(double delta, const TransportAmplitudes& amps) {
  ScatterPoint p;
  p.delta = delta;
  p.t_amp = amps.t;
  p.r_amp = amps.r;
  p.T = amps.transmission();
  p.R = amps.reflection();
  p.loss = 1.0 - p.T - p.R;
  return p;
}

ScatterPoint ScatterPoint::from_intensities(double delta, double T, double R) {
  ScatterPoint p;
  p.delta = delta;
  p.t_amp = p.r_amp = Complex(std::nan(""), std::nan(""));
  p.T = T;
  p.R = R;
  p.loss = 1.0 - T - R;
  return p;
}

std::vector<double> Spectrum::deltas() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.delta);
  return out;
}

std::vector<double> Spectrum::transmission() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.T);
  return out;
}

void Spectrum::check_grid() const {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].delta > points[i - 1].delta)) throw GridError("detuning grid must be strictly increasing");
  }
  if (!T_variance.empty() && T_variance.size() != points.size()) {
    throw GridError("variance column length does not match the grid");
  }
}

const char* channel_name(Channel channel) {
  return channel == Channel::transmitted ? "T" : "R";
}

OperatorMatrix output_operator(const TruncatedBasis& basis, const AtomPlacement& placement,
                               const SystemConfig& config, Channel channel) {
  if (placement.size() != basis.atoms()) throw DomainError("placement does not match the basis");
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  OperatorMatrix a(dim, dim);
  const double coupling = std::sqrt(config.gamma_1d / 2.0);
  const double sign = channel == Channel::transmitted ? -1.0 : 1.0;
  for (int j = 0; j < basis.atoms(); ++j) {
    const Complex phase = std::exp(sign * kI * config.kd * static_cast<double>(placement[j]));
    a += (kI * coupling * phase) * transition_operator(basis, j, Level::g, Level::e);
  }
  if (channel == Channel::transmitted) {
    OperatorMatrix id(dim, dim);
    id.setIdentity();
    a += config.probe_amp * id;
  }
  prune_zeros(a);
  return a;
}

TransportAmplitudes output_amplitudes(const SteadyState& state, const TruncatedBasis& basis,
                                      const AtomPlacement& placement, const SystemConfig& config) {
  if (!(config.probe_amp > 0.0)) throw DomainError("probe_amp must be positive");
  const double coupling = std::sqrt(config.gamma_1d / 2.0);
  const auto offset = basis.sector_begin(1);
  Complex forward = 0.0, backward = 0.0;
  for (int j = 0; j < basis.atoms(); ++j) {
    const auto idx = static_cast<Eigen::Index>(basis.single(j, Level::e) - offset);
    const double theta = config.kd * static_cast<double>(placement[j]);
    forward += state.c1(idx) * std::exp(-kI * theta);
    backward += state.c1(idx) * std::exp(kI * theta);
  }
  return {1.0 + kI * coupling * forward / config.probe_amp, kI * coupling * backward / config.probe_amp};
}

ScatterPoint observables_from_density(const CMatrix& rho, const TruncatedBasis& basis,
                                      const AtomPlacement& placement, const SystemConfig& config) {
  if (rho.rows() != static_cast<Eigen::Index>(basis.dimension()) || rho.cols() != rho.rows()) {
    throw DomainError("density matrix does not match the basis");
  }
  const Complex trace = rho.trace();
  if (std::abs(trace - 1.0) > 1e-6) throw DomainError("density matrix trace deviates from 1");
  if (!(config.probe_amp > 0.0)) throw DomainError("probe_amp must be positive");
  const double scale = config.probe_amp * config.probe_amp;
  auto intensity = [&](Channel channel) {
    const OperatorMatrix a = output_operator(basis, placement, config, channel);
    const OperatorMatrix n = OperatorMatrix(a.adjoint()) * a;
    // Tr[rho N] = sum_{ij} rho_ji N_ij
    Complex acc = 0.0;
    for (Eigen::Index col = 0; col < n.outerSize(); ++col) {
      for (OperatorMatrix::InnerIterator it(n, col); it; ++it) acc += it.value() * rho(col, it.row());
    }
    return acc.real() / scale;
  };
  return ScatterPoint::from_intensities(config.delta, intensity(Channel::transmitted),
                                        intensity(Channel::reflected));
}

double optical_depth(double T0) {
  if (!(T0 > 0.0)) throw DomainError("optical depth needs a positive resonant transmission");
  return -std::log(T0);
}

namespace {

std::size_t zero_index(const Spectrum& spectrum) {
  for (std::size_t i = 0; i < spectrum.points.size(); ++i) {
    if (spectrum.points[i].delta == 0.0) return i;
  }
  throw GridError("detuning grid does not contain 0");
}

}  // namespace

WidthFit eit_width(const Spectrum& spectrum) {
  spectrum.check_grid();
  const std::size_t z = zero_index(spectrum);
  const auto& pts = spectrum.points;
  const double t0 = pts[z].T;
  if (!(t0 > 0.0)) throw DomainError("resonant transmission must be positive");

  std::size_t lo = z, hi = z;
  while (lo > 0 && pts[lo - 1].T >= t0 / 2.0) --lo;
  while (hi + 1 < pts.size() && pts[hi + 1].T >= t0 / 2.0) ++hi;
  const std::size_t count = hi - lo + 1;
  if (count < 5) {
    throw InsufficientDataError("only " + std::to_string(count) + " points inside the EIT window");
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = lo; i <= hi; ++i) {
    const double x = pts[i].delta * pts[i].delta;
    const double y = std::log(pts[i].T);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(count);
  const double denom = m * sxx - sx * sx;
  if (!(denom > 0.0)) throw InsufficientDataError("EIT window has no spread in detuning");
  const double slope = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / m;
  if (!(slope < 0.0)) throw DomainError("transmission does not decrease away from resonance");

  double ss = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    const double r = std::log(pts[i].T) - (intercept + slope * pts[i].delta * pts[i].delta);
    ss += r * r;
  }
  return {1.0 / std::sqrt(-slope), std::sqrt(ss / m), count};
}

double eit_height(const Spectrum& spectrum) {
  return spectrum.points[zero_index(spectrum)].T;
}

double collective_population(const CMatrix& rho, const CVector& e_state) {
  if (rho.rows() != e_state.size()) throw DomainError("dimension mismatch");
  return e_state.dot(rho * e_state).real();
}

double collective_population(const CVector& psi, const CVector& e_state) {
  if (psi.size() != e_state.size()) throw DomainError("dimension mismatch");
  return std::norm(e_state.dot(psi));
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
  const bool with_var = !spectrum.T_variance.empty();
  out << "delta,T,R,loss" << (with_var ? ",T_variance" : "") << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < spectrum.points.size(); ++i) {
    const auto& p = spectrum.points[i];
    out << p.delta << ',' << p.T << ',' << p.R << ',' << p.loss;
    if (with_var) out << ',' << spectrum.T_variance[i];
    out << '\n';
  }
}

}  // namespace wgqed

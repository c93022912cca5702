#include "wgqed/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "wgqed/parallel.hpp"

namespace wgqed {

std::uint64_t sample_seed(std::uint64_t master_seed, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  return mix(mix(master_seed) ^ index);
}

AtomPlacement sample_placement(int n_atoms, int n_sites, Rng& rng) {
  if (n_atoms < 0 || n_atoms > n_sites) {
    throw ConfigError("cannot place " + std::to_string(n_atoms) + " atoms on " +
                      std::to_string(n_sites) + " sites");
  }
  std::set<int> chosen;
  for (int j = n_sites - n_atoms; j < n_sites; ++j) {
    const int t = std::uniform_int_distribution<int>(0, j)(rng);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  return AtomPlacement(std::vector<int>(chosen.begin(), chosen.end()));
}

InhomogeneousShifts sample_shifts(double sigma_ih, int n_atoms, Rng& rng) {
  if (sigma_ih < 0.0) throw ConfigError("sigma_ih must be nonnegative");
  auto shifts = InhomogeneousShifts::none(n_atoms);
  if (sigma_ih == 0.0) return shifts;
  std::normal_distribution<double> dist(0.0, sigma_ih);
  for (auto& v : shifts.values) v = dist(rng);
  return shifts;
}

DisorderSample draw_sample(const SystemConfig& config, std::uint64_t master_seed, std::size_t index) {
  DisorderSample s;
  s.index = index;
  s.seed = sample_seed(master_seed, index);
  Rng rng(s.seed);
  s.placement = sample_placement(config.n_atoms, config.n_sites, rng);
  s.shifts = sample_shifts(config.sigma_ih, config.n_atoms, rng);
  return s;
}

EnsembleStats summarize(std::span<const double> values, std::uint64_t seed) {
  EnsembleStats st;
  st.m = values.size();
  st.seed = seed;
  if (values.empty()) return st;
  const double m = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  st.mean = sum / m;
  double m2 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d2 = (v - st.mean) * (v - st.mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  st.variance = m2 / m;
  st.standard_error = std::sqrt(st.variance / m);
  st.variance_standard_error = std::sqrt(std::max(0.0, m4 / m - st.variance * st.variance) / m);
  return st;
}

void RunningStats::add(double x) {
  ++n_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_), nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double d = other.mean_ - mean_;
  mean_ += d * nb / n;
  m2_ += other.m2_ + d * d * na * nb / n;
  n_ += other.n_;
}

void for_each_sample(const SystemConfig& config, std::size_t m, std::uint64_t seed,
                     const std::function<void(const DisorderSample&)>& body, std::size_t threads) {
  if (config.n_atoms > config.n_sites) throw ConfigError("n exceeds N (n_atoms > n_sites)");
  parallel_for(
      m,
      [&](std::size_t i) {
        const auto sample = draw_sample(config, seed, i);
        try {
          body(sample);
        } catch (const SampleError&) {
          throw;
        } catch (const std::exception& e) {
          throw SampleError(sample.seed, i,
                            "sample " + std::to_string(i) + " (seed " + std::to_string(sample.seed) +
                                ") failed: " + e.what());
        }
      },
      threads);
}

EnsembleStats ensemble_average(const SystemConfig& config, const SampleObservable& observable,
                               std::size_t m, std::uint64_t seed, std::size_t threads) {
  if (m == 0) throw DomainError("ensemble average needs at least one sample");
  std::vector<double> values(m);
  for_each_sample(
      config, m, seed,
      [&](const DisorderSample& s) { values[s.index] = observable(s.placement, s.shifts); }, threads);
  return summarize(values, seed);
}

Spectrum EnsembleSpectrum::averaged() const {
  Spectrum s;
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    s.points.push_back(ScatterPoint::from_intensities(deltas[k], T[k].mean, R[k].mean));
    s.T_variance.push_back(T[k].variance);
  }
  return s;
}

EnsembleSpectrum ensemble_spectrum(const SystemConfig& config, std::span<const double> deltas,
                                   std::size_t m, std::uint64_t seed, std::size_t threads) {
  if (m == 0) throw DomainError("ensemble spectrum needs at least one sample");
  const std::size_t k = deltas.size();
  // Sample-major storage, reduced in index order so the result does not
  // depend on the worker count.
  std::vector<double> t(m * k), r(m * k);
  for_each_sample(
      config, m, seed,
      [&](const DisorderSample& s) {
        const LinearScatterer scatterer(config, s.placement, s.shifts);
        for (std::size_t j = 0; j < k; ++j) {
          const auto amps = scatterer.at(deltas[j]);
          t[s.index * k + j] = amps.transmission();
          r[s.index * k + j] = amps.reflection();
        }
      },
      threads);

  EnsembleSpectrum out;
  out.deltas.assign(deltas.begin(), deltas.end());
  std::vector<double> column(m);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < m; ++i) column[i] = t[i * k + j];
    out.T.push_back(summarize(column, seed));
    for (std::size_t i = 0; i < m; ++i) column[i] = r[i * k + j];
    out.R.push_back(summarize(column, seed));
  }
  return out;
}

std::vector<VariancePoint> variance_spectrum(const SystemConfig& config, std::span<const double> deltas,
                                             std::size_t m, std::uint64_t seed, std::size_t threads) {
  const auto ens = ensemble_spectrum(config, deltas, m, seed, threads);
  std::vector<VariancePoint> out;
  out.reserve(deltas.size());
  for (std::size_t j = 0; j < deltas.size(); ++j) {
    out.push_back({deltas[j], ens.T[j].mean, ens.T[j].variance, ens.T[j].standard_error,
                   ens.T[j].variance_standard_error, ens.R[j].mean, ens.R[j].variance});
  }
  return out;
}

}  // namespace wgqed

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "wgqed/model.hpp"
#include "wgqed/observables.hpp"
#include "wgqed/scattering.hpp"

namespace wgqed {

using Rng = std::mt19937_64;

/// Seed of sample `index` derived from the master seed by a splitmix64 mix,
/// so each sample's stream is independent of scheduling.
std::uint64_t sample_seed(std::uint64_t master_seed, std::uint64_t index);

/// Uniformly random n-subset of {0, ..., N-1}, sorted (Floyd's algorithm).
/// Throws ConfigError when n > N.
AtomPlacement sample_placement(int n_atoms, int n_sites, Rng& rng);

/// n independent N(0, sigma^2) draws; exactly zero without drawing when sigma = 0.
InhomogeneousShifts sample_shifts(double sigma_ih, int n_atoms, Rng& rng);

struct DisorderSample {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  AtomPlacement placement;
  InhomogeneousShifts shifts;
};

/// Placement, then shifts, drawn from the stream of sample `index`.
DisorderSample draw_sample(const SystemConfig& config, std::uint64_t master_seed, std::size_t index);

struct EnsembleStats {
  double mean = 0.0;
  double variance = 0.0;  // population variance, divisor m
  std::size_t m = 0;
  std::uint64_t seed = 0;
  double standard_error = 0.0;           // sqrt(variance / m)
  double variance_standard_error = 0.0;  // sqrt((mu4 - variance^2) / m)
};

/// Two-pass statistics of a finished sample.
EnsembleStats summarize(std::span<const double> values, std::uint64_t seed = 0);

/// Streaming mean and population variance (Welford, with Chan's merge).
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ ? m2_ / static_cast<double>(n_) : 0.0; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

using SampleObservable = std::function<double(const AtomPlacement&, const InhomogeneousShifts&)>;

/// Mean and variance of `observable` over m disorder samples. A failing
/// sample aborts the average with SampleError carrying its seed.
EnsembleStats ensemble_average(const SystemConfig& config, const SampleObservable& observable,
                               std::size_t m, std::uint64_t seed, std::size_t threads = 0);

/// Runs body(sample) for every sample index on the worker pool and wraps
/// failures in SampleError.
void for_each_sample(const SystemConfig& config, std::size_t m, std::uint64_t seed,
                     const std::function<void(const DisorderSample&)>& body, std::size_t threads = 0);

/// Per-detuning statistics of T and R for linear scattering.
struct EnsembleSpectrum {
  std::vector<double> deltas;
  std::vector<EnsembleStats> T;
  std::vector<EnsembleStats> R;

  /// Mean T and R per detuning, with the T variance column.
  Spectrum averaged() const;
};

EnsembleSpectrum ensemble_spectrum(const SystemConfig& config, std::span<const double> deltas,
                                   std::size_t m, std::uint64_t seed, std::size_t threads = 0);

struct VariancePoint {
  double delta = 0.0;
  double mean_T = 0.0;
  double var_T = 0.0;
  double stderr_T = 0.0;      // standard error of mean_T
  double stderr_var_T = 0.0;  // standard error of var_T
  double mean_R = 0.0;
  double var_R = 0.0;
};

inline constexpr std::size_t kDefaultVarianceSamples = 1000;

std::vector<VariancePoint> variance_spectrum(const SystemConfig& config, std::span<const double> deltas,
                                             std::size_t m = kDefaultVarianceSamples,
                                             std::uint64_t seed = 0, std::size_t threads = 0);

}  // namespace wgqed

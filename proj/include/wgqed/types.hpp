#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace wgqed {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

/// Sparse complex matrix over a TruncatedBasis (column-major, compressed).
using OperatorMatrix = Eigen::SparseMatrix<Complex>;

inline constexpr Complex kI{0.0, 1.0};

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularBlockError : public Error {
 public:
  SingularBlockError(std::string block, const std::string& what)
      : Error(what), block_(std::move(block)) {}
  const std::string& block() const { return block_; }

 private:
  std::string block_;
};

class IntegrationError : public Error {
 public:
  IntegrationError(double time, const std::string& what)
      : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class GridError : public Error {
 public:
  using Error::Error;
};

class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

/// Raised when an observable fails on one disorder sample; carries the
/// per-sample seed so the failing realization can be replayed.
class SampleError : public Error {
 public:
  SampleError(std::uint64_t sample_seed, std::size_t index, const std::string& what)
      : Error(what), sample_seed_(sample_seed), index_(index) {}
  std::uint64_t sample_seed() const { return sample_seed_; }
  std::size_t index() const { return index_; }

 private:
  std::uint64_t sample_seed_;
  std::size_t index_;
};

}  // namespace wgqed

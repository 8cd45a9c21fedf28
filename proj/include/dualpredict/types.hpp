#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dualpredict {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Raised for malformed inputs: bad partitions, out-of-range lags, invalid models.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A factorization met a pivot below the relative singularity threshold.
class PositiveDefinitenessError : public std::runtime_error {
 public:
  PositiveDefinitenessError(long index, double pivot, double threshold);

  /// Signed window position of the failing pivot.
  [[nodiscard]] long index() const noexcept { return index_; }
  [[nodiscard]] double pivot() const noexcept { return pivot_; }

 private:
  long index_;
  double pivot_;
};

/// A limit or series did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved);

  [[nodiscard]] double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// The window N = {-m, ..., n}.
struct IndexWindow {
  long m = 0;
  long n = 0;

  IndexWindow() = default;
  IndexWindow(long past, long future);

  [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(m + n + 1); }
  [[nodiscard]] bool contains(long i) const noexcept { return i >= -m && i <= n; }
  /// Zero-based storage offset of signed position i.
  [[nodiscard]] Eigen::Index offset(long i) const noexcept { return static_cast<Eigen::Index>(i + m); }
  [[nodiscard]] long position(Eigen::Index offset) const noexcept { return static_cast<long>(offset) - m; }

  friend bool operator==(const IndexWindow&, const IndexWindow&) = default;
};

}  // namespace dualpredict

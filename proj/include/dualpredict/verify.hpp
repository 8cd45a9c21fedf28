#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "dualpredict/duality.hpp"

namespace dualpredict {

/// Portable variates from raw mt19937_64 output, so corpora match across standard libraries.
class SeededRandom {
 public:
  explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal by Box-Muller.
  double normal();
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Hermitian PD matrix Q diag(u) Q* with u ~ U[0.1, 1] and Q unitary from a complex Gaussian.
[[nodiscard]] Matrix random_hermitian_pd(SeededRandom& rng, Eigen::Index size);

struct VerifyOptions {
  std::uint64_t seed = 42;
  std::size_t instances = 1000;
  std::size_t min_size = 2;
  std::size_t max_size = 12;
  std::size_t max_missing = 3;
  /// Prediction agreement, duality product, involution and row checks.
  double tolerance = 1e-9;
  double biorthogonality_tolerance = 1e-10;
};

struct VerifySummary {
  std::size_t instances = 0;
  std::size_t partitions = 0;
  /// |sigma2 (duality) - sigma2 (normal equations)|.
  double max_sigma2_deviation = 0.0;
  double max_alpha_deviation = 0.0;
  /// |primal error * dual error - 1|.
  double max_product_deviation = 0.0;
  double max_biorthogonality = 0.0;
  double max_involution = 0.0;
  /// Standardized interpolation errors against the rows of Gamma^{-1}.
  double max_row_deviation = 0.0;
  /// Instances whose covariance failed to factor (never expected for this corpus).
  std::size_t factorization_failures = 0;

  [[nodiscard]] bool prediction_passed(const VerifyOptions& options) const;
  [[nodiscard]] bool dual_passed(const VerifyOptions& options) const;
  [[nodiscard]] bool passed(const VerifyOptions& options) const {
    return prediction_passed(options) && dual_passed(options);
  }
};

/// Runs every check on a seeded corpus. Instances are processed in parallel and
/// merged in index order, so the summary is independent of the thread count.
[[nodiscard]] VerifySummary run_verification(const VerifyOptions& options);

}  // namespace dualpredict

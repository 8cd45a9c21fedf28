#pragma once

#include <span>
#include <vector>

#include "dualpredict/toeplitz_linalg.hpp"
#include "dualpredict/types.hpp"

namespace dualpredict {

/// N = K u {l} u M (disjoint), all inside the window. Index lists are kept sorted.
struct IndexPartition {
  IndexWindow window;
  long target = 0;
  std::vector<long> missing;
  std::vector<long> observed;

  /// Observed set is everything in the window except the target and `missing`.
  static IndexPartition from_missing(IndexWindow window, long target, std::vector<long> missing);

  /// Throws ValidationError unless K, {l}, M partition the window.
  void validate() const;
  /// M u {l}, sorted.
  [[nodiscard]] std::vector<long> dual_indices() const;
};

/// Y = D X with D = Gamma^{-1}.
struct DualRepresentation {
  IndexWindow window;
  Matrix coefficients;

  /// max |Gamma D* - I|.
  [[nodiscard]] double biorthogonality_residual(const Matrix& covariance) const;
  /// max |D Gamma D* - D|, i.e. Cov(Y, Y) against Gamma^{-1}.
  [[nodiscard]] double covariance_residual(const Matrix& covariance) const;
  /// Row i of D: coefficients of Y_i over X.
  [[nodiscard]] ComplexVector row(long i) const;
};

struct PredictionResult {
  IndexWindow window;
  long target = 0;
  /// K, with alpha[k] the weight of X_{observed[k]} in X_hat_l(K).
  std::vector<long> observed;
  ComplexVector alpha;
  double sigma2 = 0.0;
  /// M u {l}, with X_l - X_hat_l(K) = sum alpha_prime[i] Y_{dual_indices[i]}.
  std::vector<long> dual_indices;
  ComplexVector alpha_prime;
  /// Coefficients of the error on eps_{k,-m}, k = -m..n (offset-indexed).
  ComplexVector innovation_error;

  [[nodiscard]] Complex alpha_at(long k) const;
  [[nodiscard]] Complex alpha_prime_at(long i) const;
  /// X_l - sum alpha_k X_k as a coefficient vector over the window (offset-indexed).
  [[nodiscard]] ComplexVector error_vector() const;
  /// max_{j in K} |(error, X_j)| / (sigma * sqrt(gamma_jj)).
  [[nodiscard]] double orthogonality_residual(const Matrix& covariance) const;
};

/// Classical normal-equations solution on an arbitrary Hermitian PD matrix.
struct NormalEquations {
  ComplexVector alpha;
  double sigma2 = 0.0;
  /// 1 / (l,l)-entry of the inverse of the (K u {l}) submatrix.
  double sigma2_from_inverse = 0.0;
  /// max_j |gamma_{l,j} - sum_k alpha_k gamma_{k,j} - delta_{lj} sigma2| over j in K u {l}.
  double yule_walker_residual = 0.0;
};

[[nodiscard]] NormalEquations solve_normal_equations(const Matrix& covariance, const IndexWindow& window,
                                                     long target, std::span<const long> observed);

[[nodiscard]] DualRepresentation dual(const CovarianceMatrix& cov);

/// (X_j - X_hat_j(N_j)) / ||X_j - X_hat_j(N_j)||^2 over the window, by the leave-one-out normal equations.
[[nodiscard]] ComplexVector standardized_interpolation_error(const CovarianceMatrix& cov, long j);

/// Predictor of X_l from X_K through the small system on the M u {l} block of Gamma^{-1}.
[[nodiscard]] PredictionResult predict_via_duality(const ArTable& table, const IndexPartition& part);
[[nodiscard]] PredictionResult predict_via_duality(const CovarianceMatrix& cov, const IndexPartition& part);

[[nodiscard]] PredictionResult predict_via_normal_equations(const CovarianceMatrix& cov, const IndexPartition& part);

struct DualityDiagnostics {
  double primal_error = 0.0;  // ||X_l - X_hat_l(K)||^2 under Gamma
  double dual_error = 0.0;    // ||Y_l - Y_hat_l(M)||^2 under Gamma^{-1}
  double product = 0.0;
  /// |cos| of the angle between the two error vectors.
  double cosine = 0.0;
  /// max |(X_l - X_hat_l(K)) - (Y_l - Y_hat_l(M)) / ||Y_l - Y_hat_l(M)||^2| in X-coefficients.
  double proportionality_residual = 0.0;
};

[[nodiscard]] DualityDiagnostics duality_diagnostics(const CovarianceMatrix& cov, const IndexPartition& part);

/// ||X_l - X_hat_l(K)||^2 * ||Y_l - Y_hat_l(M)||^2; equals 1.
[[nodiscard]] double duality_product_check(const CovarianceMatrix& cov, const IndexPartition& part);

/// max |D_Y D - I| where D_Y is the dual coefficient matrix of Y (covariance Gamma^{-1}).
[[nodiscard]] double involution_residual(const CovarianceMatrix& cov);

}  // namespace dualpredict

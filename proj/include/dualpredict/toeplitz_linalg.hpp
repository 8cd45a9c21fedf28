#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "dualpredict/process_models.hpp"
#include "dualpredict/types.hpp"

namespace dualpredict {

/// Relative pivot threshold: a squared pivot at or below kSingularity * scale is singular.
inline constexpr double kSingularity = 1e-13;

/// Durbin-Levinson recursion for the forward predictors of a Hermitian Toeplitz
/// sequence. After advancing to order p, coefficients() holds phi_{p,1..p} with
/// X_hat_t = sum_k phi_{p,k} X_{t-k}, and innovation_variance() is v_p.
class LevinsonDurbin {
 public:
  explicit LevinsonDurbin(ComplexVector gamma);

  /// Supplies gamma_{L+1}, ... when the recursion needs more lags.
  void append_lags(std::span<const Complex> lags);
  void advance();
  void advance_to(std::size_t order);

  [[nodiscard]] std::size_t order() const noexcept { return phi_.size(); }
  [[nodiscard]] std::size_t available_lags() const noexcept { return gamma_.size(); }
  [[nodiscard]] const ComplexVector& coefficients() const noexcept { return phi_; }
  [[nodiscard]] double innovation_variance() const noexcept { return variance_; }
  /// a_{0..p} of the normalized innovation at the current order:
  /// a_0 = 1/sqrt(v_p), a_k = -phi_{p,k}/sqrt(v_p).
  [[nodiscard]] ComplexVector normalized_row() const;

 private:
  ComplexVector gamma_;
  ComplexVector phi_;
  ComplexVector scratch_;
  double variance_;
  double threshold_;
};

/// Lower-triangular A over a window with A(i,j) = a_{i-j, m+i}, -m <= j <= i <= n.
class ArTable {
 public:
  ArTable(IndexWindow window, Matrix lower);

  [[nodiscard]] const IndexWindow& window() const noexcept { return window_; }
  [[nodiscard]] const Matrix& matrix() const noexcept { return a_; }
  /// A(i,j) in signed window positions.
  [[nodiscard]] Complex entry(long i, long j) const;
  /// a_{k, m+row}.
  [[nodiscard]] Complex coefficient(long k, long row) const;
  /// gamma^{i,j} = sum_{k = max(i,j)}^{n} conj(a_{k-i,m+k}) a_{k-j,m+k}.
  [[nodiscard]] Complex inverse_entry(long i, long j) const;
  /// A* A.
  [[nodiscard]] Matrix inverse() const;

 private:
  IndexWindow window_;
  Matrix a_;
};

/// Full A-table of a Hermitian Toeplitz matrix by Durbin-Levinson, O(size^2).
/// `gamma` must hold at least window.size() lags.
[[nodiscard]] ArTable levinson_ar_table(std::span<const Complex> gamma, IndexWindow window);

/// Hermitian positive-definite covariance matrix over a signed window, with
/// its lower Cholesky factor B (positive diagonal) and A = B^{-1} computed at
/// construction.
class CovarianceMatrix {
 public:
  /// General (not necessarily Toeplitz) path. Throws ValidationError when the
  /// matrix is not Hermitian, PositiveDefinitenessError on a failed pivot.
  CovarianceMatrix(IndexWindow window, Matrix entries);

  static CovarianceMatrix toeplitz(IndexWindow window, std::span<const Complex> gamma);

  [[nodiscard]] const IndexWindow& window() const noexcept { return window_; }
  [[nodiscard]] std::size_t size() const noexcept { return window_.size(); }
  [[nodiscard]] const Matrix& entries() const noexcept { return entries_; }
  [[nodiscard]] Complex entry(long i, long j) const;
  [[nodiscard]] bool is_toeplitz() const noexcept { return !gamma_.empty(); }
  /// gamma_0..gamma_{size-1} for Toeplitz matrices, empty otherwise.
  [[nodiscard]] const ComplexVector& gamma() const noexcept { return gamma_; }
  [[nodiscard]] const Matrix& lower_factor() const noexcept { return b_; }
  [[nodiscard]] const ArTable& ar_table() const noexcept { return a_; }
  /// Gamma^{-1} assembled as A* A.
  [[nodiscard]] Matrix inverse() const { return a_.inverse(); }
  /// Smallest squared Cholesky pivot divided by the scale.
  [[nodiscard]] double min_relative_pivot() const noexcept { return min_pivot_; }

 private:
  CovarianceMatrix(IndexWindow window, Matrix entries, ComplexVector gamma);

  IndexWindow window_;
  Matrix entries_;
  ComplexVector gamma_;
  Matrix b_;
  ArTable a_;
  double min_pivot_ = 0.0;
};

/// Triangular arrays of finite MA coefficients b_{k,m+j} and AR coefficients a_{k,m+j}.
class CoefficientTable {
 public:
  CoefficientTable(IndexWindow window, Matrix b, Matrix a, std::optional<double> levinson_discrepancy);

  [[nodiscard]] const IndexWindow& window() const noexcept { return window_; }
  /// a_{k, m+row}, 0 <= k <= m+row.
  [[nodiscard]] Complex a(long k, long row) const;
  /// b_{k, m+row}.
  [[nodiscard]] Complex b(long k, long row) const;
  [[nodiscard]] const Matrix& a_matrix() const noexcept { return a_; }
  [[nodiscard]] const Matrix& b_matrix() const noexcept { return b_; }
  /// Max-norm gap between the Cholesky and Durbin-Levinson A-tables (Toeplitz input only).
  [[nodiscard]] std::optional<double> levinson_discrepancy() const noexcept { return levinson_discrepancy_; }
  /// max_{i<=j} | sum_{k=i}^{j} b_{j-k,m+j} a_{k-i,m+k} - delta_ij |.
  [[nodiscard]] double mutual_inverse_residual() const;

 private:
  IndexWindow window_;
  Matrix b_;
  Matrix a_;
  std::optional<double> levinson_discrepancy_;
};

[[nodiscard]] CovarianceMatrix build_covariance(const ProcessModel& model, IndexWindow window);
[[nodiscard]] CoefficientTable coefficient_table(const CovarianceMatrix& cov);
/// (i,j)-entry of Gamma^{-1} from the A* A sum.
[[nodiscard]] Complex inverse_entries(const CovarianceMatrix& cov, long i, long j);
/// Relative Frobenius gap between A* A and an LU-based dense inverse.
[[nodiscard]] double inverse_discrepancy(const CovarianceMatrix& cov);

}  // namespace dualpredict

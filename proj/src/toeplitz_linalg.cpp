#include "dualpredict/toeplitz_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dualpredict/kernels.hpp"

namespace dualpredict {

namespace {

void check_in_window(const IndexWindow& window, long i, const char* what) {
  if (!window.contains(i)) {
    throw ValidationError(std::string(what) + " " + std::to_string(i) + " is outside the window {-" +
                          std::to_string(window.m) + ", ..., " + std::to_string(window.n) + "}");
  }
}

Matrix toeplitz_entries(std::span<const Complex> gamma, std::size_t size) {
  const auto s = static_cast<Eigen::Index>(size);
  Matrix out(s, s);
  for (Eigen::Index j = 0; j < s; ++j) {
    for (Eigen::Index i = 0; i < s; ++i) {
      const Eigen::Index lag = i - j;
      out(i, j) = lag >= 0 ? gamma[static_cast<std::size_t>(lag)] : std::conj(gamma[static_cast<std::size_t>(-lag)]);
    }
  }
  return out;
}

}  // namespace

// --- LevinsonDurbin ---------------------------------------------------------

LevinsonDurbin::LevinsonDurbin(ComplexVector gamma) : gamma_(std::move(gamma)) {
  if (gamma_.empty() || !(gamma_.front().real() > 0.0)) {
    throw ValidationError("Durbin-Levinson recursion needs gamma_0 > 0");
  }
  variance_ = gamma_.front().real();
  threshold_ = kSingularity * variance_;
}

void LevinsonDurbin::append_lags(std::span<const Complex> lags) {
  gamma_.insert(gamma_.end(), lags.begin(), lags.end());
}

void LevinsonDurbin::advance() {
  const std::size_t p = phi_.size() + 1;
  if (p >= gamma_.size()) {
    throw ValidationError("Durbin-Levinson recursion needs gamma_" + std::to_string(p));
  }
  Complex num = gamma_[p];
  for (std::size_t k = 1; k < p; ++k) {
    num -= phi_[k - 1] * gamma_[p - k];
  }
  const Complex reflection = num / variance_;
  scratch_.resize(p);
  for (std::size_t k = 1; k < p; ++k) {
    scratch_[k - 1] = phi_[k - 1] - reflection * std::conj(phi_[p - k - 1]);
  }
  scratch_[p - 1] = reflection;
  const double next = variance_ * (1.0 - std::norm(reflection));
  if (!(next > threshold_)) {
    throw PositiveDefinitenessError(static_cast<long>(p), next, threshold_);
  }
  phi_.swap(scratch_);
  variance_ = next;
}

void LevinsonDurbin::advance_to(std::size_t order) {
  while (phi_.size() < order) {
    advance();
  }
}

ComplexVector LevinsonDurbin::normalized_row() const {
  const double scale = 1.0 / std::sqrt(variance_);
  ComplexVector row(phi_.size() + 1);
  row[0] = scale;
  for (std::size_t k = 0; k < phi_.size(); ++k) {
    row[k + 1] = -phi_[k] * scale;
  }
  return row;
}

// --- ArTable ----------------------------------------------------------------

ArTable::ArTable(IndexWindow window, Matrix lower) : window_(window), a_(std::move(lower)) {
  if (static_cast<std::size_t>(a_.rows()) != window_.size() || a_.rows() != a_.cols()) {
    throw ValidationError("A-table dimensions do not match the window");
  }
}

Complex ArTable::entry(long i, long j) const {
  check_in_window(window_, i, "row");
  check_in_window(window_, j, "column");
  return a_(window_.offset(i), window_.offset(j));
}

Complex ArTable::coefficient(long k, long row) const {
  check_in_window(window_, row, "row");
  if (k < 0 || k > window_.m + row) {
    throw ValidationError("coefficient offset " + std::to_string(k) + " out of range for row " + std::to_string(row));
  }
  return a_(window_.offset(row), window_.offset(row - k));
}

Complex ArTable::inverse_entry(long i, long j) const {
  check_in_window(window_, i, "index");
  check_in_window(window_, j, "index");
  const Eigen::Index first = window_.offset(std::max(i, j));
  const Eigen::Index tail = a_.rows() - first;
  // dot() conjugates its first argument.
  return a_.col(window_.offset(i)).tail(tail).dot(a_.col(window_.offset(j)).tail(tail));
}

Matrix ArTable::inverse() const { return kernels::parallel::lower_gram(a_); }

ArTable levinson_ar_table(std::span<const Complex> gamma, IndexWindow window) {
  const std::size_t size = window.size();
  if (gamma.size() < size) {
    throw ValidationError("Durbin-Levinson table needs " + std::to_string(size) + " lags");
  }
  LevinsonDurbin recursion(ComplexVector(gamma.begin(), gamma.begin() + static_cast<std::ptrdiff_t>(size)));
  const auto s = static_cast<Eigen::Index>(size);
  Matrix a = Matrix::Zero(s, s);
  for (Eigen::Index row = 0; row < s; ++row) {
    try {
      recursion.advance_to(static_cast<std::size_t>(row));
    } catch (const PositiveDefinitenessError& e) {
      throw PositiveDefinitenessError(window.position(e.index()), e.pivot(), kSingularity * gamma[0].real());
    }
    const ComplexVector coeffs = recursion.normalized_row();
    for (Eigen::Index k = 0; k <= row; ++k) {
      a(row, row - k) = coeffs[static_cast<std::size_t>(k)];
    }
  }
  return ArTable(window, std::move(a));
}

// --- CovarianceMatrix -------------------------------------------------------

CovarianceMatrix::CovarianceMatrix(IndexWindow window, Matrix entries)
    : CovarianceMatrix(window, std::move(entries), ComplexVector{}) {}

CovarianceMatrix::CovarianceMatrix(IndexWindow window, Matrix entries, ComplexVector gamma)
    : window_(window),
      entries_(std::move(entries)),
      gamma_(std::move(gamma)),
      a_(window, Matrix::Identity(static_cast<Eigen::Index>(window.size()), static_cast<Eigen::Index>(window.size()))) {
  const auto s = static_cast<Eigen::Index>(window_.size());
  if (entries_.rows() != s || entries_.cols() != s) {
    throw ValidationError("covariance matrix dimensions do not match the window");
  }
  const double magnitude = entries_.cwiseAbs().maxCoeff();
  if (!std::isfinite(magnitude)) {
    throw ValidationError("covariance matrix has non-finite entries");
  }
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * magnitude) {
    throw ValidationError("covariance matrix is not Hermitian");
  }
  const double scale = gamma_.empty() ? entries_.diagonal().real().maxCoeff() : gamma_.front().real();
  const double threshold = kSingularity * scale;
  const kernels::FactorStatus status = kernels::parallel::cholesky(entries_, threshold, b_);
  if (!status.ok) {
    throw PositiveDefinitenessError(window_.position(status.failing_offset), status.pivot, threshold);
  }
  min_pivot_ = b_.diagonal().real().cwiseAbs2().minCoeff() / scale;
  a_ = ArTable(window_, kernels::parallel::lower_inverse(b_));
}

CovarianceMatrix CovarianceMatrix::toeplitz(IndexWindow window, std::span<const Complex> gamma) {
  const std::size_t size = window.size();
  if (gamma.size() < size) {
    throw ValidationError("Toeplitz covariance needs " + std::to_string(size) + " lags");
  }
  if (!(gamma[0].real() > 0.0)) {
    throw ValidationError("gamma_0 must be positive");
  }
  return CovarianceMatrix(window, toeplitz_entries(gamma, size),
                          ComplexVector(gamma.begin(), gamma.begin() + static_cast<std::ptrdiff_t>(size)));
}

Complex CovarianceMatrix::entry(long i, long j) const {
  check_in_window(window_, i, "index");
  check_in_window(window_, j, "index");
  return entries_(window_.offset(i), window_.offset(j));
}

// --- CoefficientTable -------------------------------------------------------

CoefficientTable::CoefficientTable(IndexWindow window, Matrix b, Matrix a, std::optional<double> levinson_discrepancy)
    : window_(window), b_(std::move(b)), a_(std::move(a)), levinson_discrepancy_(levinson_discrepancy) {}

Complex CoefficientTable::a(long k, long row) const {
  check_in_window(window_, row, "row");
  if (k < 0 || k > window_.m + row) {
    throw ValidationError("coefficient offset out of range");
  }
  return a_(window_.offset(row), window_.offset(row - k));
}

Complex CoefficientTable::b(long k, long row) const {
  check_in_window(window_, row, "row");
  if (k < 0 || k > window_.m + row) {
    throw ValidationError("coefficient offset out of range");
  }
  return b_(window_.offset(row), window_.offset(row - k));
}

double CoefficientTable::mutual_inverse_residual() const {
  const Matrix product = b_.triangularView<Eigen::Lower>() * a_;
  return (product - Matrix::Identity(product.rows(), product.cols())).cwiseAbs().maxCoeff();
}

// --- free functions ---------------------------------------------------------

CovarianceMatrix build_covariance(const ProcessModel& model, IndexWindow window) {
  const ComplexVector gamma = autocovariances(model, window.size() - 1);
  return CovarianceMatrix::toeplitz(window, gamma);
}

CoefficientTable coefficient_table(const CovarianceMatrix& cov) {
  std::optional<double> discrepancy;
  if (cov.is_toeplitz()) {
    const ArTable levinson = levinson_ar_table(cov.gamma(), cov.window());
    discrepancy = (levinson.matrix() - cov.ar_table().matrix()).cwiseAbs().maxCoeff();
  }
  return CoefficientTable(cov.window(), cov.lower_factor(), cov.ar_table().matrix(), discrepancy);
}

Complex inverse_entries(const CovarianceMatrix& cov, long i, long j) { return cov.ar_table().inverse_entry(i, j); }

double inverse_discrepancy(const CovarianceMatrix& cov) {
  const Matrix dense = cov.entries().partialPivLu().inverse();
  return (cov.inverse() - dense).norm() / dense.norm();
}

}  // namespace dualpredict

#include "dualpredict/kernels.hpp"

#include <cmath>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dualpredict::kernels {

namespace {

// Below this size the threading overhead dominates.
constexpr Eigen::Index kParallelThreshold = 128;

double grid_weight(std::size_t i, std::size_t count) {
  return (i == 0 || i + 1 == count) ? 0.5 : 1.0;
}

double grid_point(std::size_t i, std::size_t count) {
  return -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(i) /
                                 static_cast<double>(count - 1);
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace serial {

FactorStatus cholesky(const Matrix& hermitian, double threshold, Matrix& lower) {
  const Eigen::Index size = hermitian.rows();
  lower = Matrix::Zero(size, size);
  for (Eigen::Index j = 0; j < size; ++j) {
    double pivot = hermitian(j, j).real();
    for (Eigen::Index k = 0; k < j; ++k) {
      pivot -= std::norm(lower(j, k));
    }
    if (!(pivot > threshold)) {
      return {false, j, pivot};
    }
    const double diag = std::sqrt(pivot);
    lower(j, j) = diag;
    for (Eigen::Index i = j + 1; i < size; ++i) {
      Complex sum = hermitian(i, j);
      for (Eigen::Index k = 0; k < j; ++k) {
        sum -= lower(i, k) * std::conj(lower(j, k));
      }
      lower(i, j) = sum / diag;
    }
  }
  return {};
}

Matrix lower_inverse(const Matrix& lower) {
  const Eigen::Index size = lower.rows();
  Matrix inv = Matrix::Zero(size, size);
  for (Eigen::Index j = 0; j < size; ++j) {
    inv(j, j) = 1.0 / lower(j, j);
    for (Eigen::Index i = j + 1; i < size; ++i) {
      Complex sum = 0.0;
      for (Eigen::Index k = j; k < i; ++k) {
        sum += lower(i, k) * inv(k, j);
      }
      inv(i, j) = -sum / lower(i, i);
    }
  }
  return inv;
}

Matrix lower_gram(const Matrix& lower) {
  const Eigen::Index size = lower.rows();
  Matrix gram(size, size);
  for (Eigen::Index j = 0; j < size; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      Complex sum = 0.0;
      for (Eigen::Index k = j; k < size; ++k) {
        sum += std::conj(lower(k, i)) * lower(k, j);
      }
      gram(i, j) = sum;
      gram(j, i) = std::conj(sum);
    }
  }
  return gram;
}

Complex trapezoid_fourier(std::span<const double> values, long lag) {
  const std::size_t count = values.size();
  const double step = 2.0 * std::numbers::pi / static_cast<double>(count - 1);
  Complex sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double angle = -static_cast<double>(lag) * grid_point(i, count);
    sum += grid_weight(i, count) * values[i] * Complex(std::cos(angle), std::sin(angle));
  }
  return sum * step / (2.0 * std::numbers::pi);
}

}  // namespace serial

namespace parallel {

FactorStatus cholesky(const Matrix& hermitian, double threshold, Matrix& lower) {
  const Eigen::Index size = hermitian.rows();
  if (size < kParallelThreshold) {
    return serial::cholesky(hermitian, threshold, lower);
  }
  lower = Matrix::Zero(size, size);
  for (Eigen::Index j = 0; j < size; ++j) {
    const double pivot = hermitian(j, j).real() - lower.row(j).head(j).squaredNorm();
    if (!(pivot > threshold)) {
      return {false, j, pivot};
    }
    const double diag = std::sqrt(pivot);
    lower(j, j) = diag;
    const Eigen::Index rest = size - j - 1;
    if (rest == 0) {
      break;
    }
    // Column j below the diagonal: hermitian(:, j) - L(:, 0:j) * conj(L(j, 0:j)).
    const Vector row_j = lower.row(j).head(j).transpose();
#pragma omp parallel for schedule(static) if (rest >= kParallelThreshold)
    for (Eigen::Index i = j + 1; i < size; ++i) {
      const Complex dot = row_j.dot(lower.row(i).head(j).transpose());
      lower(i, j) = (hermitian(i, j) - dot) / diag;
    }
  }
  return {};
}

Matrix lower_inverse(const Matrix& lower) {
  const Eigen::Index size = lower.rows();
  if (size < kParallelThreshold) {
    return serial::lower_inverse(lower);
  }
  Matrix inv = Matrix::Zero(size, size);
  // Columns of the inverse are independent forward substitutions.
#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index j = 0; j < size; ++j) {
    inv(j, j) = 1.0 / lower(j, j);
    for (Eigen::Index i = j + 1; i < size; ++i) {
      const Complex sum = (lower.row(i).segment(j, i - j) * inv.col(j).segment(j, i - j)).value();
      inv(i, j) = -sum / lower(i, i);
    }
  }
  return inv;
}

Matrix lower_gram(const Matrix& lower) {
  const Eigen::Index size = lower.rows();
  if (size < kParallelThreshold) {
    return serial::lower_gram(lower);
  }
  Matrix gram(size, size);
#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index j = 0; j < size; ++j) {
    const Eigen::Index tail = size - j;
    for (Eigen::Index i = 0; i <= j; ++i) {
      // dot() conjugates its first argument.
      const Complex sum = lower.col(i).tail(tail).dot(lower.col(j).tail(tail));
      gram(i, j) = sum;
      gram(j, i) = std::conj(sum);
    }
  }
  return gram;
}

Complex trapezoid_fourier(std::span<const double> values, long lag) {
  const std::size_t count = values.size();
  const double step = 2.0 * std::numbers::pi / static_cast<double>(count - 1);
  double re = 0.0;
  double im = 0.0;
  const auto total = static_cast<long long>(count);
#pragma omp parallel for reduction(+ : re, im) schedule(static) if (count >= 4096)
  for (long long i = 0; i < total; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const double angle = -static_cast<double>(lag) * grid_point(idx, count);
    const double w = grid_weight(idx, count) * values[idx];
    re += w * std::cos(angle);
    im += w * std::sin(angle);
  }
  return Complex(re, im) * step / (2.0 * std::numbers::pi);
}

}  // namespace parallel

}  // namespace dualpredict::kernels

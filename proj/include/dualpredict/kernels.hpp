#pragma once

// Dense kernels behind the covariance factorizations. Every kernel has a plain
// serial reference in kernels::serial and an OpenMP version in
// kernels::parallel; the library calls the parallel ones and the tests hold
// them to the serial results.

#include <cstddef>
#include <span>

#include "dualpredict/types.hpp"

namespace dualpredict::kernels {

struct FactorStatus {
  bool ok = true;
  Eigen::Index failing_offset = -1;
  double pivot = 0.0;
};

namespace serial {

/// Lower Cholesky factor with positive real diagonal. Writes into `lower`;
/// stops at the first squared pivot <= threshold.
FactorStatus cholesky(const Matrix& hermitian, double threshold, Matrix& lower);

/// Inverse of a lower-triangular matrix with nonzero diagonal.
Matrix lower_inverse(const Matrix& lower);

/// A* A for lower-triangular A, entry (i,j) = sum_{k >= max(i,j)} conj(A(k,i)) A(k,j).
Matrix lower_gram(const Matrix& lower);

/// (1/2pi) * trapezoid( exp(-i k lambda) f(lambda) ) on an inclusive uniform grid over [-pi, pi].
Complex trapezoid_fourier(std::span<const double> values, long lag);

}  // namespace serial

namespace parallel {

FactorStatus cholesky(const Matrix& hermitian, double threshold, Matrix& lower);
Matrix lower_inverse(const Matrix& lower);
Matrix lower_gram(const Matrix& lower);
Complex trapezoid_fourier(std::span<const double> values, long lag);

}  // namespace parallel

/// Number of OpenMP threads available (1 without OpenMP).
int max_threads();

}  // namespace dualpredict::kernels

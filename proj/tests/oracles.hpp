#pragma once

// Independent reference computations for the test suites. Nothing here may
// call into the factorization or duality code paths it is used to check.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "dualpredict/types.hpp"

namespace dualpredict::oracle {

/// Dense inverse by full-pivot LU.
inline Matrix dense_inverse(const Matrix& m) { return m.fullPivLu().inverse(); }

/// Toeplitz matrix (gamma_{i-j}) from gamma_0..gamma_{size-1}.
inline Matrix toeplitz(const ComplexVector& gamma, std::size_t size) {
  const auto s = static_cast<Eigen::Index>(size);
  Matrix out(s, s);
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = 0; j < s; ++j) {
      const Eigen::Index lag = i - j;
      out(i, j) = lag >= 0 ? gamma[static_cast<std::size_t>(lag)] : std::conj(gamma[static_cast<std::size_t>(-lag)]);
    }
  }
  return out;
}

/// gamma_k = sigma2 sum_j psi_{j+k} conj(psi_j), psi-weights by direct recursion, truncated at `terms`.
inline ComplexVector arma_autocovariance_by_psi(const ComplexVector& ar, const ComplexVector& ma, double sigma2,
                                                std::size_t max_lag, std::size_t terms = 20000) {
  std::vector<Complex> psi(terms + max_lag + 1, 0.0);
  for (std::size_t j = 0; j < psi.size(); ++j) {
    Complex v = j == 0 ? Complex(1.0) : (j <= ma.size() ? ma[j - 1] : Complex(0.0));
    for (std::size_t i = 1; i <= ar.size() && i <= j; ++i) {
      v += ar[i - 1] * psi[j - i];
    }
    psi[j] = v;
  }
  ComplexVector gamma(max_lag + 1, 0.0);
  for (std::size_t k = 0; k <= max_lag; ++k) {
    for (std::size_t j = 0; j < terms; ++j) {
      gamma[k] += sigma2 * psi[j + k] * std::conj(psi[j]);
    }
  }
  return gamma;
}

/// Normal equations solved through a full-pivot LU of the (K u {l}) block:
/// returns sigma^2 = 1 / (l,l)-entry of the inverse, and the predictor
/// coefficients read off the last row of that inverse.
struct DensePrediction {
  std::vector<Complex> alpha;
  double sigma2;
};

inline DensePrediction dense_prediction(const Matrix& cov, const std::vector<Eigen::Index>& observed,
                                        Eigen::Index target) {
  std::vector<Eigen::Index> idx = observed;
  idx.push_back(target);
  const auto s = static_cast<Eigen::Index>(idx.size());
  Matrix block(s, s);
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = 0; j < s; ++j) {
      block(i, j) = cov(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
  }
  const Matrix inv = dense_inverse(block);
  const Complex corner = inv(s - 1, s - 1);
  DensePrediction out;
  out.sigma2 = 1.0 / corner.real();
  // Row l of the inverse is proportional to the error coefficients: (l,k)/(l,l) = -alpha_k.
  for (Eigen::Index k = 0; k + 1 < s; ++k) {
    out.alpha.push_back(-inv(s - 1, k) / corner);
  }
  return out;
}

/// Seeded Hermitian PD matrices Q diag(u) Q* with u ~ U[0.1, 1] and Q from the
/// QR factorization of a complex Gaussian matrix.
class RandomHermitian {
 public:
  explicit RandomHermitian(std::uint64_t seed) : engine_(seed) {}

  Matrix operator()(Eigen::Index size) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform(0.1, 1.0);
    Matrix g(size, size);
    for (Eigen::Index j = 0; j < size; ++j) {
      for (Eigen::Index i = 0; i < size; ++i) {
        g(i, j) = Complex(normal(engine_), normal(engine_));
      }
    }
    const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
    Eigen::VectorXd d(size);
    for (Eigen::Index i = 0; i < size; ++i) {
      d(i) = uniform(engine_);
    }
    Matrix out = q * d.cast<Complex>().asDiagonal() * q.adjoint();
    return (out + out.adjoint()) / 2.0;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dualpredict::oracle

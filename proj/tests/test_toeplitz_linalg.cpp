#include <cmath>

#include <gtest/gtest.h>

#include "dualpredict/duality.hpp"
#include "dualpredict/toeplitz_linalg.hpp"
#include "oracles.hpp"

namespace dualpredict {
namespace {

TEST(IndexWindow, SignedOffsets) {
  const IndexWindow w(3, 2);
  EXPECT_EQ(w.size(), 6u);
  EXPECT_EQ(w.offset(-3), 0);
  EXPECT_EQ(w.offset(0), 3);
  EXPECT_EQ(w.position(5), 2);
  EXPECT_FALSE(w.contains(3));
  EXPECT_THROW(IndexWindow(-1, 0), ValidationError);
}

TEST(BuildCovariance, WhiteNoiseIsIdentity) {
  const auto cov = build_covariance(ProcessModel::white_noise(), IndexWindow(1, 1));
  EXPECT_TRUE(cov.entries().isApprox(Matrix::Identity(3, 3)));
  EXPECT_TRUE(cov.is_toeplitz());
}

TEST(BuildCovariance, Ar1TwoByTwo) {
  const auto cov = build_covariance(ProcessModel::ar1(0.5), IndexWindow(1, 0));
  EXPECT_NEAR(cov.entry(-1, -1).real(), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(cov.entry(0, -1).real(), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(cov.entry(-1, 0).real(), 2.0 / 3.0, 1e-15);
}

TEST(BuildCovariance, SingularExplicitSequenceNamesPivot) {
  const ProcessModel model = AutocovarianceModel({1.0, 1.0, 1.0});
  try {
    (void)build_covariance(model, IndexWindow(2, 0));
    FAIL() << "expected PositiveDefinitenessError";
  } catch (const PositiveDefinitenessError& e) {
    EXPECT_EQ(e.index(), -1);
  }
  EXPECT_THROW((void)levinson_ar_table(ComplexVector{1.0, 1.0, 1.0}, IndexWindow(2, 0)), PositiveDefinitenessError);
}

TEST(BuildCovariance, RejectsNonHermitian) {
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = 0.5;
  EXPECT_THROW(CovarianceMatrix(IndexWindow(1, 0), m), ValidationError);
}

TEST(BuildCovariance, FactorInvariants) {
  const ProcessModel model = ArmaModel({Complex(0.5, 0.3)}, {Complex(0.2, -0.6)}, 2.0);
  const auto cov = build_covariance(model, IndexWindow(20, 9));
  const Matrix& b = cov.lower_factor();
  EXPECT_LT((b * b.adjoint() - cov.entries()).norm() / cov.entries().norm(), 1e-10);
  const Matrix& a = cov.ar_table().matrix();
  EXPECT_LT((a * b - Matrix::Identity(30, 30)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_TRUE((b.diagonal().real().array() > 0.0).all());
  EXPECT_GT(cov.min_relative_pivot(), 0.0);
}

TEST(CoefficientTable, WhiteNoiseIsKronecker) {
  const auto table = coefficient_table(build_covariance(ProcessModel::white_noise(), IndexWindow(3, 2)));
  for (long row = -3; row <= 2; ++row) {
    for (long k = 0; k <= 3 + row; ++k) {
      EXPECT_EQ(table.a(k, row), Complex(k == 0 ? 1.0 : 0.0));
      EXPECT_EQ(table.b(k, row), Complex(k == 0 ? 1.0 : 0.0));
    }
  }
}

TEST(CoefficientTable, Ar1BottomRowMatchesNormalEquations) {
  const auto cov = build_covariance(ProcessModel::ar1(0.5), IndexWindow(2, 0));
  const auto table = coefficient_table(cov);
  EXPECT_NEAR(std::abs(table.a(0, 0) - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(table.a(1, 0) + 0.5), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(table.a(2, 0)), 0.0, 1e-14);
  // Oracle: one-step predictor of X_0 from X_{-1}, X_{-2} by dense normal equations.
  const auto dense = oracle::dense_prediction(cov.entries(), {0, 1}, 2);
  EXPECT_NEAR(std::abs(dense.alpha[1] - 0.5), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(table.a(1, 0) * std::sqrt(dense.sigma2) + dense.alpha[1]), 0.0, 1e-14);
}

TEST(CoefficientTable, DiagonalIsOneStepPredictionVariance) {
  const ProcessModel model = ArmaModel({Complex(0.3, 0.4)}, {Complex(0.5, 0.1)}, 1.0);
  const auto cov = build_covariance(model, IndexWindow(6, 3));
  const auto table = coefficient_table(cov);
  for (long j = -5; j <= 3; ++j) {
    std::vector<Eigen::Index> past;
    for (long k = -6; k < j; ++k) {
      past.push_back(cov.window().offset(k));
    }
    const auto dense = oracle::dense_prediction(cov.entries(), past, cov.window().offset(j));
    EXPECT_NEAR(1.0 / std::norm(table.a(0, j)), dense.sigma2, 1e-12) << j;
    EXPECT_NEAR(table.b(0, j).real(), 1.0 / table.a(0, j).real(), 1e-12);
  }
}

TEST(CoefficientTable, CholeskyAgreesWithLevinsonAndMutualInverse) {
  const ProcessModel model = ArmaModel({Complex(0.6, -0.2), Complex(0.1, 0.1)}, {Complex(0.4, 0.4)}, 0.7);
  const auto table = coefficient_table(build_covariance(model, IndexWindow(150, 40)));
  ASSERT_TRUE(table.levinson_discrepancy().has_value());
  EXPECT_LT(*table.levinson_discrepancy(), 1e-9);
  EXPECT_LT(table.mutual_inverse_residual(), 1e-10);
}

TEST(CoefficientTable, GeneralMatrixHasNoLevinsonCrossCheck) {
  oracle::RandomHermitian random(7);
  const CovarianceMatrix cov(IndexWindow(2, 2), random(5));
  EXPECT_FALSE(coefficient_table(cov).levinson_discrepancy().has_value());
}

TEST(CoefficientTable, Ma1ConvergesToTheoreticalAr) {
  // |a_{k,m+k} - a_k| shrinks as the window grows.
  const auto model = ProcessModel::ma1(0.4);
  const auto theory = theoretical_coefficients(model, 4);
  double previous = 1.0;
  for (const long m : {2, 4, 8, 16, 32}) {
    const auto table = coefficient_table(build_covariance(model, IndexWindow(m, 3)));
    double gap = 0.0;
    for (long k = 0; k <= 3; ++k) {
      gap = std::max(gap, std::abs(table.a(k, k) - theory.a[static_cast<std::size_t>(k)]));
    }
    EXPECT_LT(gap, previous) << m;
    previous = gap;
  }
  EXPECT_LT(previous, 1e-12);
  EXPECT_NE(coefficient_table(build_covariance(model, IndexWindow(2, 0))).a(1, 0), Complex(-0.4));
}

TEST(InverseEntries, WhiteNoiseAndCorner) {
  const auto white = build_covariance(ProcessModel::white_noise(), IndexWindow(2, 2));
  EXPECT_EQ(inverse_entries(white, 1, 1), Complex(1.0));
  EXPECT_EQ(inverse_entries(white, 1, -1), Complex(0.0));

  const ProcessModel model = ArmaModel({Complex(0.2, 0.5)}, {}, 1.0);
  const auto cov = build_covariance(model, IndexWindow(4, 3));
  const Matrix dense = oracle::dense_inverse(cov.entries());
  const Complex corner = inverse_entries(cov, 3, 3);
  EXPECT_NEAR(std::abs(corner - std::norm(cov.ar_table().coefficient(0, 3))), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(corner - dense(7, 7)), 0.0, 1e-12);
  EXPECT_THROW((void)inverse_entries(cov, 4, 0), ValidationError);
}

TEST(InverseEntries, Ar1CentreEntry) {
  const auto cov = build_covariance(ProcessModel::ar1(0.5), IndexWindow(1, 1));
  const Matrix dense = oracle::dense_inverse(cov.entries());
  EXPECT_NEAR(std::abs(inverse_entries(cov, 0, 0) - dense(1, 1)), 0.0, 1e-13);
  EXPECT_NEAR(inverse_entries(cov, 0, 0).real(), 1.25, 1e-13);
}

TEST(InverseEntries, AStarAMatchesDenseInverseUpTo512) {
  const ProcessModel model = ArmaModel({Complex(0.5, 0.4)}, {Complex(-0.3, 0.2)}, 1.0);
  for (const long half : {8L, 100L, 255L}) {
    const auto cov = build_covariance(model, IndexWindow(half, half + 1));
    EXPECT_LT(inverse_discrepancy(cov), 1e-9) << half;
  }
}

TEST(LevinsonDurbin, MatchesDenseOneStepPredictor) {
  const ProcessModel model = ArmaModel({Complex(0.1, 0.7)}, {Complex(0.3, 0.0)}, 1.0);
  const ComplexVector gamma = autocovariances(model, 12);
  LevinsonDurbin recursion(gamma);
  recursion.advance_to(6);
  // Predict X_6 from X_0..X_5 (offsets in the Toeplitz matrix).
  const Matrix toeplitz = oracle::toeplitz(gamma, 7);
  const auto dense = oracle::dense_prediction(toeplitz, {0, 1, 2, 3, 4, 5}, 6);
  EXPECT_NEAR(recursion.innovation_variance(), dense.sigma2, 1e-12);
  for (std::size_t k = 1; k <= 6; ++k) {
    EXPECT_NEAR(std::abs(recursion.coefficients()[k - 1] - dense.alpha[6 - k]), 0.0, 1e-12) << k;
  }
  EXPECT_THROW(LevinsonDurbin(ComplexVector{}), ValidationError);
  LevinsonDurbin short_recursion(ComplexVector{1.0, 0.5});
  short_recursion.advance();
  EXPECT_THROW(short_recursion.advance(), ValidationError);
}

}  // namespace
}  // namespace dualpredict

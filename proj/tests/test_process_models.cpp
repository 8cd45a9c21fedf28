#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "dualpredict/process_models.hpp"
#include "dualpredict/toeplitz_linalg.hpp"
#include "oracles.hpp"

namespace dualpredict {
namespace {

TEST(Autocovariance, WhiteNoise) {
  const auto model = ProcessModel::white_noise();
  EXPECT_DOUBLE_EQ(autocovariance(model, 0).real(), 1.0);
  EXPECT_EQ(autocovariance(model, 3), Complex(0.0));
}

TEST(Autocovariance, Ar1MatchesGeometricOracle) {
  const auto model = ProcessModel::ar1(0.5);
  // gamma_k = phi^|k| / (1 - phi^2)
  for (long k = -6; k <= 6; ++k) {
    const double expected = std::pow(0.5, std::labs(k)) / 0.75;
    EXPECT_NEAR(autocovariance(model, k).real(), expected, 1e-14) << k;
    EXPECT_NEAR(autocovariance(model, k).imag(), 0.0, 1e-14);
  }
  EXPECT_NEAR(autocovariance(model, 2).real(), 1.0 / 3.0, 1e-15);
}

TEST(Autocovariance, Ma1ByDirectExpansion) {
  const auto model = ProcessModel::ma1(0.4);
  EXPECT_NEAR(autocovariance(model, 0).real(), 1.16, 1e-15);
  EXPECT_NEAR(autocovariance(model, 1).real(), 0.4, 1e-15);
  EXPECT_NEAR(autocovariance(model, -1).real(), 0.4, 1e-15);
  EXPECT_EQ(autocovariance(model, 2), Complex(0.0));
}

TEST(Autocovariance, ComplexArmaMatchesPsiSumOracle) {
  const ComplexVector ar{Complex(0.5, 0.3), Complex(-0.2, 0.1)};
  const ComplexVector ma{Complex(0.3, -0.4), Complex(0.1, 0.2)};
  const ProcessModel model = ArmaModel(ar, ma, 1.7);
  const ComplexVector expected = oracle::arma_autocovariance_by_psi(ar, ma, 1.7, 12, 4000);
  const ComplexVector actual = autocovariances(model, 12);
  for (std::size_t k = 0; k <= 12; ++k) {
    EXPECT_NEAR(std::abs(actual[k] - expected[k]), 0.0, 1e-12) << k;
  }
}

TEST(Autocovariance, HermitianSymmetry) {
  const ProcessModel model = ArmaModel({Complex(0.4, 0.4)}, {Complex(0.2, -0.5)}, 2.0);
  for (long k = 0; k <= 8; ++k) {
    EXPECT_NEAR(std::abs(autocovariance(model, -k) - std::conj(autocovariance(model, k))), 0.0, 1e-15);
  }
}

TEST(Autocovariance, ExplicitLagOutOfRange) {
  const ProcessModel model = AutocovarianceModel({1.0, 0.5, 0.25});
  EXPECT_NEAR(autocovariance(model, -2).real(), 0.25, 0.0);
  EXPECT_THROW((void)autocovariance(model, 3), ValidationError);
}

TEST(Autocovariance, SpectrumQuadratureOfAr1Density) {
  const ArmaModel ar1({0.5}, {}, 1.0);
  std::vector<double> values(2049);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = ar1.spectral_density(-std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(i) / 2048.0);
  }
  const ProcessModel model = SpectrumModel(values);
  for (long k = 0; k <= 4; ++k) {
    EXPECT_NEAR(std::abs(autocovariance(model, k) - Complex(std::pow(0.5, k) / 0.75)), 0.0, 1e-12) << k;
  }
}

TEST(ProcessModel, RejectsNonCausalAndBadInputs) {
  EXPECT_THROW(ArmaModel({1.0}, {}, 1.0), ValidationError);
  EXPECT_THROW(ArmaModel({Complex(0.0, 1.2)}, {}, 1.0), ValidationError);
  EXPECT_THROW(ArmaModel({0.5}, {}, 0.0), ValidationError);
  EXPECT_THROW(SpectrumModel({1.0, 0.0, 1.0}), ValidationError);
  EXPECT_THROW(AutocovarianceModel({Complex(1.0, 0.5)}), ValidationError);
  EXPECT_THROW(AutocovarianceModel({}), ValidationError);
}

TEST(TheoreticalCoefficients, WhiteNoise) {
  const auto c = theoretical_coefficients(ProcessModel::white_noise(), 4);
  EXPECT_EQ(c.b, (ComplexVector{1.0, 0.0, 0.0, 0.0}));
  EXPECT_EQ(c.a, (ComplexVector{1.0, 0.0, 0.0, 0.0}));
}

TEST(TheoreticalCoefficients, Ar1) {
  const auto c = theoretical_coefficients(ProcessModel::ar1(0.5), 4);
  const ComplexVector b{1.0, 0.5, 0.25, 0.125};
  const ComplexVector a{1.0, -0.5, 0.0, 0.0};
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(std::abs(c.b[k] - b[k]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(c.a[k] - a[k]), 0.0, 1e-15);
  }
  EXPECT_LT(c.convolution_residual(), 1e-12);
}

TEST(TheoreticalCoefficients, Ma1HasGeometricAr) {
  const auto c = theoretical_coefficients(ProcessModel::ma1(0.4), 4);
  const ComplexVector a{1.0, -0.4, 0.16, -0.064};
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(std::abs(c.a[k] - a[k]), 0.0, 1e-15);
  }
  EXPECT_NEAR(c.b[1].real(), 0.4, 1e-15);
  EXPECT_EQ(c.b[2], Complex(0.0));
}

TEST(TheoreticalCoefficients, InnovationScaleAndNormalization) {
  const ProcessModel model = ArmaModel({Complex(0.3, 0.2)}, {Complex(-0.1, 0.4)}, 4.0);
  const auto c = theoretical_coefficients(model, 30);
  EXPECT_NEAR(c.b[0].real(), 2.0, 1e-15);
  EXPECT_EQ(c.b[0].imag(), 0.0);
  EXPECT_LT(c.convolution_residual(), 1e-12);
}

TEST(TheoreticalCoefficients, RejectsNonInvertibleMa) {
  EXPECT_THROW((void)theoretical_coefficients(ProcessModel::ma1(2.0), 4), ValidationError);
}

TEST(TheoreticalCoefficients, ArmaAgreesWithFiniteSectionLimit) {
  // Spectral radius <= 0.9 on both polynomials.
  const ComplexVector ar{Complex(0.6, 0.2), Complex(-0.1, 0.0)};
  const ComplexVector ma{Complex(0.5, -0.3)};
  const ArmaModel arma(ar, ma, 1.3);
  ASSERT_LE(arma.ar_spectral_radius(), 0.9);
  ASSERT_LE(arma.ma_spectral_radius(), 0.9);
  const auto closed = theoretical_coefficients(ProcessModel(arma), 12);
  const ProcessModel explicit_model = AutocovarianceModel(arma.autocovariances(400));
  const auto limit = theoretical_coefficients(explicit_model, 12);
  EXPECT_GE(limit.window, 64u);
  for (std::size_t k = 0; k < 12; ++k) {
    EXPECT_NEAR(std::abs(closed.a[k] - limit.a[k]), 0.0, 1e-8) << k;
    EXPECT_NEAR(std::abs(closed.b[k] - limit.b[k]), 0.0, 1e-8) << k;
  }
  EXPECT_LT(limit.convolution_residual(), 1e-12);
}

TEST(TheoreticalCoefficients, FiniteSectionLimitReportsNonConvergence) {
  // MA(1) with a unit root: a_{k,j} converges like 1/j, far slower than the policy allows.
  const ProcessModel model = AutocovarianceModel(ArmaModel({}, {1.0}, 1.0).autocovariances(300));
  try {
    (void)theoretical_coefficients(model, 4);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.achieved(), 1e-10);
  }
}

TEST(InverseAutocovariance, WhiteNoiseAndAr1) {
  EXPECT_NEAR(inverse_autocovariance(ProcessModel::white_noise(), 0, 16).real(), 1.0, 1e-15);
  EXPECT_EQ(inverse_autocovariance(ProcessModel::white_noise(), 1, 16), Complex(0.0));
  const auto ar1 = ProcessModel::ar1(0.5);
  EXPECT_NEAR(inverse_autocovariance(ar1, 0, 16).real(), 1.25, 1e-15);
  EXPECT_NEAR(inverse_autocovariance(ar1, 1, 16).real(), -0.5, 1e-15);
  EXPECT_NEAR(inverse_autocovariance(ar1, -1, 16).real(), -0.5, 1e-15);
  EXPECT_EQ(inverse_autocovariance(ar1, 2, 16), Complex(0.0));
}

TEST(InverseAutocovariance, SeriesMatchesQuadratureForArma) {
  const ProcessModel model = ArmaModel({Complex(0.5, 0.2)}, {Complex(0.3, -0.3)}, 1.5);
  for (long k = -3; k <= 3; ++k) {
    const Complex series = inverse_autocovariance(model, k, 200);
    const Complex quad = inverse_autocovariance_quadrature(model, k);
    EXPECT_NEAR(std::abs(series - quad), 0.0, 1e-8) << k;
  }
}

TEST(InverseAutocovariance, TailMassTooLarge) {
  // a_k = (-0.99)^k needs far more than 10 terms.
  EXPECT_THROW((void)inverse_autocovariance(ProcessModel::ma1(0.99), 0, 10), ConvergenceError);
}

}  // namespace
}  // namespace dualpredict

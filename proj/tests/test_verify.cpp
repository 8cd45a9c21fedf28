#include <gtest/gtest.h>

#include "dualpredict/verify.hpp"

namespace dualpredict {
namespace {

TEST(SeededRandom, UniformRangeAndMoments) {
  SeededRandom rng(7);
  double sum = 0.0;
  double squares = 0.0;
  constexpr int kDraws = 20000;
  for (int i = 0; i < kDraws; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double z = rng.normal();
    sum += z;
    squares += z * z;
  }
  EXPECT_NEAR(sum / kDraws, 0.0, 0.05);
  EXPECT_NEAR(squares / kDraws, 1.0, 0.05);
}

TEST(RandomHermitian, SpectrumInRange) {
  SeededRandom rng(3);
  const Matrix m = random_hermitian_pd(rng, 9);
  EXPECT_LT((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues();
  EXPECT_GE(ev.minCoeff(), 0.1 - 1e-12);
  EXPECT_LE(ev.maxCoeff(), 1.0 + 1e-12);
}

TEST(Verification, SmallCorpusPassesAndIsDeterministic) {
  VerifyOptions options;
  options.instances = 25;
  options.max_size = 7;
  const VerifySummary first = run_verification(options);
  const VerifySummary second = run_verification(options);
  EXPECT_EQ(first.instances, 25u);
  EXPECT_GT(first.partitions, 25u);
  EXPECT_TRUE(first.passed(options));
  EXPECT_EQ(first.partitions, second.partitions);
  EXPECT_EQ(first.max_product_deviation, second.max_product_deviation);
  EXPECT_EQ(first.max_alpha_deviation, second.max_alpha_deviation);

  options.seed = 43;
  EXPECT_NE(run_verification(options).max_alpha_deviation, first.max_alpha_deviation);
}

TEST(Verification, RejectsBadSizes) {
  VerifyOptions options;
  options.min_size = 5;
  options.max_size = 4;
  EXPECT_THROW((void)run_verification(options), ValidationError);
}

}  // namespace
}  // namespace dualpredict

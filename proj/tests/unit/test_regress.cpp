#include "test_util.hpp"

#include "varsel/gmm.hpp"
#include "varsel/regress.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace varsel;

namespace {

double gaussian_loglik(double rss, int n) {
  const double s2 = rss / n;
  return -0.5 * n * (std::log(2.0 * std::numbers::pi * s2) + 1.0);
}

}  // namespace

TEST(RegBic, MatchesNormalEquations) {
  const Matrix X = fixtures::random_normal(40, 3, 1);
  Vector y = 1.0 + 2.0 * X.col(0).array() - 0.5 * X.col(2).array();
  y += 0.3 * fixtures::random_normal(40, 1, 2).col(0);
  const RegressionFit fit = reg_bic(y, X);
  ASSERT_TRUE(fit.ok());

  Matrix A(40, 4);
  A.col(0).setOnes();
  A.rightCols(3) = X;
  const Vector beta = (A.transpose() * A).ldlt().solve(A.transpose() * y);
  const double rss = (y - A * beta).squaredNorm();
  EXPECT_TRUE(fit.coefficients.isApprox(beta, 1e-10));
  EXPECT_NEAR(fit.sigma2, rss / 40.0, 1e-12);
  EXPECT_NEAR(fit.loglik, gaussian_loglik(rss, 40), 1e-9);
  EXPECT_EQ(fit.df, 5);
  EXPECT_NEAR(fit.bic, 2.0 * fit.loglik - 5.0 * std::log(40.0), 1e-9);
}

TEST(RegBic, InterceptOnlyEqualsSingleComponentFit) {
  const Matrix y = fixtures::random_normal(60, 1, 3) * 2.0;
  const RegressionFit fit = reg_bic(y.col(0), Matrix(60, 0));
  const FitResult g1 = em_fit(y, 1, CovarianceModel::E, std::vector<int>(60, 0));
  EXPECT_EQ(fit.df, 2);
  EXPECT_NEAR(fit.bic, g1.bic, 1e-8);
}

TEST(RegBic, DuplicateRegressorIsDegenerate) {
  const Matrix X = fixtures::random_normal(30, 2, 4);
  const RegressionFit fit = reg_bic(X.col(1), X);
  EXPECT_EQ(fit.status, RegressionStatus::degenerate);
  const RegressionFit sub = reg_subset_bic(X.col(1), X, RegressionMode::subset);
  EXPECT_FALSE(sub.ok());
}

TEST(RegBic, RankDeficientAndTooFew) {
  Matrix X = fixtures::random_normal(30, 3, 5);
  X.col(2) = X.col(0) + X.col(1);
  const Vector y = fixtures::random_normal(30, 1, 6).col(0);
  EXPECT_EQ(reg_bic(y, X).status, RegressionStatus::rank_deficient);
  const Matrix small = fixtures::random_normal(3, 3, 7);
  EXPECT_EQ(reg_bic(small.col(0), small.rightCols(2)).status, RegressionStatus::too_few_observations);
}

TEST(RegSubset, MatchesBruteForceEnumeration) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Matrix X = fixtures::random_normal(80, 5, seed);
    Vector y = 0.8 * X.col(1).array() + 0.4 * X.col(3).array();
    y += fixtures::random_normal(80, 1, seed + 100).col(0);
    double best = -std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < 32; ++mask) {
      std::vector<int> cols;
      for (int j = 0; j < 5; ++j) {
        if (mask & (1 << j)) cols.push_back(j);
      }
      const auto fit = reg_bic(y, select_columns(X, cols));
      if (fit.ok()) best = std::max(best, fit.bic);
    }
    const RegressionFit sub = reg_subset_bic(y, X, RegressionMode::subset);
    EXPECT_NEAR(sub.bic, best, 1e-8) << "seed " << seed;
    EXPECT_GE(sub.bic, reg_subset_bic(y, X, RegressionMode::all).bic - 1e-9);
  }
}

TEST(RegSubset, StepwiseBeyondTenColumnsFindsSignal) {
  const Matrix X = fixtures::random_normal(300, 14, 9);
  Vector y = 1.5 * X.col(2).array() - 1.0 * X.col(11).array();
  y += 0.5 * fixtures::random_normal(300, 1, 10).col(0);
  const RegressionFit sub = reg_subset_bic(y, X, RegressionMode::subset);
  ASSERT_TRUE(sub.ok());
  EXPECT_EQ(sub.regressors, (std::vector<int>{2, 11}));
  EXPECT_NEAR(sub.bic, reg_bic(y, select_columns(X, sub.regressors)).bic, 1e-8);
}

TEST(RegSubset, AllModeUsesEveryColumn) {
  const Matrix X = fixtures::random_normal(50, 4, 11);
  const Vector y = fixtures::random_normal(50, 1, 12).col(0);
  const RegressionFit fit = reg_subset_bic(y, X, RegressionMode::all);
  EXPECT_EQ(fit.regressors, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_NEAR(fit.bic, reg_bic(y, X).bic, 1e-12);
}

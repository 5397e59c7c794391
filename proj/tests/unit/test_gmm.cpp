#include "test_util.hpp"

#include "varsel/gmm.hpp"
#include "varsel/hclust.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

using namespace varsel;
using enum CovarianceModel;

TEST(NParams, ReferenceDegreesOfFreedom) {
  EXPECT_EQ(n_params(EEV, 5, 4), 68);
  EXPECT_EQ(n_params(EEV, 4, 4), 47);
  EXPECT_EQ(n_params(VEI, 12, 3), 52);
}

TEST(NParams, ClosedFormPerModel) {
  const int d = 3;
  const int G = 2;
  const int base = G * d + G - 1;
  EXPECT_EQ(n_params(EII, d, G), base + 1);
  EXPECT_EQ(n_params(VII, d, G), base + G);
  EXPECT_EQ(n_params(EEI, d, G), base + d);
  EXPECT_EQ(n_params(VEI, d, G), base + G + d - 1);
  EXPECT_EQ(n_params(EVI, d, G), base + 1 + G * (d - 1));
  EXPECT_EQ(n_params(VVI, d, G), base + G * d);
  EXPECT_EQ(n_params(EEE, d, G), base + d * (d + 1) / 2);
  EXPECT_EQ(n_params(EEV, d, G), base + 1 + (d - 1) + G * d * (d - 1) / 2);
  EXPECT_EQ(n_params(VEV, d, G), base + G + (d - 1) + G * d * (d - 1) / 2);
  EXPECT_EQ(n_params(VVV, d, G), base + G * d * (d + 1) / 2);
  EXPECT_EQ(n_params(E, 1, 3), 3 + 2 + 1);
  EXPECT_EQ(n_params(V, 1, 3), 3 + 2 + 3);
  EXPECT_THROW(n_params(E, 2, 3), DataError);
  EXPECT_THROW(n_params(VVV, 1, 3), DataError);
}

TEST(Bic, ReferenceValues) {
  EXPECT_NEAR(bic(-1241.006, 68, 200), -2842.298, 0.01);
  EXPECT_NEAR(bic(-392.9397, 52, 43), -981.4619, 0.01);
}

TEST(Models, NamesRoundTrip) {
  for (const auto m : {E, V, EII, VII, EEI, VEI, EVI, VVI, EEE, EEV, VEV, VVV}) {
    EXPECT_EQ(parse_model(model_name(m)), m);
  }
  EXPECT_FALSE(parse_model("XYZ").has_value());
  EXPECT_EQ(multivariate_models().size(), 10u);
  EXPECT_EQ(univariate_models().size(), 2u);
}

TEST(LogDensity, MatchesDirectSummation) {
  MixtureParams p;
  p.weights = Vector(2);
  p.weights << 0.3, 0.7;
  p.means = Matrix(2, 2);
  p.means << 0.0, 2.0, 1.0, -1.0;
  Matrix s1(2, 2);
  s1 << 1.0, 0.3, 0.3, 2.0;
  Matrix s2(2, 2);
  s2 << 0.5, -0.1, -0.1, 0.8;
  p.covariances = {s1, s2};
  const Matrix x = fixtures::random_normal(20, 2, 3) * 2.0;
  const Vector ld = log_density(p, x);
  for (int i = 0; i < x.rows(); ++i) {
    double f = 0.0;
    for (int k = 0; k < 2; ++k) {
      const Vector r = x.row(i).transpose() - p.means.col(k);
      const Matrix& S = p.covariances[static_cast<std::size_t>(k)];
      const double q = r.dot(S.inverse() * r);
      f += p.weights(k) * std::exp(-0.5 * q) / (2.0 * std::numbers::pi * std::sqrt(S.determinant()));
    }
    EXPECT_NEAR(ld(i), std::log(f), 1e-10);
  }
}

TEST(LogDensity, StableFarFromMeans) {
  MixtureParams p;
  p.weights = Vector::Constant(1, 1.0);
  p.means = Matrix::Zero(1, 1);
  p.covariances = {Matrix::Identity(1, 1) * 1e-4};
  Matrix x(1, 1);
  x << 1e3;
  const Vector ld = log_density(p, x);
  EXPECT_TRUE(std::isfinite(ld(0)));
}

TEST(EStep, ResponsibilitiesSumToOne) {
  const Matrix x = fixtures::separated_clusters(30, 3, 2, 6.0, 4);
  const auto init = hclust_init(x, VVV).cut(3);
  const FitResult fit = em_fit(x, 3, VVV, init);
  ASSERT_TRUE(fit.ok()) << fit.message;
  const Vector rowsum = fit.z.rowwise().sum();
  for (int i = 0; i < rowsum.size(); ++i) EXPECT_NEAR(rowsum(i), 1.0, 1e-12);
}

TEST(EmFit, SingleComponentIsSampleMoments) {
  const Matrix x = fixtures::random_normal(50, 3, 8);
  const FitResult fit = em_fit(x, 1, VVV, std::vector<int>(50, 0));
  ASSERT_TRUE(fit.ok());
  const Vector mean = x.colwise().mean();
  const Matrix c = x.rowwise() - mean.transpose();
  const Matrix cov = c.transpose() * c / 50.0;
  EXPECT_TRUE(fit.params.means.col(0).isApprox(mean, 1e-12));
  EXPECT_TRUE(fit.params.covariances[0].isApprox(cov, 1e-10));
  EXPECT_EQ(fit.df, n_params(VVV, 3, 1));
  EXPECT_NEAR(fit.bic, bic(fit.loglik, fit.df, 50), 1e-9);
}

class EmEveryModel : public ::testing::TestWithParam<CovarianceModel> {};

TEST_P(EmEveryModel, MonotoneAndConstrained) {
  const auto model = GetParam();
  const int d = is_univariate(model) ? 1 : 3;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Matrix x = fixtures::separated_clusters(40, 3, d, 2.5, seed);
    for (int G = 1; G <= 4; ++G) {
      const auto init = G == 1 ? std::vector<int>(x.rows(), 0) : hclust_init(x, VVV).cut(G);
      const FitResult fit = em_fit(x, G, model, init);
      if (!fit.ok()) continue;
      for (std::size_t t = 1; t < fit.loglik_trace.size(); ++t) {
        EXPECT_GE(fit.loglik_trace[t], fit.loglik_trace[t - 1] - 1e-8)
            << model_name(model) << " G=" << G << " iteration " << t;
      }
      EXPECT_LE(constraint_violation(model, fit.params.covariances), 1e-8) << model_name(model) << " G=" << G;
      EXPECT_NEAR(fit.params.weights.sum(), 1.0, 1e-12);
      EXPECT_EQ(fit.df, n_params(model, d, G));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(AllModels, EmEveryModel,
                         ::testing::Values(E, V, EII, VII, EEI, VEI, EVI, VVI, EEE, EEV, VEV, VVV),
                         [](const auto& info) { return std::string(model_name(info.param)); });

TEST(ConstraintViolation, DetectsBrokenPatterns) {
  Matrix a = Matrix::Identity(2, 2);
  Matrix b = Matrix::Identity(2, 2) * 2.0;
  const std::vector<Matrix> covs{a, b};
  EXPECT_LE(constraint_violation(VII, covs), 1e-12);
  EXPECT_GT(constraint_violation(EII, covs), 0.1);
  Matrix c(2, 2);
  c << 1.0, 0.5, 0.5, 1.0;
  const std::vector<Matrix> rotated{a, c};
  EXPECT_GT(constraint_violation(VVI, rotated), 0.1);
  EXPECT_LE(constraint_violation(VVV, rotated), 1e-12);
}

TEST(EmFit, RecoversSeparatedClusters) {
  std::vector<int> labels;
  const Matrix x = fixtures::separated_clusters(50, 3, 2, 8.0, 21, &labels);
  const std::vector<int> Gs{1, 2, 3, 4, 5};
  const FitResult fit = best_fit(x, Gs, multivariate_models());
  EXPECT_EQ(fit.G, 3);
  EXPECT_DOUBLE_EQ(ari(labels, fit.classification), 1.0);
}

TEST(EmFit, NestedModelsOnSeparatedData) {
  const Matrix x = fixtures::separated_clusters(60, 2, 2, 8.0, 5);
  const auto init = hclust_init(x, VVV).cut(2);
  const double eii = em_fit(x, 2, EII, init).loglik;
  const double eee = em_fit(x, 2, EEE, init).loglik;
  const double vvv = em_fit(x, 2, VVV, init).loglik;
  EXPECT_GE(eee, eii - 1e-6);
  EXPECT_GE(vvv, eee - 1e-6);
}

TEST(EmFit, FailuresAreReportedNotThrown) {
  Matrix x(3, 2);
  x << 0, 0, 1, 1, 2, 2;
  const FitResult fit = em_fit(x, 5, VVV, std::vector<int>{0, 1, 2});
  EXPECT_FALSE(fit.ok());
  const std::vector<int> Gs{5};
  EXPECT_THROW(best_fit(x, Gs, multivariate_models()), FitFailure);
}

TEST(EmFit, CollinearDataIsSingular) {
  Matrix x(40, 2);
  const Matrix base = fixtures::random_normal(40, 1, 2);
  x.col(0) = base.col(0);
  x.col(1) = 2.0 * base.col(0);
  const FitResult fit = em_fit(x, 1, VVV, std::vector<int>(40, 0));
  EXPECT_EQ(fit.status, FitStatus::singular_covariance);
}

TEST(BestFit, CrabsSelectsEev4) {
  const Dataset crabs = read_csv(fixtures::data_path("crabs.csv"));
  const std::vector<int> Gs{1, 2, 3, 4, 5};
  const FitResult fit = best_fit(crabs.values(), Gs, multivariate_models());
  EXPECT_EQ(fit.model, EEV);
  EXPECT_EQ(fit.G, 4);
  EXPECT_EQ(fit.df, 68);
  EXPECT_NEAR(fit.bic, -2842.298, 0.5);
  const std::string text = summarize(fit);
  EXPECT_NE(text.find("Mclust EEV (ellipsoidal, equal volume and shape) model with 4 components:"), std::string::npos);
  EXPECT_NE(text.find("Clustering table:"), std::string::npos);
}

TEST(BestFit, SampledInitialisationIsDeterministic) {
  std::vector<int> labels;
  const Matrix x = fixtures::separated_clusters(200, 2, 2, 6.0, 9, &labels);
  FitOptions opts;
  opts.samp = true;
  opts.sampsize = 50;
  opts.seed = 4;
  const std::vector<int> Gs{2, 3};
  const FitResult a = best_fit(x, Gs, multivariate_models(), opts);
  const FitResult b = best_fit(x, Gs, multivariate_models(), opts);
  EXPECT_EQ(a.bic, b.bic);
  EXPECT_EQ(a.classification, b.classification);
  EXPECT_GT(ari(labels, a.classification), 0.95);
}

TEST(BestFit, TiesPreferSmallerGThenEarlierModel) {
  // Univariate constant-spacing data: E and V coincide at G = 1.
  const Matrix x = fixtures::random_normal(30, 1, 12);
  const std::vector<int> Gs{1};
  const std::vector<CovarianceModel> models{V, E};
  const FitResult fit = best_fit(x, Gs, models);
  EXPECT_EQ(fit.model, V);
}

// Coffee data is not redistributed; see data/README.md for preparing it.
TEST(BestFit, CoffeeFixtureWhenAvailable) {
  const std::string path = fixtures::data_path("coffee.csv");
  if (!std::ifstream(path)) GTEST_SKIP() << "data/coffee.csv not present";
  const Dataset coffee = read_csv(path);
  ASSERT_EQ(coffee.n(), 43);
  ASSERT_EQ(coffee.d(), 12);
  const std::vector<int> Gs{1, 2, 3, 4, 5, 6, 7, 8, 9};
  const FitResult fit = best_fit(coffee.values(), Gs, multivariate_models());
  EXPECT_EQ(fit.model, VEI);
  EXPECT_EQ(fit.G, 3);
  EXPECT_NEAR(fit.bic, -981.4619, 0.5);
  std::vector<int> counts(3, 0);
  for (const int c : fit.classification) ++counts[static_cast<std::size_t>(c)];
  std::sort(counts.begin(), counts.end());
  EXPECT_EQ(counts, (std::vector<int>{7, 14, 22}));
}

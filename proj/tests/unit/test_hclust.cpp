#include "test_util.hpp"

#include "varsel/hclust.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <set>

using namespace varsel;
using enum CovarianceModel;

namespace {

// Exhaustive O(n^3) Ward agglomeration.
std::vector<std::pair<int, int>> ward_oracle(const Matrix& x) {
  const int n = static_cast<int>(x.rows());
  std::vector<int> rep(n);
  std::vector<Vector> mean(n);
  std::vector<double> size(n, 1.0);
  std::vector<bool> alive(n, true);
  for (int i = 0; i < n; ++i) {
    rep[i] = i;
    mean[i] = x.row(i).transpose();
  }
  std::vector<std::pair<int, int>> merges;
  for (int step = 0; step + 1 < n; ++step) {
    double best = std::numeric_limits<double>::infinity();
    int bi = -1;
    int bj = -1;
    for (int i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (int j = i + 1; j < n; ++j) {
        if (!alive[j]) continue;
        const double c = size[i] * size[j] / (size[i] + size[j]) * (mean[i] - mean[j]).squaredNorm();
        if (c < best) {
          best = c;
          bi = i;
          bj = j;
        }
      }
    }
    merges.emplace_back(bi, bj);
    mean[bi] = (size[bi] * mean[bi] + size[bj] * mean[bj]) / (size[bi] + size[bj]);
    size[bi] += size[bj];
    alive[bj] = false;
  }
  return merges;
}

}  // namespace

TEST(Hclust, WardMatchesExhaustiveOracle) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Matrix x = fixtures::random_normal(18, 3, seed);
    const MergeTree tree = hclust_init(x, EII);
    EXPECT_EQ(tree.merges(), ward_oracle(x)) << "seed " << seed;
  }
}

TEST(Hclust, CutLabelsByFirstAppearance) {
  const Matrix x = fixtures::separated_clusters(5, 3, 2, 20.0, 3);
  const MergeTree tree = hclust_init(x, VVV);
  const auto part = tree.cut(3);
  EXPECT_EQ(part, (std::vector<int>{0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2}));
  const auto all = tree.cut(15);
  for (int i = 0; i < 15; ++i) EXPECT_EQ(all[static_cast<std::size_t>(i)], i);
  for (const int l : tree.cut(1)) EXPECT_EQ(l, 0);
  EXPECT_THROW(tree.cut(0), DataError);
  EXPECT_THROW(tree.cut(16), DataError);
}

TEST(Hclust, EveryCriterionGivesValidPartitions) {
  const Matrix x = fixtures::separated_clusters(12, 3, 3, 6.0, 7);
  for (const auto c : {EII, EEE, VVV}) {
    const MergeTree tree = hclust_init(x, c);
    EXPECT_EQ(tree.leaves(), 36);
    EXPECT_EQ(tree.merges().size(), 35u);
    for (int G = 1; G <= 6; ++G) {
      const auto part = tree.cut(G);
      EXPECT_EQ(std::set<int>(part.begin(), part.end()).size(), static_cast<std::size_t>(G));
    }
    std::vector<int> truth;
    for (int g = 0; g < 3; ++g) truth.insert(truth.end(), 12, g);
    EXPECT_DOUBLE_EQ(ari(truth, tree.cut(3)), 1.0) << model_name(c);
  }
  const Matrix u = fixtures::separated_clusters(10, 2, 1, 10.0, 2);
  EXPECT_EQ(hclust_init(u, E).leaves(), 20);
  EXPECT_EQ(hclust_init(u, V).leaves(), 20);
  EXPECT_THROW(hclust_init(x, VEV), DataError);
}

TEST(Hclust, SampledRowsAndExtension) {
  std::vector<int> labels;
  const Matrix x = fixtures::separated_clusters(40, 2, 2, 10.0, 4, &labels);
  const auto rows = subsample_rows(80, 20, 1);
  const MergeTree tree = hclust_init(x, VVV, std::span<const int>(rows));
  EXPECT_EQ(tree.leaves(), 20);
  const auto part = tree.cut(2);
  const auto full = extend_partition(x, rows, part);
  ASSERT_EQ(full.size(), 80u);
  for (std::size_t k = 0; k < rows.size(); ++k) EXPECT_EQ(full[static_cast<std::size_t>(rows[k])], part[k]);
  EXPECT_DOUBLE_EQ(ari(labels, full), 1.0);
}

TEST(HcTransform, StandardisesAndDecorrelates) {
  Matrix x = fixtures::random_normal(100, 3, 6);
  x.col(1) = 5.0 * x.col(1) + x.col(0);
  const Matrix s = hc_transform(x, HcUse::std);
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(s.col(j).mean(), 0.0, 1e-12);
    EXPECT_NEAR(s.col(j).squaredNorm() / 99.0, 1.0, 1e-12);
  }
  const Matrix z = hc_transform(x, HcUse::svd);
  const Matrix gram = z.transpose() * z;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j) EXPECT_NEAR(gram(i, j), 0.0, 1e-9);
    }
  }
  EXPECT_EQ(hc_transform(x, HcUse::vars), x);
  EXPECT_EQ(parse_hc_use("SVD"), HcUse::svd);
}

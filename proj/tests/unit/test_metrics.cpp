#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace varsel;

namespace {

const std::vector<std::vector<long long>> kMod1{{49, 0, 0, 1}, {11, 0, 39, 0}, {0, 5, 0, 45}, {0, 50, 0, 0}};
const std::vector<std::vector<long long>> kMod2{{0, 50, 0, 0}, {0, 10, 40, 0}, {3, 0, 0, 47}, {50, 0, 0, 0}};

double pair_cer(const std::vector<int>& a, const std::vector<int>& b) {
  long long disagree = 0;
  long long pairs = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      ++pairs;
      if ((a[i] == a[j]) != (b[i] == b[j])) ++disagree;
    }
  }
  return static_cast<double>(disagree) / static_cast<double>(pairs);
}

std::vector<int> random_labels(int n, int k, Rng& rng) {
  std::vector<int> out(static_cast<std::size_t>(n));
  for (auto& v : out) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
  return out;
}

}  // namespace

TEST(Ari, CrabsTables) {
  EXPECT_NEAR(ari(ContingencyTable::from_counts(kMod1)), 0.793786, 1e-6);
  EXPECT_NEAR(ari(ContingencyTable::from_counts(kMod2)), 0.8399679, 1e-6);
}

TEST(ClassError, CrabsTables) {
  EXPECT_DOUBLE_EQ(class_error(ContingencyTable::from_counts(kMod1)), 0.085);
  EXPECT_DOUBLE_EQ(class_error(ContingencyTable::from_counts(kMod2)), 0.065);
}

TEST(Ari, IdenticalAndDegenerate) {
  const std::vector<int> a{0, 0, 1, 1, 2};
  EXPECT_DOUBLE_EQ(ari(a, a), 1.0);
  const std::vector<int> one{3, 3, 3};
  EXPECT_DOUBLE_EQ(ari(one, one), 1.0);
  EXPECT_THROW(ari(a, one), DataError);
}

TEST(Cer, SmallExample) {
  const std::vector<int> a{1, 1, 2, 2};
  const std::vector<int> b{1, 2, 1, 2};
  EXPECT_NEAR(cer(a, b), 1.0 - 2.0 / 6.0, 1e-4);
  EXPECT_DOUBLE_EQ(cer(a, a), 0.0);
}

TEST(Cer, PairEnumerationOracle) {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_labels(100, 2 + trial % 4, rng);
    const auto b = random_labels(100, 2 + trial % 3, rng);
    EXPECT_NEAR(cer(a, b), pair_cer(a, b), 1e-12);
  }
}

TEST(Metrics, SymmetryRelabelingAndBounds) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_labels(60, 3, rng);
    const auto b = random_labels(60, 4, rng);
    std::vector<int> relabeled;
    for (const int v : b) relabeled.push_back((v + 2) % 4 + 10);
    EXPECT_NEAR(ari(a, b), ari(b, a), 1e-12);
    EXPECT_NEAR(cer(a, b), cer(b, a), 1e-12);
    EXPECT_NEAR(ari(a, b), ari(a, relabeled), 1e-12);
    EXPECT_NEAR(cer(a, b), cer(a, relabeled), 1e-12);
    const double c = cer(a, b);
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
    EXPECT_LE(class_error(a, b), 1.0 - 1.0 / 3.0 + 1e-12);
    EXPECT_DOUBLE_EQ(class_error(a, a), 0.0);
  }
}

TEST(ClassError, ManyToOneWhenMoreClusters) {
  const std::vector<int> truth{0, 0, 0, 1, 1, 1};
  const std::vector<int> cl{0, 1, 1, 2, 2, 3};
  EXPECT_DOUBLE_EQ(class_error(truth, cl), 0.0);
}

TEST(ClassError, GreedyFallbackBeyondEightClusters) {
  std::vector<int> a;
  std::vector<int> b;
  for (int k = 0; k < 12; ++k) {
    for (int r = 0; r < 5; ++r) {
      a.push_back(k);
      b.push_back((k * 7) % 12);
    }
  }
  EXPECT_DOUBLE_EQ(class_error(a, b), 0.0);
}

TEST(Vser, Examples) {
  EXPECT_NEAR(vser(VariableSet{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, VariableSet{0, 1}, 10), 0.8, 1e-12);
  EXPECT_DOUBLE_EQ(vser(VariableSet{1, 0}, VariableSet{0, 1}, 10), 0.0);
  EXPECT_NEAR(vser(VariableSet{}, VariableSet{0, 1}, 10), 0.2, 1e-12);
  EXPECT_THROW(vser(VariableSet{10}, VariableSet{0}, 10), DataError);
}

TEST(ContingencyTable, Validation) {
  EXPECT_THROW(ContingencyTable::from_counts({{1, -1}}), DataError);
  EXPECT_THROW(ContingencyTable::from_counts({{0, 0}}), DataError);
  EXPECT_THROW(ContingencyTable::from_counts({{1, 2}, {3}}), DataError);
  const std::vector<std::string> labels{"B|M", "O|F", "B|M"};
  EXPECT_EQ(encode_labels(labels), (std::vector<int>{0, 1, 0}));
}

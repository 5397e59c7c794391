#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

using namespace varsel;

TEST(ReadCsv, ParsesHeaderAndValues) {
  std::istringstream in("a,b\n1,2\n3,4\n5,6\n");
  const Dataset d = parse_csv(in, true);
  EXPECT_EQ(d.n(), 3);
  EXPECT_EQ(d.d(), 2);
  EXPECT_EQ(d.col_names(), (std::vector<std::string>{"a", "b"}));
  EXPECT_DOUBLE_EQ(d.values()(2, 1), 6.0);
}

TEST(ReadCsv, HeaderlessUsesDefaultNames) {
  std::istringstream in("1,2\n3,4\n");
  const Dataset d = parse_csv(in, false);
  EXPECT_EQ(d.col_names(), (std::vector<std::string>{"X1", "X2"}));
  EXPECT_DOUBLE_EQ(d.values()(1, 0), 3.0);
}

TEST(ReadCsv, MissingValueReportsLocation) {
  std::istringstream in("a,b\n1,2\n3,NA\n");
  try {
    parse_csv(in, true);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("column 2"), std::string::npos) << msg;
  }
}

TEST(ReadCsv, RejectsCategoricalCells) {
  std::istringstream in("a,b\n1,x\n");
  try {
    parse_csv(in, true);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("Categorical variables are not allowed"), std::string::npos);
  }
}

TEST(ReadCsv, RejectsRaggedRowsAndDuplicateNames) {
  std::istringstream ragged("a,b\n1,2\n3\n");
  EXPECT_THROW(parse_csv(ragged, true), DataError);
  std::istringstream dup("a,a\n1,2\n");
  EXPECT_THROW(parse_csv(dup, true), DataError);
  std::istringstream empty("a,b\n");
  EXPECT_THROW(parse_csv(empty, true), DataError);
}

TEST(ReadCsv, MissingFileIsDataError) { EXPECT_THROW(read_csv("/nonexistent/file.csv"), DataError); }

TEST(ReadCsv, CrabsFixture) {
  const Dataset d = read_csv(fixtures::data_path("crabs.csv"));
  EXPECT_EQ(d.n(), 200);
  EXPECT_EQ(d.col_names(), (std::vector<std::string>{"FL", "RW", "CL", "CW", "BD"}));
  EXPECT_EQ(fixtures::crabs_classes().size(), 200u);
}

TEST(SubsetColumns, ProjectsInGivenOrder) {
  const Dataset d = Dataset::with_default_names(fixtures::random_normal(3, 5, 1));
  const VariableSet vars{4, 1};
  const Dataset s = subset_columns(d, vars);
  EXPECT_EQ(s.col_names(), (std::vector<std::string>{"X5", "X2"}));
  EXPECT_TRUE(s.values().col(0).isApprox(d.values().col(4)));
  EXPECT_TRUE(s.values().col(1).isApprox(d.values().col(1)));

  const VariableSet all{0, 1, 2, 3, 4};
  EXPECT_EQ(subset_columns(d, all).values(), d.values());
  EXPECT_THROW(subset_columns(d, VariableSet{}), DataError);
  EXPECT_THROW(subset_columns(d, VariableSet{5}), DataError);
  EXPECT_THROW(subset_columns(d, VariableSet{1, 1}), DataError);
}

TEST(SubsampleRows, FullSampleIsAllRows) {
  const auto rows = subsample_rows(10, 10, 99);
  std::vector<int> expected(10);
  std::iota(expected.begin(), expected.end(), 0);
  EXPECT_EQ(rows, expected);
}

TEST(SubsampleRows, DeterministicPerSeed) {
  EXPECT_EQ(subsample_rows(1000, 200, 1), subsample_rows(1000, 200, 1));
  EXPECT_NE(subsample_rows(1000, 200, 1), subsample_rows(1000, 200, 2));
  EXPECT_THROW(subsample_rows(10, 0, 1), DataError);
  EXPECT_THROW(subsample_rows(10, 11, 1), DataError);
}

TEST(SubsampleRows, SortedDistinctInBounds) {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(500));
    const int size = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const auto rows = subsample_rows(n, size, rng.next_u64());
    ASSERT_EQ(static_cast<int>(rows.size()), size);
    ASSERT_TRUE(std::is_sorted(rows.begin(), rows.end()));
    ASSERT_EQ(std::set<int>(rows.begin(), rows.end()).size(), rows.size());
    ASSERT_GE(rows.front(), 0);
    ASSERT_LT(rows.back(), n);
  }
}

TEST(WriteCsv, RoundTrip) {
  Matrix x = fixtures::random_normal(25, 4, 5);
  x(0, 0) = 1e-300;
  x(1, 1) = -123456789.123456789;
  const Dataset d(x, {"alpha", "b c", "d_1", "E"});
  std::stringstream buf;
  write_csv(d, buf);
  const Dataset back = parse_csv(buf, true);
  EXPECT_EQ(back.col_names(), d.col_names());
  for (int i = 0; i < d.n(); ++i) {
    for (int j = 0; j < d.d(); ++j) {
      EXPECT_NEAR(back.values()(i, j), d.values()(i, j), 1e-12 * std::max(1.0, std::abs(d.values()(i, j))));
    }
  }
}

TEST(DatasetNames, IndexLookup) {
  const Dataset d = Dataset::with_default_names(fixtures::random_normal(2, 3, 1));
  EXPECT_EQ(d.index_of("X3"), 2);
  EXPECT_FALSE(d.index_of("nope").has_value());
  const std::vector<std::string> names{"X3", "X1"};
  EXPECT_EQ(d.indices_of(names), (VariableSet{2, 0}));
  const std::vector<std::string> bad{"X9"};
  EXPECT_THROW(d.indices_of(bad), DataError);
}

TEST(Rng, ReproducibleStreams) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
  Rng c(3);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(c.below(7), 7u);
  }
}

TEST(Rng, NormalMoments) {
  Rng rng(11);
  double s = 0.0;
  double s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double v = rng.normal();
    s += v;
    s2 += v * v;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.01);
}

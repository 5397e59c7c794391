#pragma once

#include "varsel/dataset.hpp"

#include <span>
#include <string>
#include <vector>

namespace varsel {

/// Cross-tabulation of two labelings (rows: first, columns: second).
struct ContingencyTable {
  std::vector<std::vector<long long>> counts;
  long long n = 0;

  static ContingencyTable from_labels(std::span<const int> a, std::span<const int> b);
  /// Validates non-negative counts and a positive total.
  static ContingencyTable from_counts(std::vector<std::vector<long long>> counts);

  std::size_t rows() const { return counts.size(); }
  std::size_t cols() const { return counts.empty() ? 0 : counts.front().size(); }
};

/// Hubert-Arabie adjusted Rand index; 1 when both sides are a single class.
double ari(const ContingencyTable& table);
double ari(std::span<const int> a, std::span<const int> b);

double rand_index(const ContingencyTable& table);

/// Classification error rate between partitions: 1 - Rand index.
double cer(std::span<const int> a, std::span<const int> b);
double cer(const ContingencyTable& table);

/// Misclassification rate under the best mapping of cluster labels (columns) to
/// classes (rows). One-to-one when clusters do not outnumber classes (exhaustive
/// up to 8 clusters, greedy beyond), many-to-one otherwise.
double class_error(const ContingencyTable& table);
double class_error(std::span<const int> truth, std::span<const int> cluster);

/// |selected symmetric-difference truth| / d.
double vser(std::span<const int> selected, std::span<const int> truth, int d);

/// Maps arbitrary text labels to 0-based integers by first appearance.
std::vector<int> encode_labels(std::span<const std::string> labels);

}  // namespace varsel

#pragma once

#include "varsel/gmm.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace varsel {

/// Agglomeration history over `leaves()` singletons. Merge k joins the clusters
/// represented by their smallest leaf index (first < second); the merged cluster
/// keeps `first` as representative.
class MergeTree {
 public:
  MergeTree() = default;
  MergeTree(int leaves, std::vector<std::pair<int, int>> merges, std::vector<double> costs);

  int leaves() const { return leaves_; }
  const std::vector<std::pair<int, int>>& merges() const { return merges_; }
  const std::vector<double>& costs() const { return costs_; }

  /// Hard partition into G classes (1 <= G <= leaves) after leaves - G merges.
  /// Labels 0..G-1 are numbered by first appearance in leaf order.
  std::vector<int> cut(int G) const;

 private:
  int leaves_ = 0;
  std::vector<std::pair<int, int>> merges_;
  std::vector<double> costs_;
};

/// Model-based agglomerative clustering from singletons. At each step merges the
/// pair with minimal increase of the classification-likelihood criterion of
/// `criterion` (EII, EEE or VVV; E and V for univariate data), ties to the
/// lexicographically lowest pair. When `rows` is given, only those rows take part
/// and leaf k of the tree is rows[k].
MergeTree hclust_init(const Matrix& x, CovarianceModel criterion,
                      std::optional<std::span<const int>> rows = std::nullopt);

/// Data transformation applied before hierarchical clustering.
Matrix hc_transform(const Matrix& x, HcUse use);

/// Assigns every row outside `rows` to the class whose centroid (pooled spherical
/// Gaussian fitted on the sampled rows) gives it the highest density; sampled rows
/// keep their labels.
std::vector<int> extend_partition(const Matrix& x, std::span<const int> rows, std::span<const int> partition);

}  // namespace varsel

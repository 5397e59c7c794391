#include "varsel/hclust.hpp"

#include <Eigen/SVD>

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <numeric>

namespace varsel {

MergeTree::MergeTree(int leaves, std::vector<std::pair<int, int>> merges, std::vector<double> costs)
    : leaves_(leaves), merges_(std::move(merges)), costs_(std::move(costs)) {}

std::vector<int> MergeTree::cut(int G) const {
  if (G < 1 || G > leaves_) throw DataError(fmt::format("cannot cut {} leaves into {} classes", leaves_, G));
  std::vector<int> parent(static_cast<std::size_t>(leaves_));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  const auto steps = static_cast<std::size_t>(leaves_ - G);
  for (std::size_t s = 0; s < steps && s < merges_.size(); ++s) {
    const int a = find(merges_[s].first);
    const int b = find(merges_[s].second);
    parent[static_cast<std::size_t>(b)] = a;
  }
  std::vector<int> label_of_root(static_cast<std::size_t>(leaves_), -1);
  std::vector<int> labels(static_cast<std::size_t>(leaves_));
  int next = 0;
  for (int i = 0; i < leaves_; ++i) {
    int& l = label_of_root[static_cast<std::size_t>(find(i))];
    if (l < 0) l = next++;
    labels[static_cast<std::size_t>(i)] = l;
  }
  return labels;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Greedy agglomeration for criteria whose merge cost depends only on the two
// clusters involved. Each live cluster i caches its cheapest partner j > i, so
// a merge only forces rescans of clusters that pointed at the merged pair.
template <class Cost, class Merge>
MergeTree agglomerate_pairwise(int m, Cost&& cost, Merge&& merge) {
  std::vector<char> alive(static_cast<std::size_t>(m), 1);
  std::vector<int> nn(static_cast<std::size_t>(m), -1);
  std::vector<double> nn_cost(static_cast<std::size_t>(m), kInf);

  auto rescan = [&](int i) {
    int best = -1;
    double best_cost = kInf;
    for (int j = i + 1; j < m; ++j) {
      if (!alive[static_cast<std::size_t>(j)]) continue;
      const double c = cost(i, j);
      if (best < 0 || c < best_cost) {
        best = j;
        best_cost = c;
      }
    }
    nn[static_cast<std::size_t>(i)] = best;
    nn_cost[static_cast<std::size_t>(i)] = best_cost;
  };

  for (int i = 0; i < m; ++i) rescan(i);

  std::vector<std::pair<int, int>> merges;
  std::vector<double> costs;
  merges.reserve(static_cast<std::size_t>(std::max(m - 1, 0)));
  for (int step = 0; step + 1 < m; ++step) {
    int a = -1;
    for (int i = 0; i < m; ++i) {
      if (!alive[static_cast<std::size_t>(i)] || nn[static_cast<std::size_t>(i)] < 0) continue;
      if (a < 0 || nn_cost[static_cast<std::size_t>(i)] < nn_cost[static_cast<std::size_t>(a)]) a = i;
    }
    const int b = nn[static_cast<std::size_t>(a)];
    merges.emplace_back(a, b);
    costs.push_back(nn_cost[static_cast<std::size_t>(a)]);
    merge(a, b);
    alive[static_cast<std::size_t>(b)] = 0;

    rescan(a);
    for (int k = 0; k < a; ++k) {
      if (!alive[static_cast<std::size_t>(k)]) continue;
      const int p = nn[static_cast<std::size_t>(k)];
      if (p == a || p == b) {
        rescan(k);
        continue;
      }
      const double c = cost(k, a);
      if (c < nn_cost[static_cast<std::size_t>(k)] || (c == nn_cost[static_cast<std::size_t>(k)] && a < p)) {
        nn[static_cast<std::size_t>(k)] = a;
        nn_cost[static_cast<std::size_t>(k)] = c;
      }
    }
    for (int k = a + 1; k < b; ++k) {
      if (alive[static_cast<std::size_t>(k)] && nn[static_cast<std::size_t>(k)] == b) rescan(k);
    }
  }
  return MergeTree(m, std::move(merges), std::move(costs));
}

// Sum-of-squares (Ward) increase: the spherical equal-volume criterion.
MergeTree ward_tree(const Matrix& x) {
  const int m = static_cast<int>(x.rows());
  Matrix means = x.transpose();
  std::vector<double> count(static_cast<std::size_t>(m), 1.0);
  auto cost = [&](int i, int j) {
    const double ni = count[static_cast<std::size_t>(i)];
    const double nj = count[static_cast<std::size_t>(j)];
    return ni * nj / (ni + nj) * (means.col(i) - means.col(j)).squaredNorm();
  };
  auto merge = [&](int i, int j) {
    const double ni = count[static_cast<std::size_t>(i)];
    const double nj = count[static_cast<std::size_t>(j)];
    means.col(i) = (ni * means.col(i) + nj * means.col(j)) / (ni + nj);
    count[static_cast<std::size_t>(i)] = ni + nj;
  };
  return agglomerate_pairwise(m, cost, merge);
}

double ridge_for(const Matrix& x) {
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const double avg_var = (x.rowwise() - mean).squaredNorm() / static_cast<double>(x.rows() * x.cols());
  return std::max(avg_var, std::numeric_limits<double>::epsilon());
}

// Unconstrained criterion: sum_k n_k log det((W_k + alpha I) / n_k), where the
// ridge alpha (average marginal variance) keeps small clusters non-singular.
MergeTree vvv_tree(const Matrix& x) {
  const int m = static_cast<int>(x.rows());
  const auto d = x.cols();
  const double alpha = ridge_for(x);
  Matrix means = x.transpose();
  std::vector<double> count(static_cast<std::size_t>(m), 1.0);
  std::vector<Matrix> scatter(static_cast<std::size_t>(m), Matrix::Zero(d, d));
  const double singleton_term = static_cast<double>(d) * std::log(alpha);
  std::vector<double> term(static_cast<std::size_t>(m), singleton_term);
  Matrix work(d, d);
  Vector diff(d);

  // log det((W + alpha I) / n) via an in-place Cholesky of `work`
  auto merged_term = [&](int i, int j) {
    const double ni = count[static_cast<std::size_t>(i)];
    const double nj = count[static_cast<std::size_t>(j)];
    const double nm = ni + nj;
    const double c = ni * nj / nm;
    diff = means.col(i) - means.col(j);
    const Matrix& wi = scatter[static_cast<std::size_t>(i)];
    const Matrix& wj = scatter[static_cast<std::size_t>(j)];
    double logdet = 0.0;
    for (Eigen::Index col = 0; col < d; ++col) {
      for (Eigen::Index row = col; row < d; ++row) {
        double v = wi(row, col) + wj(row, col) + c * diff(row) * diff(col);
        if (row == col) v += alpha;
        for (Eigen::Index k = 0; k < col; ++k) v -= work(row, k) * work(col, k);
        if (row == col) {
          if (!(v > 0.0)) return kInf;
          const double r = std::sqrt(v);
          work(row, col) = r;
          logdet += 2.0 * std::log(r);
        } else {
          work(row, col) = v / work(col, col);
        }
      }
    }
    return nm * (logdet - static_cast<double>(d) * std::log(nm));
  };
  auto cost = [&](int i, int j) {
    return merged_term(i, j) - term[static_cast<std::size_t>(i)] - term[static_cast<std::size_t>(j)];
  };
  auto merge = [&](int i, int j) {
    const double t = merged_term(i, j);
    const double ni = count[static_cast<std::size_t>(i)];
    const double nj = count[static_cast<std::size_t>(j)];
    diff = means.col(i) - means.col(j);
    scatter[static_cast<std::size_t>(i)] += scatter[static_cast<std::size_t>(j)] + (ni * nj / (ni + nj)) * diff * diff.transpose();
    scatter[static_cast<std::size_t>(j)].resize(0, 0);
    means.col(i) = (ni * means.col(i) + nj * means.col(j)) / (ni + nj);
    count[static_cast<std::size_t>(i)] = ni + nj;
    term[static_cast<std::size_t>(i)] = t;
  };
  return agglomerate_pairwise(m, cost, merge);
}

// Common-covariance criterion: minimise det(W + alpha I) of the pooled
// within-class scatter. Every merge changes W, so all pairs are rescored each
// step (cubic in the number of rows).
MergeTree eee_tree(const Matrix& x) {
  const int m = static_cast<int>(x.rows());
  const auto d = x.cols();
  const double alpha = ridge_for(x);
  Matrix means = x.transpose();
  std::vector<double> count(static_cast<std::size_t>(m), 1.0);
  std::vector<char> alive(static_cast<std::size_t>(m), 1);
  Matrix pooled = alpha * Matrix::Identity(d, d);
  std::vector<std::pair<int, int>> merges;
  std::vector<double> costs;
  for (int step = 0; step + 1 < m; ++step) {
    Eigen::LLT<Matrix> llt(pooled);
    const Matrix whitened = llt.matrixL().solve(means);
    int best_i = -1;
    int best_j = -1;
    double best = kInf;
    for (int i = 0; i < m; ++i) {
      if (!alive[static_cast<std::size_t>(i)]) continue;
      for (int j = i + 1; j < m; ++j) {
        if (!alive[static_cast<std::size_t>(j)]) continue;
        const double ni = count[static_cast<std::size_t>(i)];
        const double nj = count[static_cast<std::size_t>(j)];
        const double c = ni * nj / (ni + nj) * (whitened.col(i) - whitened.col(j)).squaredNorm();
        if (best_i < 0 || c < best) {
          best = c;
          best_i = i;
          best_j = j;
        }
      }
    }
    const double ni = count[static_cast<std::size_t>(best_i)];
    const double nj = count[static_cast<std::size_t>(best_j)];
    const Vector diff = means.col(best_i) - means.col(best_j);
    pooled += (ni * nj / (ni + nj)) * diff * diff.transpose();
    means.col(best_i) = (ni * means.col(best_i) + nj * means.col(best_j)) / (ni + nj);
    count[static_cast<std::size_t>(best_i)] = ni + nj;
    alive[static_cast<std::size_t>(best_j)] = 0;
    merges.emplace_back(best_i, best_j);
    costs.push_back(std::log1p(best));
  }
  return MergeTree(m, std::move(merges), std::move(costs));
}

}  // namespace

MergeTree hclust_init(const Matrix& x, CovarianceModel criterion, std::optional<std::span<const int>> rows) {
  Matrix used;
  if (rows) {
    validate_variable_set(*rows, static_cast<int>(x.rows()));
    used.resize(static_cast<Eigen::Index>(rows->size()), x.cols());
    for (std::size_t k = 0; k < rows->size(); ++k) used.row(static_cast<Eigen::Index>(k)) = x.row((*rows)[k]);
  }
  const Matrix& data = rows ? used : x;
  if (data.rows() < 1) throw DataError("hierarchical clustering needs at least one observation");
  switch (criterion) {
    case CovarianceModel::EII:
    case CovarianceModel::E: return ward_tree(data);
    case CovarianceModel::VVV:
    case CovarianceModel::V: return vvv_tree(data);
    case CovarianceModel::EEE: return eee_tree(data);
    default:
      throw DataError(fmt::format("hierarchical criterion {} not supported (use EII, EEE or VVV)", model_name(criterion)));
  }
}

Matrix hc_transform(const Matrix& x, HcUse use) {
  if (use == HcUse::vars) return x;
  const auto n = x.rows();
  Matrix z = x.rowwise() - x.colwise().mean();
  if (n > 1) {
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
      const double sd = std::sqrt(z.col(j).squaredNorm() / static_cast<double>(n - 1));
      if (sd > 0.0) z.col(j) /= sd;
    }
  }
  if (use == HcUse::std) return z;
  const Eigen::JacobiSVD<Matrix> svd(z, Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double floor = std::max(sv.size() > 0 ? sv(0) : 0.0, 1.0) * 1e-12;
  Vector scale(sv.size());
  for (Eigen::Index k = 0; k < sv.size(); ++k) scale(k) = 1.0 / std::sqrt(std::max(sv(k), floor));
  return z * svd.matrixV() * scale.asDiagonal();
}

std::vector<int> extend_partition(const Matrix& x, std::span<const int> rows, std::span<const int> partition) {
  if (rows.size() != partition.size()) throw DataError("partition does not cover the sampled rows");
  validate_variable_set(rows, static_cast<int>(x.rows()));
  int G = 0;
  for (const int l : partition) {
    if (l < 0) throw DataError("negative class label");
    G = std::max(G, l + 1);
  }
  Matrix centroids = Matrix::Zero(x.cols(), G);
  Vector counts = Vector::Zero(G);
  std::vector<int> out(static_cast<std::size_t>(x.rows()), -1);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    centroids.col(partition[k]) += x.row(rows[k]).transpose();
    counts(partition[k]) += 1.0;
    out[static_cast<std::size_t>(rows[k])] = partition[k];
  }
  for (int g = 0; g < G; ++g) {
    if (counts(g) > 0) centroids.col(g) /= counts(g);
  }
  // equal pooled spherical variance: highest density is the nearest centroid
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (out[static_cast<std::size_t>(i)] >= 0) continue;
    int best = -1;
    double best_dist = kInf;
    for (int g = 0; g < G; ++g) {
      if (counts(g) <= 0) continue;
      const double dist = (x.row(i).transpose() - centroids.col(g)).squaredNorm();
      if (best < 0 || dist < best_dist) {
        best = g;
        best_dist = dist;
      }
    }
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

}  // namespace varsel

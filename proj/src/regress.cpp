#include "varsel/regress.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace varsel {

namespace {

// Residual variance at or below this fraction of var(y) is an exact fit.
constexpr double kDegenerateRatio = 1e-12;
constexpr double kPivotRatio = 1e-10;
constexpr int kExhaustiveMax = 10;

double gaussian_loglik(double sigma2, double n) {
  return -0.5 * n * (std::log(2.0 * std::numbers::pi * sigma2) + 1.0);
}

double score(double rss, double n, int p) {
  return 2.0 * gaussian_loglik(rss / n, n) - static_cast<double>(p + 2) * std::log(n);
}

// Centered cross-products for scoring many subsets without refitting from scratch.
struct CrossProducts {
  Matrix gram;  // Xc' Xc
  Vector xy;    // Xc' yc
  double yy = 0.0;

  CrossProducts(const Vector& y, const Matrix& X) {
    const Matrix xc = X.rowwise() - X.colwise().mean();
    const Vector yc = y.array() - y.mean();
    gram = xc.transpose() * xc;
    xy = xc.transpose() * yc;
    yy = yc.squaredNorm();
  }

  /// Residual sum of squares regressing on `cols`; NaN when they are collinear.
  double rss(const std::vector<int>& cols) const {
    const auto p = static_cast<Eigen::Index>(cols.size());
    if (p == 0) return yy;
    Matrix g(p, p);
    Vector b(p);
    for (Eigen::Index a = 0; a < p; ++a) {
      b(a) = xy(cols[static_cast<std::size_t>(a)]);
      for (Eigen::Index c = 0; c < p; ++c) g(a, c) = gram(cols[static_cast<std::size_t>(a)], cols[static_cast<std::size_t>(c)]);
    }
    Eigen::LLT<Matrix> llt(g);
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::quiet_NaN();
    const Vector diag = llt.matrixLLT().diagonal();
    for (Eigen::Index a = 0; a < p; ++a) {
      if (diag(a) * diag(a) <= kPivotRatio * g(a, a)) return std::numeric_limits<double>::quiet_NaN();
    }
    return yy - b.dot(llt.solve(b));
  }

  // BIC-comparable score; an exact fit scores +inf so it is always chosen and
  // then reported as degenerate by the refit.
  double subset_score(const std::vector<int>& cols, double n) const {
    const double r = rss(cols);
    if (std::isnan(r)) return -std::numeric_limits<double>::infinity();
    if (r <= kDegenerateRatio * yy) return std::numeric_limits<double>::infinity();
    return score(r, n, static_cast<int>(cols.size()));
  }
};

}  // namespace

std::string_view status_name(RegressionStatus status) {
  switch (status) {
    case RegressionStatus::ok: return "ok";
    case RegressionStatus::degenerate: return "degenerate (zero residual)";
    case RegressionStatus::rank_deficient: return "rank deficient";
    case RegressionStatus::too_few_observations: return "too few observations";
  }
  return "unknown";
}

RegressionFit reg_bic(const Vector& y, const Matrix& X) {
  const auto n = y.size();
  const auto p = X.cols();
  if (X.rows() != n) throw DataError("regressors and response differ in length");
  RegressionFit fit;
  fit.regressors.resize(static_cast<std::size_t>(p));
  std::iota(fit.regressors.begin(), fit.regressors.end(), 0);
  fit.df = static_cast<int>(p) + 2;
  fit.bic = -std::numeric_limits<double>::infinity();
  fit.loglik = -std::numeric_limits<double>::infinity();
  if (n <= p + 2) {
    fit.status = RegressionStatus::too_few_observations;
    return fit;
  }
  Matrix design(n, p + 1);
  design.col(0).setOnes();
  design.rightCols(p) = X;
  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  if (qr.rank() < p + 1) {
    fit.status = RegressionStatus::rank_deficient;
    return fit;
  }
  fit.coefficients = qr.solve(y);
  const double rss = (y - design * fit.coefficients).squaredNorm();
  const double syy = (y.array() - y.mean()).square().sum();
  fit.sigma2 = rss / static_cast<double>(n);
  if (!(syy > 0.0) || rss <= kDegenerateRatio * syy) {
    fit.status = RegressionStatus::degenerate;
    return fit;
  }
  fit.loglik = gaussian_loglik(fit.sigma2, static_cast<double>(n));
  fit.bic = 2.0 * fit.loglik - static_cast<double>(fit.df) * std::log(static_cast<double>(n));
  return fit;
}

RegressionFit reg_subset_bic(const Vector& y, const Matrix& X, RegressionMode mode) {
  if (mode == RegressionMode::all || X.cols() == 0) return reg_bic(y, X);
  const auto n = static_cast<double>(y.size());
  const int p = static_cast<int>(X.cols());
  const CrossProducts cp(y, X);

  std::vector<int> best_cols;
  double best = cp.subset_score(best_cols, n);
  if (p <= kExhaustiveMax) {
    std::vector<int> cols;
    for (unsigned mask = 1; mask < (1u << p); ++mask) {
      cols.clear();
      for (int j = 0; j < p; ++j) {
        if (mask & (1u << j)) cols.push_back(j);
      }
      if (static_cast<double>(cols.size()) + 2.0 >= n) continue;
      const double s = cp.subset_score(cols, n);
      if (s > best) {
        best = s;
        best_cols = cols;
      }
    }
  } else {
    std::vector<char> used(static_cast<std::size_t>(p), 0);
    for (;;) {
      int add = -1;
      double add_score = best;
      for (int j = 0; j < p; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        std::vector<int> trial = best_cols;
        trial.push_back(j);
        if (static_cast<double>(trial.size()) + 2.0 >= n) continue;
        const double s = cp.subset_score(trial, n);
        if (s > add_score) {
          add = j;
          add_score = s;
        }
      }
      if (add < 0) break;
      used[static_cast<std::size_t>(add)] = 1;
      best_cols.push_back(add);
      best = add_score;
      if (std::isinf(best)) break;
    }
    std::sort(best_cols.begin(), best_cols.end());
  }

  RegressionFit fit = reg_bic(y, select_columns(X, best_cols));
  fit.regressors = best_cols;
  return fit;
}

}  // namespace varsel

#pragma once

#include "varsel/dataset.hpp"

#include <string_view>
#include <vector>

namespace varsel {

enum class RegressionStatus { ok, degenerate, rank_deficient, too_few_observations };

std::string_view status_name(RegressionStatus status);

/// Gaussian linear regression of one column on zero or more others.
struct RegressionFit {
  std::vector<int> regressors;  // column indices into the X passed in
  Vector coefficients;          // intercept first
  double sigma2 = 0.0;          // RSS / n
  double loglik = 0.0;
  int df = 0;                   // regressors + intercept + variance
  double bic = 0.0;
  RegressionStatus status = RegressionStatus::ok;

  bool ok() const { return status == RegressionStatus::ok; }
};

enum class RegressionMode { all, subset };

/// Least-squares fit of y on all columns of X (X may have zero columns) with the
/// maximum-likelihood variance. A zero-residual fit is reported as degenerate.
RegressionFit reg_bic(const Vector& y, const Matrix& X);

/// `all`: reg_bic on every column. `subset`: the maximum-BIC regressor subset,
/// by exhaustive enumeration for up to 10 columns and forward stepwise addition
/// from the intercept-only model beyond that.
RegressionFit reg_subset_bic(const Vector& y, const Matrix& X, RegressionMode mode);

}  // namespace varsel

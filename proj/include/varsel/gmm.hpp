#pragma once

#include "varsel/dataset.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace varsel {

/// Covariance parameterisations Sigma_g = lambda_g D_g A_g D_g^T.
/// First letter volume, second shape, third orientation (E equal, V varying, I identity).
/// E and V are the univariate equal/unequal variance models.
enum class CovarianceModel { E, V, EII, VII, EEI, VEI, EVI, VVI, EEE, EEV, VEV, VVV };

std::string_view model_name(CovarianceModel model);
std::string_view model_description(CovarianceModel model);
std::optional<CovarianceModel> parse_model(std::string_view name);
bool is_univariate(CovarianceModel model);

const std::vector<CovarianceModel>& univariate_models();
/// The ten multivariate models in mclust's conventional order.
const std::vector<CovarianceModel>& multivariate_models();

/// Number of free parameters of a G-component mixture in d dimensions.
/// Throws DataError when the model does not apply to d.
int n_params(CovarianceModel model, int d, int G);

/// 2 * loglik - df * log(n); larger is better.
double bic(double loglik, int df, int n);

struct MixtureParams {
  Vector weights;                   // length G, sums to one
  Matrix means;                     // d x G
  std::vector<Matrix> covariances;  // G symmetric positive-definite d x d
  // volume and shape factors of the last M-step; warm starts the iterative models
  Vector scale;
  Vector shape;

  int G() const { return static_cast<int>(weights.size()); }
  int d() const { return static_cast<int>(means.rows()); }
};

enum class FitStatus { ok, component_collapse, singular_covariance, not_finite, too_few_observations };

std::string_view status_name(FitStatus status);

/// Raised by m_step and log_density on degenerate parameters.
class FitFailure : public std::runtime_error {
 public:
  FitFailure(FitStatus status, const std::string& what) : std::runtime_error(what), status_(status) {}
  FitStatus status() const { return status_; }

 private:
  FitStatus status_;
};

/// Variables seen by the hierarchical initialisation: the raw columns, the
/// standardised columns, or standardised columns rotated onto their singular
/// vectors and scaled by 1 / sqrt(singular value).
enum class HcUse { vars, std, svd };

std::string_view hc_use_name(HcUse use);
std::optional<HcUse> parse_hc_use(std::string_view name);

struct FitOptions {
  double tol = 1e-5;       // relative log-likelihood change
  int max_iter = 1000;
  CovarianceModel hc_model = CovarianceModel::VVV;
  HcUse hc_use = HcUse::svd;
  bool allow_eee = true;
  bool samp = false;
  int sampsize = 0;        // 0 selects round(n / 2)
  std::uint64_t seed = 0;
};

struct FitResult {
  CovarianceModel model = CovarianceModel::VVV;
  int G = 0;
  int n = 0;
  MixtureParams params;
  double loglik = 0.0;
  int df = 0;
  double bic = 0.0;
  Matrix z;                         // n x G responsibilities
  std::vector<int> classification;  // 0-based MAP labels
  bool converged = false;
  int iterations = 0;
  std::vector<double> loglik_trace;  // loglik after each E-step
  FitStatus status = FitStatus::ok;
  std::string message;

  bool ok() const { return status == FitStatus::ok; }
};

/// Per-observation log mixture density, computed with log-sum-exp.
Vector log_density(const MixtureParams& params, const Matrix& x);

struct EStep {
  Matrix z;
  double loglik = 0.0;
};

EStep e_step(const MixtureParams& params, const Matrix& x);

/// Constrained maximisation of the expected complete-data log-likelihood.
/// `warm` seeds the inner fixed-point iteration of VEI and VEV so that every
/// M-step is non-decreasing; other models ignore it.
MixtureParams m_step(CovarianceModel model, const Matrix& x, const Matrix& z, const MixtureParams* warm = nullptr);

/// EM from a hard partition with labels 0..G-1. Failures are reported in the
/// result's status, never thrown.
FitResult em_fit(const Matrix& x, int G, CovarianceModel model, std::span<const int> init_partition,
                 const FitOptions& opts = {});

/// Row-argmax of z, ties to the lowest component.
std::vector<int> map_classification(const Matrix& z);

/// Fits every (G, model) pair from the hierarchical initialisation and returns
/// the maximum-BIC fit (ties to smaller G, then earlier model). Throws
/// FitFailure when no pair produces a finite BIC.
FitResult best_fit(const Matrix& x, std::span<const int> Gs, std::span<const CovarianceModel> models,
                   const FitOptions& opts = {});

/// Largest relative deviation of `covariances` from the equality pattern of
/// `model` (volume, shape, orientation); 0 for a perfect match.
double constraint_violation(CovarianceModel model, std::span<const Matrix> covariances);

/// Text block: model, G, log-likelihood, n, df, BIC and clustering table.
std::string summarize(const FitResult& fit);

}  // namespace varsel

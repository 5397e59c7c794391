#include "varsel/gmm.hpp"

#include "varsel/hclust.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace varsel {

namespace {

struct ModelInfo {
  CovarianceModel model;
  std::string_view name;
  std::string_view description;
};

constexpr std::array<ModelInfo, 12> kModels{{
    {CovarianceModel::E, "E", "univariate, equal variance"},
    {CovarianceModel::V, "V", "univariate, unequal variance"},
    {CovarianceModel::EII, "EII", "spherical, equal volume"},
    {CovarianceModel::VII, "VII", "spherical, unequal volume"},
    {CovarianceModel::EEI, "EEI", "diagonal, equal volume and shape"},
    {CovarianceModel::VEI, "VEI", "diagonal, equal shape"},
    {CovarianceModel::EVI, "EVI", "diagonal, equal volume, varying shape"},
    {CovarianceModel::VVI, "VVI", "diagonal, varying volume and shape"},
    {CovarianceModel::EEE, "EEE", "ellipsoidal, equal volume, shape, and orientation"},
    {CovarianceModel::EEV, "EEV", "ellipsoidal, equal volume and shape"},
    {CovarianceModel::VEV, "VEV", "ellipsoidal, equal shape"},
    {CovarianceModel::VVV, "VVV", "ellipsoidal, varying volume, shape, and orientation"},
}};

const ModelInfo& info(CovarianceModel model) { return kModels[static_cast<std::size_t>(model)]; }

// Reciprocal condition number below which a covariance counts as singular, and
// the smallest eigenvalue allowed relative to the average marginal data variance.
constexpr double kRcondMin = 1e-12;
constexpr double kScaleMin = 1e-12;
constexpr double kMassMin = 1e-10;
constexpr int kInnerIterations = 20;
constexpr double kInnerTol = 1e-8;

double data_scale(const Matrix& x) {
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const double ss = (x.rowwise() - mean).squaredNorm();
  return ss / static_cast<double>(x.rows() * x.cols());
}

void check_eigenvalues(const Vector& eig, double scale, int component) {
  const double lo = eig.minCoeff();
  const double hi = eig.maxCoeff();
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo <= 0.0 || lo <= kRcondMin * hi || lo <= kScaleMin * scale) {
    throw FitFailure(FitStatus::singular_covariance, fmt::format("singular covariance in component {}", component + 1));
  }
}

// Eigen-decomposition of a symmetric matrix with eigenvalues in decreasing order.
void eigen_desc(const Matrix& w, Vector& values, Matrix& vectors) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(w);
  if (es.info() != Eigen::Success) throw FitFailure(FitStatus::not_finite, "eigen-decomposition failed");
  values = es.eigenvalues().reverse();
  vectors = es.eigenvectors().rowwise().reverse();
  values = values.cwiseMax(0.0);
}

double geometric_mean(const Vector& v) { return std::exp(v.array().log().mean()); }

// Alternating maximisation over per-component volumes and a shared unit-determinant
// shape. omega(j, k) is the j-th (sorted) scatter eigenvalue of component k.
void equal_shape_iterate(const Matrix& omega, const Vector& nk, Vector& shape, Vector& scale) {
  const auto d = omega.rows();
  const auto G = omega.cols();
  auto update_scale = [&] {
    for (Eigen::Index k = 0; k < G; ++k) {
      scale(k) = (omega.col(k).array() / shape.array()).sum() / (static_cast<double>(d) * nk(k));
    }
  };
  update_scale();
  for (int it = 0; it < kInnerIterations; ++it) {
    Vector next = Vector::Zero(d);
    for (Eigen::Index k = 0; k < G; ++k) next += omega.col(k) / scale(k);
    if (!(next.array() > 0.0).all()) {
      throw FitFailure(FitStatus::singular_covariance, "degenerate shape matrix");
    }
    next /= geometric_mean(next);
    const Vector old_scale = scale;
    const double shape_change = (next - shape).cwiseAbs().maxCoeff() / next.cwiseAbs().maxCoeff();
    shape = next;
    update_scale();
    const double scale_change = ((scale - old_scale).array().abs() / scale.array().abs()).maxCoeff();
    if (std::max(shape_change, scale_change) < kInnerTol) break;
  }
}

}  // namespace

std::string_view model_name(CovarianceModel model) { return info(model).name; }
std::string_view model_description(CovarianceModel model) { return info(model).description; }

std::optional<CovarianceModel> parse_model(std::string_view name) {
  for (const auto& m : kModels) {
    if (m.name == name) return m.model;
  }
  return std::nullopt;
}

bool is_univariate(CovarianceModel model) { return model == CovarianceModel::E || model == CovarianceModel::V; }

const std::vector<CovarianceModel>& univariate_models() {
  static const std::vector<CovarianceModel> models{CovarianceModel::E, CovarianceModel::V};
  return models;
}

const std::vector<CovarianceModel>& multivariate_models() {
  using enum CovarianceModel;
  static const std::vector<CovarianceModel> models{EII, VII, EEI, VEI, EVI, VVI, EEE, EEV, VEV, VVV};
  return models;
}

std::string_view hc_use_name(HcUse use) {
  switch (use) {
    case HcUse::vars: return "VARS";
    case HcUse::std: return "STD";
    case HcUse::svd: return "SVD";
  }
  return "unknown";
}

std::optional<HcUse> parse_hc_use(std::string_view name) {
  for (const auto u : {HcUse::vars, HcUse::std, HcUse::svd}) {
    if (hc_use_name(u) == name) return u;
  }
  return std::nullopt;
}

std::string_view status_name(FitStatus status) {
  switch (status) {
    case FitStatus::ok: return "ok";
    case FitStatus::component_collapse: return "component collapse";
    case FitStatus::singular_covariance: return "singular covariance";
    case FitStatus::not_finite: return "non-finite likelihood";
    case FitStatus::too_few_observations: return "too few observations";
  }
  return "unknown";
}

int n_params(CovarianceModel model, int d, int G) {
  if (G < 1 || d < 1) throw DataError("n_params needs d >= 1 and G >= 1");
  if (is_univariate(model) != (d == 1)) {
    throw DataError(fmt::format("model {} does not apply to {} dimension(s)", model_name(model), d));
  }
  const int orient = d * (d - 1) / 2;
  int cov = 0;
  switch (model) {
    case CovarianceModel::E: cov = 1; break;
    case CovarianceModel::V: cov = G; break;
    case CovarianceModel::EII: cov = 1; break;
    case CovarianceModel::VII: cov = G; break;
    case CovarianceModel::EEI: cov = d; break;
    case CovarianceModel::VEI: cov = G + (d - 1); break;
    case CovarianceModel::EVI: cov = 1 + G * (d - 1); break;
    case CovarianceModel::VVI: cov = G * d; break;
    case CovarianceModel::EEE: cov = d * (d + 1) / 2; break;
    case CovarianceModel::EEV: cov = 1 + (d - 1) + G * orient; break;
    case CovarianceModel::VEV: cov = G + (d - 1) + G * orient; break;
    case CovarianceModel::VVV: cov = G * d * (d + 1) / 2; break;
  }
  return (G - 1) + G * d + cov;
}

double bic(double loglik, int df, int n) { return 2.0 * loglik - static_cast<double>(df) * std::log(static_cast<double>(n)); }

namespace {

// n x G matrix of log(pi_k) + log phi(x_i | mu_k, Sigma_k).
Matrix weighted_log_components(const MixtureParams& params, const Matrix& x) {
  const auto d = x.cols();
  const int G = params.G();
  if (params.d() != d) throw DataError(fmt::format("parameters are {}-dimensional, data {}", params.d(), d));
  const double log2pi = std::log(2.0 * std::numbers::pi);
  Matrix logp(x.rows(), G);
  for (int k = 0; k < G; ++k) {
    Eigen::LLT<Matrix> llt(params.covariances[static_cast<std::size_t>(k)]);
    if (llt.info() != Eigen::Success) {
      throw FitFailure(FitStatus::singular_covariance, fmt::format("covariance {} not positive definite", k + 1));
    }
    const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    const Matrix centered = (x.rowwise() - params.means.col(k).transpose()).transpose();
    const Matrix solved = llt.matrixL().solve(centered);
    logp.col(k) = (-0.5 * (solved.colwise().squaredNorm().array() + logdet + static_cast<double>(d) * log2pi) +
                   std::log(params.weights(k)))
                      .matrix()
                      .transpose();
  }
  return logp;
}

}  // namespace

namespace {

// Row-wise log-sum-exp; leaves exp(logp - max) in `logp` for the caller.
Vector log_sum_exp_rows(Matrix& logp) {
  const Vector m = logp.rowwise().maxCoeff();
  logp.colwise() -= m;
  logp = logp.array().exp().matrix();
  const Vector s = logp.rowwise().sum();
  Vector out = m.array() + s.array().log();
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m(i))) out(i) = m(i);
  }
  return out;
}

}  // namespace

Vector log_density(const MixtureParams& params, const Matrix& x) {
  Matrix logp = weighted_log_components(params, x);
  return log_sum_exp_rows(logp);
}

EStep e_step(const MixtureParams& params, const Matrix& x) {
  Matrix e = weighted_log_components(params, x);
  const Vector ll = log_sum_exp_rows(e);
  const double total = ll.sum();
  if (!std::isfinite(total)) throw FitFailure(FitStatus::not_finite, "log-likelihood is not finite");
  EStep out;
  out.z = e.array().colwise() / e.rowwise().sum().array();
  out.loglik = total;
  return out;
}

MixtureParams m_step(CovarianceModel model, const Matrix& x, const Matrix& z, const MixtureParams* warm) {
  using enum CovarianceModel;
  const auto n = x.rows();
  const auto d = x.cols();
  const auto G = z.cols();
  if (z.rows() != n) throw DataError("responsibility matrix has wrong number of rows");
  if (is_univariate(model) != (d == 1)) {
    throw DataError(fmt::format("model {} does not apply to {} dimension(s)", model_name(model), d));
  }
  const Vector nk = z.colwise().sum().transpose();
  for (Eigen::Index k = 0; k < G; ++k) {
    if (!(nk(k) >= kMassMin)) {
      throw FitFailure(FitStatus::component_collapse, fmt::format("component {} has no mass", k + 1));
    }
  }
  const double scale = data_scale(x);

  MixtureParams p;
  p.weights = nk / static_cast<double>(n);
  p.means = (x.transpose() * z).array().rowwise() / nk.transpose().array();
  p.covariances.assign(static_cast<std::size_t>(G), Matrix::Zero(d, d));

  const bool diagonal_only = model == E || model == V || model == EII || model == VII || model == EEI ||
                             model == VEI || model == EVI || model == VVI;
  // per-component scatter: full matrices or just their diagonals
  std::vector<Matrix> scatter;
  Matrix scatter_diag(d, G);
  for (Eigen::Index k = 0; k < G; ++k) {
    const Matrix centered = x.rowwise() - p.means.col(k).transpose();
    if (diagonal_only) {
      scatter_diag.col(k) = (centered.array().square().colwise() * z.col(k).array()).colwise().sum().transpose();
    } else {
      const Matrix weighted = centered.array().colwise() * z.col(k).array();
      Matrix w = weighted.transpose() * centered;
      w = 0.5 * (w + w.transpose());
      scatter_diag.col(k) = w.diagonal();
      scatter.push_back(std::move(w));
    }
  }

  auto set_diag = [&](Eigen::Index k, const Vector& v) {
    p.covariances[static_cast<std::size_t>(k)] = v.asDiagonal();
    check_eigenvalues(v, scale, static_cast<int>(k));
  };

  switch (model) {
    case E:
    case EII: {
      const double s2 = scatter_diag.sum() / static_cast<double>(n * d);
      for (Eigen::Index k = 0; k < G; ++k) set_diag(k, Vector::Constant(d, s2));
      break;
    }
    case V:
    case VII: {
      for (Eigen::Index k = 0; k < G; ++k) {
        set_diag(k, Vector::Constant(d, scatter_diag.col(k).sum() / (static_cast<double>(d) * nk(k))));
      }
      break;
    }
    case EEI: {
      const Vector pooled = scatter_diag.rowwise().sum() / static_cast<double>(n);
      for (Eigen::Index k = 0; k < G; ++k) set_diag(k, pooled);
      break;
    }
    case VEI: {
      Vector shape = Vector::Ones(d);
      if (warm && warm->shape.size() == d && (warm->shape.array() > 0).all()) shape = warm->shape;
      Vector vol(G);
      equal_shape_iterate(scatter_diag, nk, shape, vol);
      for (Eigen::Index k = 0; k < G; ++k) set_diag(k, vol(k) * shape);
      p.shape = shape;
      p.scale = vol;
      break;
    }
    case EVI: {
      Vector det_root(G);
      for (Eigen::Index k = 0; k < G; ++k) {
        if (!(scatter_diag.col(k).array() > 0).all()) {
          throw FitFailure(FitStatus::singular_covariance, fmt::format("singular covariance in component {}", k + 1));
        }
        det_root(k) = geometric_mean(scatter_diag.col(k));
      }
      const double vol = det_root.sum() / static_cast<double>(n);
      for (Eigen::Index k = 0; k < G; ++k) set_diag(k, vol * scatter_diag.col(k) / det_root(k));
      break;
    }
    case VVI: {
      for (Eigen::Index k = 0; k < G; ++k) set_diag(k, scatter_diag.col(k) / nk(k));
      break;
    }
    case EEE: {
      Matrix pooled = Matrix::Zero(d, d);
      for (const auto& w : scatter) pooled += w;
      pooled /= static_cast<double>(n);
      Vector eig;
      Matrix vec;
      eigen_desc(pooled, eig, vec);
      check_eigenvalues(eig, scale, 0);
      for (auto& c : p.covariances) c = pooled;
      break;
    }
    case EEV: {
      Vector summed = Vector::Zero(d);
      std::vector<Matrix> orient(static_cast<std::size_t>(G));
      for (Eigen::Index k = 0; k < G; ++k) {
        Vector eig;
        eigen_desc(scatter[static_cast<std::size_t>(k)], eig, orient[static_cast<std::size_t>(k)]);
        summed += eig;
      }
      const Vector common = summed / static_cast<double>(n);
      check_eigenvalues(common, scale, 0);
      for (Eigen::Index k = 0; k < G; ++k) {
        const Matrix& dk = orient[static_cast<std::size_t>(k)];
        p.covariances[static_cast<std::size_t>(k)] = dk * common.asDiagonal() * dk.transpose();
      }
      break;
    }
    case VEV: {
      Matrix omega(d, G);
      std::vector<Matrix> orient(static_cast<std::size_t>(G));
      for (Eigen::Index k = 0; k < G; ++k) {
        Vector eig;
        eigen_desc(scatter[static_cast<std::size_t>(k)], eig, orient[static_cast<std::size_t>(k)]);
        omega.col(k) = eig;
      }
      Vector shape = Vector::Ones(d);
      if (warm && warm->shape.size() == d && (warm->shape.array() > 0).all()) shape = warm->shape;
      Vector vol(G);
      equal_shape_iterate(omega, nk, shape, vol);
      for (Eigen::Index k = 0; k < G; ++k) {
        const Vector eig = vol(k) * shape;
        check_eigenvalues(eig, scale, static_cast<int>(k));
        const Matrix& dk = orient[static_cast<std::size_t>(k)];
        p.covariances[static_cast<std::size_t>(k)] = dk * eig.asDiagonal() * dk.transpose();
      }
      p.shape = shape;
      p.scale = vol;
      break;
    }
    case VVV: {
      for (Eigen::Index k = 0; k < G; ++k) {
        Matrix c = scatter[static_cast<std::size_t>(k)] / nk(k);
        Vector eig;
        Matrix vec;
        eigen_desc(c, eig, vec);
        check_eigenvalues(eig, scale, static_cast<int>(k));
        p.covariances[static_cast<std::size_t>(k)] = std::move(c);
      }
      break;
    }
  }
  return p;
}

std::vector<int> map_classification(const Matrix& z) {
  std::vector<int> labels(static_cast<std::size_t>(z.rows()));
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < z.cols(); ++k) {
      if (z(i, k) > z(i, best)) best = k;
    }
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return labels;
}

FitResult em_fit(const Matrix& x, int G, CovarianceModel model, std::span<const int> init_partition,
                 const FitOptions& opts) {
  const auto n = static_cast<int>(x.rows());
  const auto d = static_cast<int>(x.cols());
  if (opts.tol <= 0.0 || opts.max_iter < 1) throw DataError("EM needs tol > 0 and max_iter >= 1");
  if (is_univariate(model) != (d == 1)) {
    throw DataError(fmt::format("model {} does not apply to {} dimension(s)", model_name(model), d));
  }
  if (static_cast<int>(init_partition.size()) != n) throw DataError("initial partition length differs from n");

  FitResult fit;
  fit.model = model;
  fit.G = G;
  fit.n = n;
  fit.df = n_params(model, d, G);
  fit.bic = -std::numeric_limits<double>::infinity();
  fit.loglik = -std::numeric_limits<double>::infinity();

  if (G < 1 || G > n) {
    fit.status = FitStatus::too_few_observations;
    fit.message = fmt::format("cannot fit {} components to {} observations", G, n);
    return fit;
  }
  Matrix z = Matrix::Zero(n, G);
  for (int i = 0; i < n; ++i) {
    const int label = init_partition[static_cast<std::size_t>(i)];
    if (label < 0 || label >= G) throw DataError(fmt::format("initial label {} outside [0, {})", label, G));
    z(i, label) = 1.0;
  }

  try {
    MixtureParams params = m_step(model, x, z);
    double previous = -std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
      EStep es = e_step(params, x);
      fit.loglik_trace.push_back(es.loglik);
      fit.iterations = iter;
      z = std::move(es.z);
      fit.loglik = es.loglik;
      if (G == 1 || (iter > 1 && std::abs(es.loglik - previous) / (1.0 + std::abs(es.loglik)) < opts.tol)) {
        fit.converged = true;
        break;
      }
      if (iter == opts.max_iter) break;
      previous = es.loglik;
      params = m_step(model, x, z, &params);
    }
    fit.params = std::move(params);
  } catch (const FitFailure& failure) {
    fit.status = failure.status();
    fit.message = failure.what();
    fit.loglik = -std::numeric_limits<double>::infinity();
    return fit;
  }
  fit.classification = map_classification(z);
  fit.z = std::move(z);
  fit.bic = bic(fit.loglik, fit.df, n);
  return fit;
}

FitResult best_fit(const Matrix& x, std::span<const int> Gs, std::span<const CovarianceModel> models,
                   const FitOptions& opts) {
  if (Gs.empty() || models.empty()) throw DataError("best_fit needs at least one G and one model");
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  for (const auto m : models) {
    if (is_univariate(m) != (d == 1)) {
      throw DataError(fmt::format("model {} does not apply to {} dimension(s)", model_name(m), d));
    }
  }

  std::vector<int> rows;
  if (opts.samp) {
    const int size = opts.sampsize > 0 ? std::min(opts.sampsize, n) : static_cast<int>(std::lround(n / 2.0));
    if (size >= 1 && size < n) rows = subsample_rows(n, size, opts.seed);
  }

  std::optional<Matrix> hc_data;
  auto partitions_for = [&](CovarianceModel criterion) {
    if (!hc_data) hc_data = hc_transform(x, opts.hc_use);
    std::optional<std::span<const int>> used;
    if (!rows.empty()) used = std::span<const int>(rows);
    MergeTree tree = hclust_init(*hc_data, criterion, used);
    return [tree = std::move(tree), &hc_data, &rows](int G) -> std::optional<std::vector<int>> {
      if (G > tree.leaves()) return std::nullopt;
      std::vector<int> cut = tree.cut(G);
      if (rows.empty()) return cut;
      return extend_partition(*hc_data, rows, cut);
    };
  };

  std::vector<FitResult> fits;
  auto run_all = [&](CovarianceModel criterion, bool hierarchical_only) {
    std::optional<decltype(partitions_for(criterion))> partitions;
    for (const int G : Gs) {
      if (hierarchical_only && G == 1) continue;
      std::optional<std::vector<int>> init;
      if (G == 1) {
        init = std::vector<int>(static_cast<std::size_t>(n), 0);
      } else {
        if (!partitions) partitions.emplace(partitions_for(criterion));
        init = (*partitions)(G);
      }
      for (const auto m : models) {
        if (!init) {
          FitResult skipped;
          skipped.model = m;
          skipped.G = G;
          skipped.n = n;
          skipped.status = FitStatus::too_few_observations;
          skipped.bic = -std::numeric_limits<double>::infinity();
          fits.push_back(std::move(skipped));
          continue;
        }
        fits.push_back(em_fit(x, G, m, *init, opts));
      }
    }
  };

  run_all(opts.hc_model, false);
  const bool any_hierarchical = std::any_of(Gs.begin(), Gs.end(), [](int g) { return g > 1; });
  const bool hierarchical_ok = std::any_of(fits.begin(), fits.end(), [](const FitResult& f) { return f.G > 1 && f.ok(); });
  if (opts.allow_eee && opts.hc_model == CovarianceModel::VVV && any_hierarchical && !hierarchical_ok) {
    run_all(CovarianceModel::EEE, true);
  }

  const FitResult* best = nullptr;
  for (const auto& f : fits) {
    if (!f.ok() || !std::isfinite(f.bic)) continue;
    if (best == nullptr || f.bic > best->bic ||
        (f.bic == best->bic && f.G < best->G)) {
      best = &f;
    }
  }
  if (best == nullptr) throw FitFailure(FitStatus::not_finite, "no (G, model) pair produced a finite BIC");
  return *best;
}

double constraint_violation(CovarianceModel model, std::span<const Matrix> covariances) {
  using enum CovarianceModel;
  if (covariances.empty()) return 0.0;
  const auto d = covariances.front().rows();
  double worst = 0.0;
  const auto rel = [](double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); };

  struct Parts {
    double volume;
    Vector shape;         // eigenvalues / volume, descending
    Vector diag_shape;    // diagonal / volume, coordinate order
    double off_diagonal;  // relative size of the off-diagonal part
  };
  std::vector<Parts> parts;
  for (const auto& S : covariances) {
    worst = std::max(worst, (S - S.transpose()).cwiseAbs().maxCoeff() / std::max(S.cwiseAbs().maxCoeff(), 1e-300));
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(S);
    Vector ev = eig.eigenvalues().reverse();
    const double volume = std::exp(ev.array().log().sum() / static_cast<double>(d));
    Matrix off = S;
    off.diagonal().setZero();
    parts.push_back({volume, ev / volume, S.diagonal() / volume,
                     off.cwiseAbs().maxCoeff() / std::max(S.diagonal().cwiseAbs().maxCoeff(), 1e-300)});
  }

  const bool equal_volume = model == E || model == EII || model == EEI || model == EVI || model == EEE || model == EEV;
  const bool spherical = model == EII || model == VII;
  const bool diagonal = spherical || model == EEI || model == VEI || model == EVI || model == VVI;
  const bool equal_shape = model == EEI || model == VEI || model == EEE || model == EEV || model == VEV;

  for (std::size_t g = 0; g < parts.size(); ++g) {
    if (equal_volume) worst = std::max(worst, rel(parts[g].volume, parts[0].volume));
    if (diagonal && d > 1) worst = std::max(worst, parts[g].off_diagonal);
    for (Eigen::Index j = 0; j < d; ++j) {
      if (spherical) worst = std::max(worst, rel(parts[g].shape(j), 1.0));
      if (equal_shape && diagonal) worst = std::max(worst, rel(parts[g].diag_shape(j), parts[0].diag_shape(j)));
      if (equal_shape && !diagonal) worst = std::max(worst, rel(parts[g].shape(j), parts[0].shape(j)));
    }
    if (model == EEE) {
      const auto& a = covariances[g];
      const auto& b = covariances[0];
      worst = std::max(worst, (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300));
    }
  }
  return worst;
}

std::string summarize(const FitResult& fit) {
  std::string out;
  out += "----------------------------------------------------\n";
  out += "Gaussian finite mixture model fitted by EM algorithm \n";
  out += "----------------------------------------------------\n\n";
  if (!fit.ok()) {
    out += fmt::format("Fit failed ({}): {}\n", status_name(fit.status), fit.message);
    return out;
  }
  out += fmt::format("Mclust {} ({}) model with {} component{}:\n\n", model_name(fit.model),
                     model_description(fit.model), fit.G, fit.G == 1 ? "" : "s");
  const std::array<std::string, 4> head{"log.likelihood", "n", "df", "BIC"};
  const std::array<std::string, 4> vals{fmt::format("{:.7g}", fit.loglik), fmt::format("{}", fit.n),
                                        fmt::format("{}", fit.df), fmt::format("{:.7g}", fit.bic)};
  std::string h;
  std::string v;
  for (std::size_t j = 0; j < head.size(); ++j) {
    const auto w = std::max(head[j].size(), vals[j].size());
    h += fmt::format(" {:>{}}", head[j], w);
    v += fmt::format(" {:>{}}", vals[j], w);
  }
  out += h + "\n" + v + "\n\nClustering table:\n";
  std::vector<int> counts(static_cast<std::size_t>(fit.G), 0);
  for (const int c : fit.classification) ++counts[static_cast<std::size_t>(c)];
  std::size_t w = 1;
  for (int k = 0; k < fit.G; ++k) {
    w = std::max({w, fmt::format("{}", k + 1).size(), fmt::format("{}", counts[static_cast<std::size_t>(k)]).size()});
  }
  std::string labels;
  std::string cells;
  for (int k = 0; k < fit.G; ++k) {
    labels += fmt::format("{:>{}} ", k + 1, w);
    cells += fmt::format("{:>{}} ", counts[static_cast<std::size_t>(k)], w);
  }
  out += labels + "\n" + cells + "\n";
  return out;
}

}  // namespace varsel

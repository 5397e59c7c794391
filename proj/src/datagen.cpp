#include "varsel/datagen.hpp"

#include "varsel/rng.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>

namespace varsel {

namespace {

struct MaugisSetting {
  std::array<std::array<double, 8>, 2> beta;
  std::array<double, 8> omega;  // diagonal noise variances
};

MaugisSetting maugis_setting(int scenario) {
  MaugisSetting s{};
  s.omega.fill(1.0);
  switch (scenario) {
    case 1: break;
    case 4:
      s.beta[0] = {0.5, 0, 0, 0, 0, 0, 0, 0};
      s.beta[1] = {0, 1, 0, 0, 0, 0, 0, 0};
      break;
    case 5:
      s.beta[0] = {0.5, 0, 2, 0, 0, 0, 0, 0};
      s.beta[1] = {0, 1, 0, 3, 0, 0, 0, 0};
      s.omega = {1, 1, 0.5, 0.5, 1, 1, 1, 1};
      break;
    case 7:
      s.beta[0] = {0.5, 0, 2, 0, 2, 0.5, 2, 0};
      s.beta[1] = {0, 1, 0, 3, 0.5, 1, 0, 3};
      s.omega = {1, 1, 0.5, 0.5, 0.5, 0.5, 1, 1};
      break;
    default: throw DataError(fmt::format("unknown Maugis scenario {} (expected 1, 4, 5 or 7)", scenario));
  }
  return s;
}

// Draws from N(mean, L L^T) for a 2x2 lower-triangular factor L.
std::array<double, 2> bivariate(Rng& rng, const std::array<double, 2>& mean, const Eigen::Matrix2d& factor) {
  const double z1 = rng.normal();
  const double z2 = rng.normal();
  return {mean[0] + factor(0, 0) * z1, mean[1] + factor(1, 0) * z1 + factor(1, 1) * z2};
}

Eigen::Matrix2d cholesky2(double a, double b, double c) {
  Eigen::Matrix2d m;
  m << a, b, b, c;
  return m.llt().matrixL();
}

}  // namespace

std::string_view scenario_name(ScenarioId id) {
  switch (id) {
    case ScenarioId::maugis1: return "maugis1";
    case ScenarioId::maugis4: return "maugis4";
    case ScenarioId::maugis5: return "maugis5";
    case ScenarioId::maugis7: return "maugis7";
    case ScenarioId::wt: return "wt";
    case ScenarioId::twovar5: return "twovar5";
    case ScenarioId::twovar10: return "twovar10";
  }
  return "unknown";
}

std::optional<ScenarioId> parse_scenario(std::string_view name) {
  for (const auto id : {ScenarioId::maugis1, ScenarioId::maugis4, ScenarioId::maugis5, ScenarioId::maugis7,
                        ScenarioId::wt, ScenarioId::twovar5, ScenarioId::twovar10}) {
    if (scenario_name(id) == name) return id;
  }
  return std::nullopt;
}

GeneratedData gen_maugis(int scenario, int n, std::uint64_t seed) {
  if (n < 1) throw DataError("scenario size must be at least 1");
  const MaugisSetting s = maugis_setting(scenario);
  constexpr std::array<double, 4> weights{0.3, 0.2, 0.3, 0.2};
  constexpr std::array<std::array<double, 2>, 4> means{{{-2, -2}, {-2, 2}, {2, -2}, {2, 2}}};

  Rng rng(seed);
  Matrix x(n, 10);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    int k = 0;
    double cum = weights[0];
    while (k < 3 && u >= cum) cum += weights[static_cast<std::size_t>(++k)];
    labels[static_cast<std::size_t>(i)] = k;
    const double x1 = means[static_cast<std::size_t>(k)][0] + rng.normal();
    const double x2 = means[static_cast<std::size_t>(k)][1] + rng.normal();
    x(i, 0) = x1;
    x(i, 1) = x2;
    for (std::size_t j = 0; j < 8; ++j) {
      x(i, static_cast<Eigen::Index>(j) + 2) =
          x1 * s.beta[0][j] + x2 * s.beta[1][j] + std::sqrt(s.omega[j]) * rng.normal();
    }
  }
  return {Dataset::with_default_names(std::move(x)), std::move(labels), {0, 1}};
}

GeneratedData gen_wt(int n_g, std::uint64_t seed) {
  if (n_g < 1) throw DataError("group size must be at least 1");
  constexpr double mu = 1.7;
  constexpr std::array<double, 3> centres{mu, 0.0, -mu};
  const int n = 3 * n_g;
  Rng rng(seed);
  Matrix x(n, 25);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int g = i / n_g;
    labels[static_cast<std::size_t>(i)] = g;
    for (int j = 0; j < 5; ++j) x(i, j) = centres[static_cast<std::size_t>(g)] + rng.normal();
    for (int j = 5; j < 25; ++j) x(i, j) = rng.normal();
  }
  return {Dataset::with_default_names(std::move(x)), std::move(labels), {0, 1, 2, 3, 4}};
}

GeneratedData gen_twovar(TwoVarVariant variant, int n, std::uint64_t seed) {
  if (n < 1) throw DataError("scenario size must be at least 1");
  constexpr double pro = 0.5;
  constexpr std::array<double, 2> mu1{0.0, 0.0};
  constexpr std::array<double, 2> mu2{3.0, 3.0};
  const Eigen::Matrix2d l1 = cholesky2(1.0, 0.5, 1.0);
  const Eigen::Matrix2d l2 = cholesky2(1.5, -0.7, 1.5);
  const int d = variant == TwoVarVariant::five ? 5 : 10;

  Rng rng(seed);
  Matrix x(n, d);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const bool first = rng.uniform() < pro;
    labels[static_cast<std::size_t>(i)] = first ? 0 : 1;
    const auto c = first ? bivariate(rng, mu1, l1) : bivariate(rng, mu2, l2);
    x(i, 0) = c[0];
    x(i, 1) = c[1];
    if (variant == TwoVarVariant::five) {
      x(i, 2) = c[0] + rng.normal();
      x(i, 3) = rng.normal(1.5, 2.0);
      x(i, 4) = rng.normal(2.0, 1.0);
    } else {
      x(i, 2) = c[0] + rng.normal();
      x(i, 3) = c[1] + rng.normal();
      x(i, 4) = rng.normal(1.5, 2.0);
      x(i, 5) = rng.normal(2.0, 1.0);
      const auto a = bivariate(rng, mu1, l1);
      const auto b = bivariate(rng, mu2, l2);
      x(i, 6) = a[0];
      x(i, 7) = a[1];
      x(i, 8) = b[0];
      x(i, 9) = b[1];
    }
  }
  return {Dataset::with_default_names(std::move(x)), std::move(labels), {0, 1}};
}

GeneratedData generate(const ScenarioSpec& spec) {
  switch (spec.id) {
    case ScenarioId::maugis1: return gen_maugis(1, spec.size, spec.seed);
    case ScenarioId::maugis4: return gen_maugis(4, spec.size, spec.seed);
    case ScenarioId::maugis5: return gen_maugis(5, spec.size, spec.seed);
    case ScenarioId::maugis7: return gen_maugis(7, spec.size, spec.seed);
    case ScenarioId::wt: return gen_wt(spec.size, spec.seed);
    case ScenarioId::twovar5: return gen_twovar(TwoVarVariant::five, spec.size, spec.seed);
    case ScenarioId::twovar10: return gen_twovar(TwoVarVariant::ten, spec.size, spec.seed);
  }
  throw DataError("unknown scenario");
}

}  // namespace varsel

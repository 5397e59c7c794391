#pragma once

#include "varsel/dataset.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace varsel {

enum class ScenarioId { maugis1, maugis4, maugis5, maugis7, wt, twovar5, twovar10 };

std::string_view scenario_name(ScenarioId id);
std::optional<ScenarioId> parse_scenario(std::string_view name);

struct ScenarioSpec {
  ScenarioId id = ScenarioId::maugis1;
  int size = 100;  // n, or n per group for wt
  std::uint64_t seed = 0;
};

struct GeneratedData {
  Dataset data;
  std::vector<int> labels;  // 0-based
  VariableSet truth;        // true clustering columns
};

/// Ten variables: two clustering columns from a four-component mixture, eight
/// columns regressed on them with noise covariance per the scenario.
GeneratedData gen_maugis(int scenario, int n, std::uint64_t seed);

/// Three groups of n_g rows; five spherical clustering columns with group means
/// (1.7, 0, -1.7) and twenty independent standard-normal columns.
GeneratedData gen_wt(int n_g, std::uint64_t seed);

enum class TwoVarVariant { five, ten };

/// Two-cluster bivariate mixture plus correlated and independent noise columns
/// (five or ten columns in total).
GeneratedData gen_twovar(TwoVarVariant variant, int n, std::uint64_t seed);

GeneratedData generate(const ScenarioSpec& spec);

}  // namespace varsel

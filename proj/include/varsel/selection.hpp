#pragma once

#include "varsel/dataset.hpp"
#include "varsel/gmm.hpp"
#include "varsel/regress.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace varsel {

enum class Direction { forward, backward };
enum class SearchKind { greedy, headlong };
enum class StepType { add, remove };
enum class Decision { accepted, rejected };

std::string_view to_string(Direction d);
std::string_view to_string(SearchKind s);
std::string_view to_string(StepType s);
std::string_view to_string(Decision d);

/// Tuning knobs of the subset search. Defaults mirror the reference interface:
/// G = 1:9, all models, forward greedy, thresholds 0 / 0 / -10, itermax 100,
/// forcetwo on, no sub-sampling, sequential evaluation.
struct SearchOptions {
  std::vector<int> g_range{1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::vector<CovarianceModel> em_models_1 = univariate_models();
  std::vector<CovarianceModel> em_models_2 = multivariate_models();
  Direction direction = Direction::forward;
  SearchKind search = SearchKind::greedy;
  double bic_diff_threshold = 0.0;
  double bic_upper = 0.0;
  double bic_lower = -10.0;
  int itermax = 100;
  bool forcetwo = true;
  FitOptions fit_options;
  RegressionMode regression_mode = RegressionMode::subset;
  int parallel = 1;  // worker count; 1 runs candidate evaluations inline

  /// Throws DataError on inconsistent settings.
  void validate() const;
};

/// The terms of the clustering-versus-no-clustering comparison for one candidate.
struct BicDiffResult {
  int candidate = -1;
  double bic_clust_joint = 0.0;  // best G >= 2 mixture on S + {candidate}
  double bic_clust_S = 0.0;      // best G >= 2 mixture on S (0 for empty S)
  double bic_reg = 0.0;          // regression of the candidate on S
  double bic_not_clust = 0.0;    // bic_clust_S + bic_reg
  double diff = 0.0;             // bic_clust_joint - bic_not_clust
  std::vector<int> regressors;   // chosen regressors (column indices)
  std::string note;              // set when a fit failed or degenerated
};

struct TraceEntry {
  int step_index = 0;  // 1-based
  int variable = -1;
  std::string variable_name;
  double bic = 0.0;           // best clustering BIC of the selected set after the step
  double bic_proposal = 0.0;  // bic_clust_joint of the proposal
  double bic_difference = 0.0;
  StepType step_type = StepType::add;
  Decision decision = Decision::rejected;
};

enum class SearchStatus { ok, empty_subset, itermax_reached };
std::string_view to_string(SearchStatus s);

struct SearchResult {
  VariableSet subset;  // selection order
  std::vector<std::string> subset_names;
  std::vector<TraceEntry> trace;
  std::optional<FitResult> final_fit;
  std::vector<int> candidates_discarded;  // headlong only, ascending
  SearchStatus status = SearchStatus::ok;
  Direction direction = Direction::forward;
  SearchKind search = SearchKind::greedy;
  int iterations = 0;
};

/// One unit of work for the parallel fan-out.
struct CandidateTask {
  int candidate = -1;
  std::function<BicDiffResult()> evaluate;
};

/// Runs tasks on up to `workers` threads and returns results in task order. A
/// task that throws yields diff = -inf with the exception text as note.
std::vector<BicDiffResult> run_parallel(std::span<const CandidateTask> tasks, int workers);

/// Stateful evaluator shared by the searches. Caches the best-clustering BIC of
/// every variable set it has fitted (keyed by the sorted set); the cache is only
/// written between fan-outs.
class SelectionEngine {
 public:
  SelectionEngine(const Dataset& data, SearchOptions opts);

  const Dataset& data() const { return data_; }
  const SearchOptions& options() const { return opts_; }

  /// Best G >= 2 clustering BIC on `vars` (0 for the empty set, -inf when every fit fails).
  double cluster_bic(std::span<const int> vars);

  BicDiffResult bic_diff(std::span<const int> S, int candidate);

  /// Highest-diff candidate (ties to the lowest column) and every evaluation, in candidate order.
  std::pair<BicDiffResult, std::vector<BicDiffResult>> propose_add(std::span<const int> S,
                                                                   std::span<const int> candidates);

  /// Lowest-diff member of S evaluated against S without it (ties to the lowest column).
  std::pair<BicDiffResult, std::vector<BicDiffResult>> propose_remove(std::span<const int> S);

  /// Evaluates bic_diff(base_sets[k], candidates[k]) for every k on the worker
  /// pool; results in input order.
  std::vector<BicDiffResult> evaluate_many(const std::vector<VariableSet>& base_sets, std::span<const int> candidates);

  std::size_t cache_size() const { return cache_.size(); }

 private:
  std::optional<double> cached(const std::vector<int>& key) const;
  double fit_cluster_bic(const std::vector<int>& sorted_vars) const;
  BicDiffResult compute(const VariableSet& S, int candidate, double joint, double base) const;

  const Dataset& data_;
  SearchOptions opts_;
  std::vector<int> clustering_gs_;
  std::map<std::vector<int>, double> cache_;
};

BicDiffResult bic_diff(const Dataset& data, std::span<const int> S, int candidate, const SearchOptions& opts);
std::pair<BicDiffResult, std::vector<BicDiffResult>> propose_add(const Dataset& data, std::span<const int> S,
                                                                 std::span<const int> candidates,
                                                                 const SearchOptions& opts);
std::pair<BicDiffResult, std::vector<BicDiffResult>> propose_remove(const Dataset& data, std::span<const int> S,
                                                                    const SearchOptions& opts);

/// Stepwise greedy search (forward/backward per opts.direction).
SearchResult greedy_search(const Dataset& data, const SearchOptions& opts);

/// Headlong search; forward only.
SearchResult headlong_search(const Dataset& data, const SearchOptions& opts);

/// Dispatches on opts.search.
SearchResult run_search(const Dataset& data, const SearchOptions& opts);

/// Replays the accepted steps of a trace from `initial`; used to audit results.
VariableSet replay_trace(const VariableSet& initial, std::span<const TraceEntry> trace);

}  // namespace varsel

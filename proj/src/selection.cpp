#include "varsel/selection.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <set>
#include <thread>

namespace varsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Calls fn(i) for i in [0, count) on up to `workers` threads. fn must not throw.
template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  const auto threads = static_cast<std::size_t>(std::max(1, workers));
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::jthread> pool;
  pool.reserve(std::min(threads, count));
  for (std::size_t t = 0; t < std::min(threads, count); ++t) pool.emplace_back(loop);
}

std::vector<int> sorted_copy(std::span<const int> vars) {
  std::vector<int> out(vars.begin(), vars.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> with(std::span<const int> S, int extra) {
  std::vector<int> out(S.begin(), S.end());
  out.push_back(extra);
  std::sort(out.begin(), out.end());
  return out;
}

VariableSet without(std::span<const int> S, int drop) {
  VariableSet out;
  for (const int v : S) {
    if (v != drop) out.push_back(v);
  }
  return out;
}

std::vector<int> complement(std::span<const int> S, int d) {
  const std::set<int> in(S.begin(), S.end());
  std::vector<int> out;
  for (int j = 0; j < d; ++j) {
    if (!in.count(j)) out.push_back(j);
  }
  return out;
}

bool better_add(const BicDiffResult& a, const BicDiffResult& b) {
  return a.diff > b.diff || (a.diff == b.diff && a.candidate < b.candidate);
}

bool better_remove(const BicDiffResult& a, const BicDiffResult& b) {
  return a.diff < b.diff || (a.diff == b.diff && a.candidate < b.candidate);
}

void check_candidate(int candidate, int d) {
  if (candidate < 0 || candidate >= d) throw DataError(fmt::format("candidate column {} out of range", candidate));
}

}  // namespace

std::string_view to_string(Direction d) { return d == Direction::forward ? "forward" : "backward"; }
std::string_view to_string(SearchKind s) { return s == SearchKind::greedy ? "greedy" : "headlong"; }
std::string_view to_string(StepType s) { return s == StepType::add ? "Add" : "Remove"; }
std::string_view to_string(Decision d) { return d == Decision::accepted ? "Accepted" : "Rejected"; }

std::string_view to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::ok: return "ok";
    case SearchStatus::empty_subset: return "empty_subset";
    case SearchStatus::itermax_reached: return "itermax_reached";
  }
  return "unknown";
}

void SearchOptions::validate() const {
  if (g_range.empty()) throw DataError("the G range is empty");
  for (const int g : g_range) {
    if (g < 1) throw DataError(fmt::format("invalid number of components {}", g));
  }
  if (*std::max_element(g_range.begin(), g_range.end()) < 2) {
    throw DataError("the G range must include at least one value >= 2");
  }
  if (em_models_1.empty() || em_models_2.empty()) throw DataError("model lists must not be empty");
  for (const auto m : em_models_1) {
    if (!is_univariate(m)) throw DataError(fmt::format("{} is not a univariate model", model_name(m)));
  }
  for (const auto m : em_models_2) {
    if (is_univariate(m)) throw DataError(fmt::format("{} is not a multivariate model", model_name(m)));
  }
  if (std::isnan(bic_diff_threshold) || std::isnan(bic_upper) || std::isnan(bic_lower)) {
    throw DataError("BIC thresholds must not be NaN");
  }
  if (bic_lower > bic_upper) throw DataError("bic_lower must not exceed bic_upper");
  if (itermax < 1) throw DataError("itermax must be at least 1");
  if (parallel < 1) throw DataError("the worker count must be at least 1");
  if (search == SearchKind::headlong && direction != Direction::forward) {
    throw DataError("headlong search is only available in the forward direction");
  }
  if (fit_options.samp && fit_options.sampsize < 0) throw DataError("sampsize must not be negative");
}

std::vector<BicDiffResult> run_parallel(std::span<const CandidateTask> tasks, int workers) {
  if (workers < 1) throw DataError("the worker count must be at least 1");
  std::vector<BicDiffResult> out(tasks.size());
  parallel_for(tasks.size(), workers, [&](std::size_t i) {
    try {
      out[i] = tasks[i].evaluate();
    } catch (const std::exception& e) {
      out[i] = BicDiffResult{};
      out[i].candidate = tasks[i].candidate;
      out[i].diff = -kInf;
      out[i].note = fmt::format("evaluation failed: {}", e.what());
    } catch (...) {
      out[i] = BicDiffResult{};
      out[i].candidate = tasks[i].candidate;
      out[i].diff = -kInf;
      out[i].note = "evaluation failed";
    }
  });
  return out;
}

SelectionEngine::SelectionEngine(const Dataset& data, SearchOptions opts) : data_(data), opts_(std::move(opts)) {
  opts_.validate();
  for (const int g : opts_.g_range) {
    if (g >= 2) clustering_gs_.push_back(g);
  }
  std::sort(clustering_gs_.begin(), clustering_gs_.end());
  clustering_gs_.erase(std::unique(clustering_gs_.begin(), clustering_gs_.end()), clustering_gs_.end());
}

std::optional<double> SelectionEngine::cached(const std::vector<int>& key) const {
  const auto it = cache_.find(key);
  if (it == cache_.end()) return std::nullopt;
  return it->second;
}

double SelectionEngine::fit_cluster_bic(const std::vector<int>& sorted_vars) const {
  if (sorted_vars.empty()) return 0.0;
  const Matrix x = select_columns(data_.values(), sorted_vars);
  const auto& models = sorted_vars.size() == 1 ? opts_.em_models_1 : opts_.em_models_2;
  try {
    return best_fit(x, clustering_gs_, models, opts_.fit_options).bic;
  } catch (const FitFailure&) {
    return -kInf;
  }
}

double SelectionEngine::cluster_bic(std::span<const int> vars) {
  validate_variable_set(vars, data_.d());
  auto key = sorted_copy(vars);
  if (const auto hit = cached(key)) return *hit;
  const double value = fit_cluster_bic(key);
  cache_.emplace(std::move(key), value);
  return value;
}

BicDiffResult SelectionEngine::compute(const VariableSet& S, int candidate, double joint, double base) const {
  BicDiffResult r;
  r.candidate = candidate;
  r.bic_clust_joint = joint;
  r.bic_clust_S = base;

  const auto regressors = sorted_copy(S);
  const Vector y = data_.values().col(candidate);
  const Matrix X = select_columns(data_.values(), regressors);
  const RegressionFit reg = regressors.empty() ? reg_bic(y, X) : reg_subset_bic(y, X, opts_.regression_mode);
  r.bic_reg = reg.bic;
  for (const int k : reg.regressors) r.regressors.push_back(regressors[static_cast<std::size_t>(k)]);
  r.bic_not_clust = base + reg.bic;

  if (!std::isfinite(joint)) {
    r.diff = -kInf;
    r.note = "no clustering model could be fitted with the candidate";
  } else if (!reg.ok()) {
    r.diff = -kInf;
    r.note = fmt::format("regression on the current set is {}", status_name(reg.status));
  } else if (!std::isfinite(base)) {
    r.diff = kInf;
    r.note = "no clustering model could be fitted on the current set";
  } else {
    r.diff = joint - r.bic_not_clust;
  }
  return r;
}

std::vector<BicDiffResult> SelectionEngine::evaluate_many(const std::vector<VariableSet>& base_sets,
                                                          std::span<const int> candidates) {
  if (base_sets.size() != candidates.size()) throw DataError("one base set is needed per candidate");
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    validate_variable_set(base_sets[k], data_.d());
    check_candidate(candidates[k], data_.d());
    if (std::find(base_sets[k].begin(), base_sets[k].end(), candidates[k]) != base_sets[k].end()) {
      throw DataError(fmt::format("candidate column {} is already selected", candidates[k]));
    }
  }

  // Fit every clustering set not yet cached, then fill the cache before the
  // candidate evaluations read it.
  std::vector<std::vector<int>> missing;
  std::set<std::vector<int>> seen;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    for (auto key : {sorted_copy(base_sets[k]), with(base_sets[k], candidates[k])}) {
      if (!cache_.count(key) && seen.insert(key).second) missing.push_back(std::move(key));
    }
  }
  std::vector<double> fitted(missing.size(), 0.0);
  std::vector<std::string> errors(missing.size());
  parallel_for(missing.size(), opts_.parallel, [&](std::size_t i) {
    try {
      fitted[i] = fit_cluster_bic(missing[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    } catch (...) {
      errors[i] = "unknown error";
    }
  });
  std::map<std::vector<int>, std::string> failed;
  for (std::size_t i = 0; i < missing.size(); ++i) {
    if (errors[i].empty()) {
      cache_.emplace(missing[i], fitted[i]);
    } else {
      failed.emplace(missing[i], errors[i]);
    }
  }

  auto lookup = [this, &failed](const std::vector<int>& key) {
    if (const auto it = failed.find(key); it != failed.end()) throw std::runtime_error(it->second);
    return cache_.at(key);
  };
  std::vector<CandidateTask> tasks;
  tasks.reserve(candidates.size());
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const VariableSet* S = &base_sets[k];
    const int c = candidates[k];
    tasks.push_back({c, [this, S, c, &lookup] { return compute(*S, c, lookup(with(*S, c)), lookup(sorted_copy(*S))); }});
  }
  return run_parallel(tasks, opts_.parallel);
}

BicDiffResult SelectionEngine::bic_diff(std::span<const int> S, int candidate) {
  return evaluate_many({VariableSet(S.begin(), S.end())}, std::span<const int>(&candidate, 1)).front();
}

std::pair<BicDiffResult, std::vector<BicDiffResult>> SelectionEngine::propose_add(std::span<const int> S,
                                                                                 std::span<const int> candidates) {
  if (candidates.empty()) throw DataError("no candidate variables to propose");
  const std::vector<VariableSet> bases(candidates.size(), VariableSet(S.begin(), S.end()));
  auto all = evaluate_many(bases, candidates);
  BicDiffResult best = all.front();
  for (const auto& r : all) {
    if (better_add(r, best)) best = r;
  }
  return {best, std::move(all)};
}

std::pair<BicDiffResult, std::vector<BicDiffResult>> SelectionEngine::propose_remove(std::span<const int> S) {
  if (S.empty()) throw DataError("no selected variables to propose for removal");
  std::vector<VariableSet> bases;
  for (const int j : S) bases.push_back(without(S, j));
  auto all = evaluate_many(bases, S);
  BicDiffResult worst = all.front();
  for (const auto& r : all) {
    if (better_remove(r, worst)) worst = r;
  }
  return {worst, std::move(all)};
}

BicDiffResult bic_diff(const Dataset& data, std::span<const int> S, int candidate, const SearchOptions& opts) {
  SelectionEngine engine(data, opts);
  return engine.bic_diff(S, candidate);
}

std::pair<BicDiffResult, std::vector<BicDiffResult>> propose_add(const Dataset& data, std::span<const int> S,
                                                                 std::span<const int> candidates,
                                                                 const SearchOptions& opts) {
  SelectionEngine engine(data, opts);
  return engine.propose_add(S, candidates);
}

std::pair<BicDiffResult, std::vector<BicDiffResult>> propose_remove(const Dataset& data, std::span<const int> S,
                                                                    const SearchOptions& opts) {
  SelectionEngine engine(data, opts);
  return engine.propose_remove(S);
}

namespace {

class SearchState {
 public:
  SearchState(const Dataset& data, const SearchOptions& opts, SearchKind kind)
      : engine_(data, opts), data_(data), opts_(opts) {
    if (data.d() < 2) throw DataError("variable selection needs at least two columns");
    result_.direction = opts.direction;
    result_.search = kind;
  }

  SelectionEngine& engine() { return engine_; }
  VariableSet& S() { return S_; }
  SearchResult& result() { return result_; }

  void record(const BicDiffResult& r, StepType type, bool accepted) {
    if (accepted) {
      if (type == StepType::add) {
        S_.push_back(r.candidate);
      } else {
        S_ = without(S_, r.candidate);
      }
    }
    TraceEntry e;
    e.step_index = static_cast<int>(result_.trace.size()) + 1;
    e.variable = r.candidate;
    e.variable_name = data_.name(r.candidate);
    e.bic = S_.empty() ? std::numeric_limits<double>::quiet_NaN() : engine_.cluster_bic(S_);
    e.bic_proposal = r.bic_clust_joint;
    e.bic_difference = r.diff;
    e.step_type = type;
    e.decision = accepted ? Decision::accepted : Decision::rejected;
    result_.trace.push_back(std::move(e));
  }

  SearchResult finish(int iterations) {
    result_.iterations = iterations;
    result_.subset = S_;
    for (const int v : S_) result_.subset_names.push_back(data_.name(v));
    if (S_.empty()) {
      result_.status = SearchStatus::empty_subset;
      return std::move(result_);
    }
    const Matrix x = select_columns(data_.values(), S_);
    const auto& models = S_.size() == 1 ? opts_.em_models_1 : opts_.em_models_2;
    try {
      result_.final_fit = best_fit(x, opts_.g_range, models, opts_.fit_options);
    } catch (const FitFailure&) {
      result_.final_fit.reset();
    }
    return std::move(result_);
  }

 private:
  SelectionEngine engine_;
  const Dataset& data_;
  const SearchOptions& opts_;
  VariableSet S_;
  SearchResult result_;
};

}  // namespace

SearchResult greedy_search(const Dataset& data, const SearchOptions& opts) {
  SearchState st(data, opts, SearchKind::greedy);
  const double thr = opts.bic_diff_threshold;
  const std::size_t floor = opts.forcetwo ? 3 : 1;
  const int d = data.d();
  int iter = 0;

  if (opts.direction == Direction::forward) {
    int add_proposals = 0;
    while (true) {
      if (iter >= opts.itermax) {
        st.result().status = SearchStatus::itermax_reached;
        break;
      }
      ++iter;
      bool changed = false;
      const auto candidates = complement(st.S(), d);
      if (!candidates.empty()) {
        const auto best = st.engine().propose_add(st.S(), candidates).first;
        const bool forced = opts.forcetwo && add_proposals < 2;
        ++add_proposals;
        const bool accept = forced || best.diff > thr;
        st.record(best, StepType::add, accept);
        changed |= accept;
      }
      if (st.S().size() >= floor) {
        const auto worst = st.engine().propose_remove(st.S()).first;
        const bool accept = worst.diff < -thr;
        st.record(worst, StepType::remove, accept);
        changed |= accept;
      }
      if (!changed) break;
    }
  } else {
    for (int j = 0; j < d; ++j) st.S().push_back(j);
    while (true) {
      if (iter >= opts.itermax) {
        st.result().status = SearchStatus::itermax_reached;
        break;
      }
      ++iter;
      bool changed = false;
      if (st.S().size() >= floor) {
        const auto worst = st.engine().propose_remove(st.S()).first;
        const bool accept = worst.diff < -thr;
        st.record(worst, StepType::remove, accept);
        changed |= accept;
      }
      if (st.S().empty()) break;
      const auto excluded = complement(st.S(), d);
      if (excluded.size() >= floor) {
        const auto best = st.engine().propose_add(st.S(), excluded).first;
        const bool accept = best.diff > thr;
        st.record(best, StepType::add, accept);
        changed |= accept;
      }
      if (!changed) break;
    }
  }
  auto res = st.finish(iter);
  return res;
}

SearchResult headlong_search(const Dataset& data, const SearchOptions& opts) {
  if (opts.direction != Direction::forward) {
    throw DataError("headlong search is only available in the forward direction");
  }
  SearchState st(data, opts, SearchKind::headlong);
  const std::size_t floor = opts.forcetwo ? 3 : 1;
  const auto batch = static_cast<std::size_t>(std::max(1, opts.parallel));
  std::set<int> pool;
  for (int j = 0; j < data.d(); ++j) pool.insert(j);
  std::set<int> discarded;
  int add_proposals = 0;
  int iter = 0;

  while (true) {
    if (iter >= opts.itermax) {
      st.result().status = SearchStatus::itermax_reached;
      break;
    }
    ++iter;
    bool changed = false;

    if (!pool.empty()) {
      const std::vector<int> scan(pool.begin(), pool.end());
      if (opts.forcetwo && add_proposals < 2) {
        ++add_proposals;
        const auto best = st.engine().propose_add(st.S(), scan).first;
        pool.erase(best.candidate);
        st.record(best, StepType::add, true);
        changed = true;
      } else {
        ++add_proposals;
        std::optional<BicDiffResult> accepted;
        std::optional<BicDiffResult> best_seen;
        for (std::size_t start = 0; start < scan.size() && !accepted; start += batch) {
          const std::span<const int> chunk(scan.data() + start, std::min(batch, scan.size() - start));
          const std::vector<VariableSet> bases(chunk.size(), st.S());
          for (const auto& r : st.engine().evaluate_many(bases, chunk)) {
            if (!best_seen || better_add(r, *best_seen)) best_seen = r;
            if (r.diff > opts.bic_upper) {
              accepted = r;
              break;
            }
            if (r.diff < opts.bic_lower) {
              pool.erase(r.candidate);
              discarded.insert(r.candidate);
            }
          }
        }
        if (accepted) {
          pool.erase(accepted->candidate);
          st.record(*accepted, StepType::add, true);
          changed = true;
        } else if (best_seen) {
          st.record(*best_seen, StepType::add, false);
        }
      }
    }

    if (st.S().size() >= floor) {
      const std::vector<int> scan = sorted_copy(st.S());
      std::optional<BicDiffResult> removed;
      std::optional<BicDiffResult> worst_seen;
      for (std::size_t start = 0; start < scan.size() && !removed; start += batch) {
        const std::span<const int> chunk(scan.data() + start, std::min(batch, scan.size() - start));
        std::vector<VariableSet> bases;
        for (const int j : chunk) bases.push_back(without(st.S(), j));
        for (const auto& r : st.engine().evaluate_many(bases, chunk)) {
          if (!worst_seen || better_remove(r, *worst_seen)) worst_seen = r;
          if (r.diff < opts.bic_upper) {
            removed = r;
            break;
          }
        }
      }
      if (removed) {
        if (removed->diff < opts.bic_lower) {
          discarded.insert(removed->candidate);
        } else {
          pool.insert(removed->candidate);
        }
        st.record(*removed, StepType::remove, true);
        changed = true;
      } else if (worst_seen) {
        st.record(*worst_seen, StepType::remove, false);
      }
    }
    if (!changed) break;
  }
  st.result().candidates_discarded.assign(discarded.begin(), discarded.end());
  return st.finish(iter);
}

SearchResult run_search(const Dataset& data, const SearchOptions& opts) {
  opts.validate();
  return opts.search == SearchKind::greedy ? greedy_search(data, opts) : headlong_search(data, opts);
}

VariableSet replay_trace(const VariableSet& initial, std::span<const TraceEntry> trace) {
  VariableSet S = initial;
  for (const auto& e : trace) {
    if (e.decision != Decision::accepted) continue;
    if (e.step_type == StepType::add) {
      S.push_back(e.variable);
    } else {
      S = without(S, e.variable);
    }
  }
  return S;
}

}  // namespace varsel

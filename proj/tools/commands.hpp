#pragma once

#include "varsel/gmm.hpp"
#include "varsel/selection.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace varsel::cli {

/// Parses "a:b" or a comma list such as "2,3,5".
std::vector<int> parse_g_range(const std::string& text);
std::string format_g_range(const std::vector<int>& gs);

std::vector<CovarianceModel> parse_models(const std::string& text);
std::string format_models(const std::vector<CovarianceModel>& models);

/// Effective search options as pretty-printed JSON.
std::string options_json(const SearchOptions& opts);

struct SelectConfig {
  std::string input;
  bool no_header = false;
  SearchOptions opts;  // library defaults double as flag defaults
  std::string g;
  std::string em_models_1;
  std::string em_models_2;
  std::string direction;
  std::string search;
  std::string hc_model;
  std::string hc_use;
  std::string regression;
  std::string out;
  std::string trace_log;
  std::string render_log;
  bool show_config = false;
};

struct FitConfig {
  std::string input;
  bool no_header = false;
  std::string g;
  std::string models;
  std::string subset;
  std::string truth;
  std::string hc_model;
  std::string hc_use;
  FitOptions fit;
  std::string out;
};

struct GenConfig {
  std::string scenario;
  int n = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string labels;
  std::string truth;
};

struct MetricsConfig {
  std::string a;
  std::string b;
  std::string selected;
  std::string truth;
  std::string data;
};

struct BenchConfig {
  std::string amdahl;
  std::string task;
  std::string scenario = "twovar10";
  int n = 400;
  std::uint64_t seed = 1;
  std::string workers = "1,2,4";
  int reps = 3;
  std::string csv;
  std::string svg;
};

/// Registers the subcommands on `app`; call run() after parsing.
class Commands {
 public:
  explicit Commands(CLI::App& app);
  int run();

 private:
  int run_select();
  int run_fit();
  int run_gen();
  int run_metrics();
  int run_bench();

  CLI::App* select_ = nullptr;
  CLI::App* fit_ = nullptr;
  CLI::App* gen_ = nullptr;
  CLI::App* metrics_ = nullptr;
  CLI::App* bench_ = nullptr;
  SelectConfig sel_;
  FitConfig fitc_;
  GenConfig gen_cfg_;
  MetricsConfig met_;
  BenchConfig bench_cfg_;
};

}  // namespace varsel::cli

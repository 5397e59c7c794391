#include "commands.hpp"

#include "varsel/bench.hpp"
#include "varsel/datagen.hpp"
#include "varsel/dataset.hpp"
#include "varsel/metrics.hpp"
#include "varsel/report.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace varsel::cli {

using json = nlohmann::json;

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t\r");
    if (b == std::string::npos) throw DataError(fmt::format("empty item in list '{}'", text));
    out.push_back(item.substr(b, e - b + 1));
  }
  if (out.empty()) throw DataError("empty list");
  return out;
}

int to_int(const std::string& s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw DataError(fmt::format("'{}' is not an integer", s));
  return v;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path));
  out << text;
  if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path));
}

// First column of a CSV with a header row; any label text is accepted.
std::vector<int> read_labels(const std::string& path) {
  std::istringstream in(slurp(path));
  std::string line;
  if (!std::getline(in, line)) throw DataError(fmt::format("'{}' is empty", path));
  std::vector<std::string> labels;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string cell = line.substr(0, line.find(','));
    if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') cell = cell.substr(1, cell.size() - 2);
    labels.push_back(cell);
  }
  if (labels.empty()) throw DataError(fmt::format("'{}' holds no labels", path));
  return encode_labels(labels);
}

std::vector<std::string> read_name_list(const std::string& path) {
  std::istringstream in(slurp(path));
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) names.push_back(line);
  }
  return names;
}

Direction parse_direction(const std::string& s) { return s == "backward" ? Direction::backward : Direction::forward; }
SearchKind parse_search(const std::string& s) { return s == "headlong" ? SearchKind::headlong : SearchKind::greedy; }

CovarianceModel model_or_throw(const std::string& s) {
  const auto m = parse_model(s);
  if (!m) throw DataError(fmt::format("unknown model '{}'", s));
  return *m;
}

HcUse hc_use_or_throw(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  const auto u = parse_hc_use(s);
  if (!u) throw DataError(fmt::format("unknown hc-use '{}'", s));
  return *u;
}

std::vector<std::string> model_names(const std::vector<CovarianceModel>& models) {
  std::vector<std::string> out;
  for (const auto m : models) out.emplace_back(model_name(m));
  return out;
}

}  // namespace

std::vector<int> parse_g_range(const std::string& text) {
  std::vector<int> gs;
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const int a = to_int(text.substr(0, colon));
    const int b = to_int(text.substr(colon + 1));
    if (a > b) throw DataError(fmt::format("invalid G range '{}'", text));
    for (int g = a; g <= b; ++g) gs.push_back(g);
  } else {
    for (const auto& s : split_list(text)) gs.push_back(to_int(s));
  }
  for (const int g : gs) {
    if (g < 1) throw DataError(fmt::format("invalid number of components {}", g));
  }
  return gs;
}

std::string format_g_range(const std::vector<int>& gs) {
  bool contiguous = gs.size() > 1;
  for (std::size_t k = 1; k < gs.size(); ++k) contiguous = contiguous && gs[k] == gs[k - 1] + 1;
  if (contiguous) return fmt::format("{}:{}", gs.front(), gs.back());
  return fmt::format("{}", fmt::join(gs, ","));
}

std::vector<CovarianceModel> parse_models(const std::string& text) {
  std::vector<CovarianceModel> out;
  for (const auto& s : split_list(text)) out.push_back(model_or_throw(s));
  return out;
}

std::string format_models(const std::vector<CovarianceModel>& models) {
  return fmt::format("{}", fmt::join(model_names(models), ","));
}

std::string options_json(const SearchOptions& o) {
  const auto finite_or_string = [](double v) { return std::isfinite(v) ? json(v) : json(v > 0 ? "Inf" : "-Inf"); };
  json j{{"g", o.g_range},
         {"em_models_1", model_names(o.em_models_1)},
         {"em_models_2", model_names(o.em_models_2)},
         {"direction", to_string(o.direction)},
         {"search", to_string(o.search)},
         {"bic_diff", finite_or_string(o.bic_diff_threshold)},
         {"bic_upper", finite_or_string(o.bic_upper)},
         {"bic_lower", finite_or_string(o.bic_lower)},
         {"itermax", o.itermax},
         {"forcetwo", o.forcetwo},
         {"samp", o.fit_options.samp},
         {"sampsize", o.fit_options.sampsize},
         {"seed", o.fit_options.seed},
         {"hc_model", model_name(o.fit_options.hc_model)},
         {"hc_use", hc_use_name(o.fit_options.hc_use)},
         {"allow_eee", o.fit_options.allow_eee},
         {"regression", o.regression_mode == RegressionMode::subset ? "subset" : "all"},
         {"parallel", o.parallel}};
  return j.dump(2) + '\n';
}

Commands::Commands(CLI::App& app) {
  const SearchOptions defaults;
  const auto hc_check = CLI::IsMember({"EII", "EEE", "VVV"});
  const auto use_check = CLI::IsMember({"VARS", "STD", "SVD"}, CLI::ignore_case);

  select_ = app.add_subcommand("select", "Select clustering variables and print the search trace");
  auto* s = select_;
  sel_.g = format_g_range(defaults.g_range);
  sel_.em_models_1 = format_models(defaults.em_models_1);
  sel_.em_models_2 = format_models(defaults.em_models_2);
  sel_.direction = std::string(to_string(defaults.direction));
  sel_.search = std::string(to_string(defaults.search));
  sel_.hc_model = std::string(model_name(defaults.fit_options.hc_model));
  sel_.hc_use = std::string(hc_use_name(defaults.fit_options.hc_use));
  sel_.regression = defaults.regression_mode == RegressionMode::subset ? "subset" : "all";
  s->add_option("input", sel_.input, "Numeric CSV with a header row");
  s->add_flag("--no-header", sel_.no_header, "Input has no header row");
  s->add_option("--g", sel_.g, "Numbers of components, \"a:b\" or a comma list")->capture_default_str();
  s->add_option("--em-models1", sel_.em_models_1, "Univariate models (E,V)")->capture_default_str();
  s->add_option("--em-models2", sel_.em_models_2, "Multivariate models")->capture_default_str();
  s->add_option("--direction", sel_.direction)->check(CLI::IsMember({"forward", "backward"}))->capture_default_str();
  s->add_option("--search", sel_.search)->check(CLI::IsMember({"greedy", "headlong"}))->capture_default_str();
  s->add_option("--bic-diff", sel_.opts.bic_diff_threshold, "Greedy acceptance threshold")->capture_default_str();
  s->add_option("--bic-upper", sel_.opts.bic_upper, "Headlong acceptance threshold")->capture_default_str();
  s->add_option("--bic-lower", sel_.opts.bic_lower, "Headlong discard threshold")->capture_default_str();
  s->add_option("--itermax", sel_.opts.itermax, "Maximum add/remove iterations")->capture_default_str();
  s->add_flag("--forcetwo,!--no-forcetwo", sel_.opts.forcetwo, "Force the first two additions");
  s->add_flag("--samp", sel_.opts.fit_options.samp, "Initialise hierarchical clustering on a sub-sample");
  s->add_option("--sampsize", sel_.opts.fit_options.sampsize, "Sub-sample size (0 = n/2)")->capture_default_str();
  s->add_option("--seed", sel_.opts.fit_options.seed, "Sub-sampling seed")->capture_default_str();
  s->add_option("--hc-model", sel_.hc_model)->check(hc_check)->capture_default_str();
  s->add_option("--hc-use", sel_.hc_use, "Data transform for the hierarchical step")
      ->check(use_check)
      ->capture_default_str();
  s->add_flag("--allow-eee,!--no-allow-eee", sel_.opts.fit_options.allow_eee, "EEE fallback initialisation");
  s->add_option("--regression", sel_.regression)->check(CLI::IsMember({"subset", "all"}))->capture_default_str();
  s->add_option("--parallel", sel_.opts.parallel, "Worker count")->capture_default_str();
  s->add_option("--out", sel_.out, "Write the result as JSON");
  s->add_option("--trace-log", sel_.trace_log, "Write the trace as line-delimited JSON");
  s->add_option("--render-log", sel_.render_log, "Re-render a saved trace log and exit");
  s->add_flag("--show-config", sel_.show_config, "Print the effective options and exit");

  fit_ = app.add_subcommand("fit", "Fit the best Gaussian mixture by BIC and print its summary");
  auto* f = fit_;
  fitc_.g = format_g_range(defaults.g_range);
  fitc_.hc_model = std::string(model_name(defaults.fit_options.hc_model));
  fitc_.hc_use = std::string(hc_use_name(defaults.fit_options.hc_use));
  fitc_.fit = defaults.fit_options;
  f->add_option("input", fitc_.input, "Numeric CSV with a header row")->required();
  f->add_flag("--no-header", fitc_.no_header, "Input has no header row");
  f->add_option("--g", fitc_.g, "Numbers of components, \"a:b\" or a comma list")->capture_default_str();
  f->add_option("--models", fitc_.models, "Model list (default: all models for the dimension)");
  f->add_option("--subset", fitc_.subset, "Comma list of column names to use");
  f->add_option("--truth", fitc_.truth, "Label CSV for ARI and error rate");
  f->add_flag("--samp", fitc_.fit.samp, "Initialise hierarchical clustering on a sub-sample");
  f->add_option("--sampsize", fitc_.fit.sampsize, "Sub-sample size (0 = n/2)")->capture_default_str();
  f->add_option("--seed", fitc_.fit.seed, "Sub-sampling seed")->capture_default_str();
  f->add_option("--hc-model", fitc_.hc_model)->check(hc_check)->capture_default_str();
  f->add_option("--hc-use", fitc_.hc_use)->check(use_check)->capture_default_str();
  f->add_flag("--allow-eee,!--no-allow-eee", fitc_.fit.allow_eee, "EEE fallback initialisation");
  f->add_option("--out", fitc_.out, "Write the fit as JSON");

  gen_ = app.add_subcommand("gen", "Generate a simulation scenario");
  auto* g = gen_;
  g->add_option("--scenario", gen_cfg_.scenario)
      ->required()
      ->check(CLI::IsMember({"maugis1", "maugis4", "maugis5", "maugis7", "wt", "twovar5", "twovar10"}));
  g->add_option("--n", gen_cfg_.n, "Rows (rows per group for wt)")->required();
  g->add_option("--seed", gen_cfg_.seed)->capture_default_str();
  g->add_option("--out", gen_cfg_.out, "Data CSV path")->required();
  g->add_option("--labels", gen_cfg_.labels, "Labels CSV path (default <out>_labels.csv)");
  g->add_option("--truth", gen_cfg_.truth, "Truth-set path (default <out>_truth.txt)");

  metrics_ = app.add_subcommand("metrics", "Compare partitions or score a selected subset");
  auto* m = metrics_;
  auto* a = m->add_option("--a", met_.a, "Reference label CSV");
  auto* b = m->add_option("--b", met_.b, "Cluster label CSV");
  a->needs(b);
  b->needs(a);
  auto* sel = m->add_option("--selected", met_.selected, "Result JSON from select --out, or a comma list of names");
  auto* tr = m->add_option("--truth", met_.truth, "Truth-set file, one column name per line");
  auto* dat = m->add_option("--data", met_.data, "Data CSV supplying column names and d");
  sel->needs(tr, dat);

  bench_ = app.add_subcommand("bench", "Fit the Amdahl model to speedups or time a task");
  auto* be = bench_;
  auto* am = be->add_option("--amdahl", bench_cfg_.amdahl, "CSV with P and t_P or s_P columns");
  auto* task = be->add_option("--task", bench_cfg_.task, "Task to time")->check(CLI::IsMember({"select"}));
  am->excludes(task);
  be->add_option("--scenario", bench_cfg_.scenario, "Scenario for the task")->capture_default_str();
  be->add_option("--n", bench_cfg_.n)->capture_default_str();
  be->add_option("--seed", bench_cfg_.seed)->capture_default_str();
  be->add_option("--workers", bench_cfg_.workers, "Worker counts")->capture_default_str();
  be->add_option("--reps", bench_cfg_.reps, "Repetitions per worker count")->capture_default_str();
  be->add_option("--csv", bench_cfg_.csv, "Write P,t_P,s_P");
  be->add_option("--svg", bench_cfg_.svg, "Write the speedup plot");

  app.require_subcommand(1);
}

int Commands::run() {
  if (*select_) return run_select();
  if (*fit_) return run_fit();
  if (*gen_) return run_gen();
  if (*metrics_) return run_metrics();
  return run_bench();
}

int Commands::run_select() {
  if (!sel_.render_log.empty()) {
    std::istringstream in(slurp(sel_.render_log));
    std::cout << render_search(parse_trace_jsonl(in));
    return 0;
  }
  SearchOptions& o = sel_.opts;
  o.g_range = parse_g_range(sel_.g);
  o.em_models_1 = parse_models(sel_.em_models_1);
  o.em_models_2 = parse_models(sel_.em_models_2);
  o.direction = parse_direction(sel_.direction);
  o.search = parse_search(sel_.search);
  o.fit_options.hc_model = model_or_throw(sel_.hc_model);
  o.fit_options.hc_use = hc_use_or_throw(sel_.hc_use);
  o.regression_mode = sel_.regression == "all" ? RegressionMode::all : RegressionMode::subset;
  o.validate();
  if (sel_.show_config) {
    std::cout << options_json(o);
    return 0;
  }
  if (sel_.input.empty()) throw DataError("select needs an input CSV");

  const Dataset data = read_csv(sel_.input, !sel_.no_header);
  const SearchResult res = run_search(data, o);
  std::cout << render_search(res);
  if (!sel_.trace_log.empty()) write_text(sel_.trace_log, trace_to_jsonl(res));
  if (!sel_.out.empty()) write_text(sel_.out, search_result_json(res));
  return 0;
}

int Commands::run_fit() {
  const std::vector<int> gs = parse_g_range(fitc_.g);
  FitOptions fo = fitc_.fit;
  fo.hc_model = model_or_throw(fitc_.hc_model);
  fo.hc_use = hc_use_or_throw(fitc_.hc_use);
  if (fo.sampsize < 0) throw DataError("sampsize must not be negative");

  Dataset data = read_csv(fitc_.input, !fitc_.no_header);
  if (!fitc_.subset.empty()) {
    const auto names = split_list(fitc_.subset);
    data = subset_columns(data, data.indices_of(names));
  }
  std::vector<CovarianceModel> models;
  if (fitc_.models.empty()) {
    models = data.d() == 1 ? univariate_models() : multivariate_models();
  } else {
    models = parse_models(fitc_.models);
  }
  std::vector<int> truth;
  if (!fitc_.truth.empty()) {
    truth = read_labels(fitc_.truth);
    if (static_cast<int>(truth.size()) != data.n()) {
      throw DataError(fmt::format("truth has {} labels but the data has {} rows", truth.size(), data.n()));
    }
  }

  const FitResult fit = best_fit(data.values(), gs, models, fo);
  std::cout << summarize(fit);
  if (!truth.empty()) {
    std::cout << fmt::format("\nARI: {:.7g}\nError rate: {:.7g}\n", ari(truth, fit.classification),
                             class_error(truth, fit.classification));
  }
  if (!fitc_.out.empty()) write_text(fitc_.out, fit_result_json(fit, data.col_names()) + '\n');
  return 0;
}

int Commands::run_gen() {
  ScenarioSpec spec;
  spec.id = *parse_scenario(gen_cfg_.scenario);
  spec.size = gen_cfg_.n;
  spec.seed = gen_cfg_.seed;
  const GeneratedData g = generate(spec);

  const std::filesystem::path out(gen_cfg_.out);
  const auto stem = (out.parent_path() / out.stem()).string();
  const std::string labels = gen_cfg_.labels.empty() ? stem + "_labels.csv" : gen_cfg_.labels;
  const std::string truth = gen_cfg_.truth.empty() ? stem + "_truth.txt" : gen_cfg_.truth;

  write_csv(g.data, out);
  std::string lab = "label\n";
  for (const int l : g.labels) lab += fmt::format("{}\n", l + 1);
  write_text(labels, lab);
  std::string tru;
  for (const int j : g.truth) tru += g.data.name(j) + '\n';
  write_text(truth, tru);
  std::cout << fmt::format("wrote {} ({} x {}), {}, {}\n", out.string(), g.data.n(), g.data.d(), labels, truth);
  return 0;
}

int Commands::run_metrics() {
  if (met_.a.empty() && met_.selected.empty()) throw DataError("metrics needs --a/--b or --selected/--truth/--data");
  if (!met_.a.empty()) {
    const auto a = read_labels(met_.a);
    const auto b = read_labels(met_.b);
    if (a.size() != b.size()) throw DataError(fmt::format("label files differ in length ({} vs {})", a.size(), b.size()));
    std::cout << fmt::format("ARI: {:.7g}\nCER: {:.7g}\nError rate: {:.7g}\n", ari(a, b), cer(a, b),
                             class_error(a, b));
  }
  if (!met_.selected.empty()) {
    std::ifstream header_only(met_.data);
    if (!header_only) throw DataError(fmt::format("cannot open '{}'", met_.data));
    const Dataset data = read_csv(met_.data);
    std::vector<std::string> names;
    if (std::filesystem::exists(met_.selected)) {
      const auto j = json::parse(slurp(met_.selected), nullptr, false);
      if (j.is_discarded() || !j.contains("subset_names")) {
        throw DataError(fmt::format("'{}' is not a select result file", met_.selected));
      }
      names = j.at("subset_names").get<std::vector<std::string>>();
    } else {
      names = split_list(met_.selected);
    }
    const auto selected = data.indices_of(names);
    const auto truth = data.indices_of(read_name_list(met_.truth));
    std::cout << fmt::format("VSER: {:.7g}\n", vser(selected, truth, data.d()));
  }
  return 0;
}

int Commands::run_bench() {
  SpeedupSeries series;
  if (!bench_cfg_.amdahl.empty()) {
    std::istringstream in(slurp(bench_cfg_.amdahl));
    series = read_speedup_csv(in);
  } else if (bench_cfg_.task == "select") {
    const auto id = parse_scenario(bench_cfg_.scenario);
    if (!id) throw DataError(fmt::format("unknown scenario '{}'", bench_cfg_.scenario));
    const GeneratedData g = generate({*id, bench_cfg_.n, bench_cfg_.seed});
    std::vector<int> workers;
    for (const auto& w : split_list(bench_cfg_.workers)) workers.push_back(to_int(w));
    SearchOptions o;
    series = measure(
        [&](int w) {
          SearchOptions ow = o;
          ow.parallel = w;
          run_search(g.data, ow);
        },
        bench_cfg_.reps, workers);
  } else {
    throw DataError("bench needs --amdahl or --task");
  }
  const AmdahlFit fit = amdahl_fit(series);
  const std::string csv = speedup_csv(series, fit);
  std::cout << csv;
  std::cout << fmt::format("f = {:.4f}\ns_max = {}\n", fit.f,
                           std::isfinite(fit.s_max) ? fmt::format("{:.3f}", fit.s_max) : std::string("Inf"));
  if (!bench_cfg_.csv.empty()) write_text(bench_cfg_.csv, csv);
  if (!bench_cfg_.svg.empty()) write_text(bench_cfg_.svg, speedup_svg(series, fit));
  return 0;
}

}  // namespace varsel::cli

#include "varsel/report.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>

namespace varsel {

using json = nlohmann::json;

namespace {

std::string non_finite(double v) {
  if (std::isnan(v)) return "NA";
  return v > 0 ? "Inf" : "-Inf";
}

// JSON has no infinities; those travel as strings.
json encode(double v) {
  if (std::isfinite(v)) return v;
  return non_finite(v);
}

double decode(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "Inf") return std::numeric_limits<double>::infinity();
    if (s == "-Inf") return -std::numeric_limits<double>::infinity();
    if (s == "NA") return std::numeric_limits<double>::quiet_NaN();
  }
  throw DataError(fmt::format("invalid number in trace log: {}", j.dump()));
}

int decimals_needed(double v, int digits) {
  if (v == 0.0) return 0;
  const int e = static_cast<int>(std::floor(std::log10(std::fabs(v))));
  const double target = std::stod(fmt::format("{:.{}e}", v, digits - 1));
  int sig = digits;
  for (int s = 1; s <= digits; ++s) {
    if (std::stod(fmt::format("{:.{}e}", v, s - 1)) == target) {
      sig = s;
      break;
    }
  }
  return std::max(0, sig - 1 - e);
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

StepType parse_step(const std::string& s) {
  if (s == "Add") return StepType::add;
  if (s == "Remove") return StepType::remove;
  throw DataError(fmt::format("unknown step type '{}'", s));
}

Decision parse_decision(const std::string& s) {
  if (s == "Accepted") return Decision::accepted;
  if (s == "Rejected") return Decision::rejected;
  throw DataError(fmt::format("unknown decision '{}'", s));
}

json fit_summary(const FitResult& fit) {
  return {{"model", model_name(fit.model)}, {"G", fit.G},       {"loglik", encode(fit.loglik)},
          {"df", fit.df},                   {"bic", encode(fit.bic)}, {"n", fit.n}};
}

}  // namespace

std::vector<std::string> format_column(std::span<const double> values, int digits) {
  int decimals = 0;
  for (const double v : values) {
    if (std::isfinite(v)) decimals = std::max(decimals, decimals_needed(v, digits));
  }
  decimals = std::min(decimals, 15);
  std::vector<std::string> out;
  out.reserve(values.size());
  for (const double v : values) out.push_back(std::isfinite(v) ? fmt::format("{:.{}f}", v, decimals) : non_finite(v));
  return out;
}

std::string format_trace_table(std::span<const TraceEntry> trace) {
  const std::vector<std::string> headers{"Variable proposed", "BIC", "BIC difference", "Type of step", "Decision"};
  std::vector<double> bic;
  std::vector<double> diff;
  for (const auto& e : trace) {
    bic.push_back(e.bic);
    diff.push_back(e.bic_difference);
  }
  std::vector<std::vector<std::string>> cols(5);
  cols[1] = format_column(bic);
  cols[2] = format_column(diff);
  std::vector<std::string> rownames;
  for (const auto& e : trace) {
    cols[0].push_back(e.variable_name);
    cols[3].emplace_back(to_string(e.step_type));
    cols[4].emplace_back(to_string(e.decision));
    rownames.push_back(std::to_string(e.step_index));
  }
  std::size_t rn_width = 0;
  for (const auto& r : rownames) rn_width = std::max(rn_width, r.size());
  std::vector<std::size_t> widths(5);
  for (std::size_t c = 0; c < 5; ++c) {
    widths[c] = headers[c].size();
    for (const auto& s : cols[c]) widths[c] = std::max(widths[c], s.size());
    ++widths[c];
  }
  std::string out = std::string(rn_width, ' ');
  for (std::size_t c = 0; c < 5; ++c) out += " " + pad_left(headers[c], widths[c]);
  out += '\n';
  for (std::size_t r = 0; r < trace.size(); ++r) {
    out += pad_right(rownames[r], rn_width);
    for (std::size_t c = 0; c < 5; ++c) out += " " + pad_left(cols[c][r], widths[c]);
    out += '\n';
  }
  return out;
}

std::string render_search(const SearchResult& result) {
  std::string out;
  if (result.search == SearchKind::greedy) {
    out += fmt::format("Stepwise ({}) greedy search:\n", to_string(result.direction));
  } else {
    out += fmt::format("Headlong ({}) search:\n", to_string(result.direction));
  }
  out += format_trace_table(result.trace);
  out += '\n';
  if (result.subset_names.empty()) {
    out += "Selected subset: <none>\n";
  } else {
    out += fmt::format("Selected subset: {}\n", fmt::join(result.subset_names, ", "));
  }
  return out;
}

std::string trace_to_jsonl(const SearchResult& result) {
  std::string out;
  for (const auto& e : result.trace) {
    const json rec{{"record", "step"},
                   {"step_index", e.step_index},
                   {"variable", e.variable},
                   {"variable_name", e.variable_name},
                   {"bic", encode(e.bic)},
                   {"bic_proposal", encode(e.bic_proposal)},
                   {"bic_difference", encode(e.bic_difference)},
                   {"step_type", to_string(e.step_type)},
                   {"decision", to_string(e.decision)}};
    out += rec.dump() + '\n';
  }
  json fin{{"record", "result"},
           {"direction", to_string(result.direction)},
           {"search", to_string(result.search)},
           {"subset", result.subset},
           {"subset_names", result.subset_names},
           {"candidates_discarded", result.candidates_discarded},
           {"status", to_string(result.status)},
           {"iterations", result.iterations}};
  fin["final_fit"] = result.final_fit ? fit_summary(*result.final_fit) : json(nullptr);
  out += fin.dump() + '\n';
  return out;
}

SearchResult parse_trace_jsonl(std::istream& in) {
  SearchResult res;
  bool have_result = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
      const auto kind = rec.at("record").get<std::string>();
      if (kind == "step") {
        TraceEntry e;
        e.step_index = rec.at("step_index").get<int>();
        e.variable = rec.at("variable").get<int>();
        e.variable_name = rec.at("variable_name").get<std::string>();
        e.bic = decode(rec.at("bic"));
        e.bic_proposal = decode(rec.at("bic_proposal"));
        e.bic_difference = decode(rec.at("bic_difference"));
        e.step_type = parse_step(rec.at("step_type").get<std::string>());
        e.decision = parse_decision(rec.at("decision").get<std::string>());
        res.trace.push_back(std::move(e));
      } else if (kind == "result") {
        const auto dir = rec.at("direction").get<std::string>();
        if (dir != "forward" && dir != "backward") throw DataError(fmt::format("unknown direction '{}'", dir));
        res.direction = dir == "forward" ? Direction::forward : Direction::backward;
        const auto search = rec.at("search").get<std::string>();
        if (search != "greedy" && search != "headlong") throw DataError(fmt::format("unknown search '{}'", search));
        res.search = search == "greedy" ? SearchKind::greedy : SearchKind::headlong;
        res.subset = rec.at("subset").get<VariableSet>();
        res.subset_names = rec.at("subset_names").get<std::vector<std::string>>();
        res.candidates_discarded = rec.at("candidates_discarded").get<std::vector<int>>();
        const auto status = rec.at("status").get<std::string>();
        for (const auto s : {SearchStatus::ok, SearchStatus::empty_subset, SearchStatus::itermax_reached}) {
          if (to_string(s) == status) res.status = s;
        }
        res.iterations = rec.at("iterations").get<int>();
        have_result = true;
      } else {
        throw DataError(fmt::format("unknown record type '{}'", kind));
      }
    } catch (const json::exception& e) {
      throw DataError(fmt::format("trace log line {}: {}", lineno, e.what()));
    }
  }
  if (!have_result) throw DataError("trace log has no result record");
  return res;
}

std::string search_result_json(const SearchResult& result) {
  json trace = json::array();
  for (const auto& e : result.trace) {
    trace.push_back({{"step_index", e.step_index},
                     {"variable", e.variable},
                     {"variable_name", e.variable_name},
                     {"bic", encode(e.bic)},
                     {"bic_proposal", encode(e.bic_proposal)},
                     {"bic_difference", encode(e.bic_difference)},
                     {"step_type", to_string(e.step_type)},
                     {"decision", to_string(e.decision)}});
  }
  json out{{"direction", to_string(result.direction)},
           {"search", to_string(result.search)},
           {"subset", result.subset},
           {"subset_names", result.subset_names},
           {"candidates_discarded", result.candidates_discarded},
           {"status", to_string(result.status)},
           {"iterations", result.iterations},
           {"trace", trace}};
  out["final_fit"] =
      result.final_fit ? json::parse(fit_result_json(*result.final_fit, result.subset_names)) : json(nullptr);
  return out.dump(2) + '\n';
}

std::string fit_result_json(const FitResult& fit, std::span<const std::string> names) {
  json out = fit_summary(fit);
  out["converged"] = fit.converged;
  out["iterations"] = fit.iterations;
  if (!names.empty()) out["variables"] = std::vector<std::string>(names.begin(), names.end());
  const auto& p = fit.params;
  std::vector<double> weights(p.weights.data(), p.weights.data() + p.weights.size());
  out["weights"] = weights;
  json means = json::array();
  json covs = json::array();
  for (int g = 0; g < p.G(); ++g) {
    std::vector<double> mu(static_cast<std::size_t>(p.d()));
    for (int j = 0; j < p.d(); ++j) mu[static_cast<std::size_t>(j)] = p.means(j, g);
    means.push_back(mu);
    json cov = json::array();
    for (int r = 0; r < p.d(); ++r) {
      std::vector<double> row(static_cast<std::size_t>(p.d()));
      for (int c = 0; c < p.d(); ++c) row[static_cast<std::size_t>(c)] = p.covariances[static_cast<std::size_t>(g)](r, c);
      cov.push_back(row);
    }
    covs.push_back(cov);
  }
  out["means"] = means;
  out["covariances"] = covs;
  std::vector<int> labels;
  labels.reserve(fit.classification.size());
  for (const int c : fit.classification) labels.push_back(c + 1);
  out["classification"] = labels;
  return out.dump();
}

}  // namespace varsel

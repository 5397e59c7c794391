#include "varsel/dataset.hpp"

#include "varsel/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace varsel {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

bool is_missing_token(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (!lower.empty() && (lower.front() == '+' || lower.front() == '-')) lower.erase(0, 1);
  return lower.empty() || lower == "na" || lower == "nan" || lower == "inf" || lower == "infinity" ||
         lower == "null";
}

double parse_cell(std::string_view raw, const std::string& source, std::size_t row, std::size_t col) {
  const std::string_view s = trim(raw);
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec == std::errc() && ptr == last && !s.empty()) {
    if (!std::isfinite(value)) {
      throw DataError(fmt::format("{}: non-finite value at row {}, column {}", source, row, col));
    }
    return value;
  }
  if (ec == std::errc::result_out_of_range) {
    throw DataError(fmt::format("{}: non-finite value at row {}, column {}", source, row, col));
  }
  if (is_missing_token(s)) {
    throw DataError(fmt::format("{}: missing or non-finite value '{}' at row {}, column {}", source, s, row, col));
  }
  throw DataError(fmt::format("{}: Categorical variables are not allowed (cell '{}' at row {}, column {})", source,
                              s, row, col));
}

}  // namespace

Dataset::Dataset(Matrix values, std::vector<std::string> col_names)
    : values_(std::move(values)), col_names_(std::move(col_names)) {
  if (values_.rows() < 1 || values_.cols() < 1) throw DataError("dataset needs at least one row and one column");
  if (static_cast<Eigen::Index>(col_names_.size()) != values_.cols()) {
    throw DataError(fmt::format("{} column names for {} columns", col_names_.size(), values_.cols()));
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : col_names_) {
    if (!seen.insert(name).second) throw DataError(fmt::format("duplicate column name '{}'", name));
  }
  if (!values_.allFinite()) throw DataError("dataset contains non-finite values");
}

Dataset Dataset::with_default_names(Matrix values) {
  std::vector<std::string> names;
  for (Eigen::Index j = 0; j < values.cols(); ++j) names.push_back(fmt::format("X{}", j + 1));
  return Dataset(std::move(values), std::move(names));
}

std::optional<int> Dataset::index_of(std::string_view name) const {
  const auto it = std::find(col_names_.begin(), col_names_.end(), name);
  if (it == col_names_.end()) return std::nullopt;
  return static_cast<int>(it - col_names_.begin());
}

VariableSet Dataset::indices_of(std::span<const std::string> names) const {
  VariableSet out;
  for (const auto& name : names) {
    const auto idx = index_of(name);
    if (!idx) throw DataError(fmt::format("unknown column '{}'", name));
    out.push_back(*idx);
  }
  return out;
}

Dataset parse_csv(std::istream& in, bool header, const std::string& source) {
  std::vector<std::string> names;
  std::vector<double> cells;
  std::size_t width = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto parts = split(line);
    if (first && header) {
      for (const auto part : parts) names.push_back(unquote(part));
      width = names.size();
      first = false;
      continue;
    }
    if (first) {
      width = parts.size();
      first = false;
    }
    if (parts.size() != width) {
      throw DataError(fmt::format("{}: line {} has {} fields, expected {}", source, line_no, parts.size(), width));
    }
    ++rows;
    for (std::size_t j = 0; j < parts.size(); ++j) cells.push_back(parse_cell(parts[j], source, rows, j + 1));
  }
  if (rows == 0 || width == 0) throw DataError(fmt::format("{}: no data rows", source));

  Matrix values(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cells[i * width + j];
    }
  }
  if (!header) return Dataset::with_default_names(std::move(values));
  return Dataset(std::move(values), std::move(names));
}

Dataset read_csv(const std::filesystem::path& path, bool header) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path.string()));
  return parse_csv(in, header, path.string());
}

void write_csv(const Dataset& data, std::ostream& out) {
  for (int j = 0; j < data.d(); ++j) out << (j ? "," : "") << data.name(j);
  out << '\n';
  const Matrix& x = data.values();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) out << (j ? "," : "") << fmt::format("{:.17g}", x(i, j));
    out << '\n';
  }
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
  write_csv(data, out);
}

void validate_variable_set(std::span<const int> vars, int d) {
  std::vector<char> seen(static_cast<std::size_t>(std::max(d, 0)), 0);
  for (const int v : vars) {
    if (v < 0 || v >= d) throw DataError(fmt::format("column index {} out of range [0, {})", v, d));
    if (seen[static_cast<std::size_t>(v)]++) throw DataError(fmt::format("column index {} repeated", v));
  }
}

Matrix select_columns(const Matrix& values, std::span<const int> vars) {
  Matrix out(values.rows(), static_cast<Eigen::Index>(vars.size()));
  for (std::size_t k = 0; k < vars.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = values.col(vars[k]);
  return out;
}

Dataset subset_columns(const Dataset& data, std::span<const int> vars) {
  if (vars.empty()) throw DataError("empty column selection");
  validate_variable_set(vars, data.d());
  std::vector<std::string> names;
  for (const int v : vars) names.push_back(data.name(v));
  return Dataset(select_columns(data.values(), vars), std::move(names));
}

std::vector<int> subsample_rows(int n, int size, std::uint64_t seed) {
  if (size < 1 || size > n) throw DataError(fmt::format("sample size {} outside [1, {}]", size, n));
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  // partial Fisher-Yates: the first `size` slots end up a uniform sample
  Rng rng(seed);
  for (int i = 0; i < size; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(size));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace varsel

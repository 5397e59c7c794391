#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace varsel {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Ordered column indices into a Dataset; order records selection history.
using VariableSet = std::vector<int>;

/// Raised for malformed input: bad files, invalid indices, out-of-range arguments.
class DataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Immutable n x d matrix of finite reals with unique column names.
class Dataset {
 public:
  Dataset(Matrix values, std::vector<std::string> col_names);

  /// Names the columns X1..Xd.
  static Dataset with_default_names(Matrix values);

  int n() const { return static_cast<int>(values_.rows()); }
  int d() const { return static_cast<int>(values_.cols()); }
  const Matrix& values() const { return values_; }
  const std::vector<std::string>& col_names() const { return col_names_; }
  const std::string& name(int column) const { return col_names_.at(static_cast<std::size_t>(column)); }
  std::optional<int> index_of(std::string_view name) const;

  /// Column indices for a list of names; throws DataError on an unknown name.
  VariableSet indices_of(std::span<const std::string> names) const;

 private:
  Matrix values_;
  std::vector<std::string> col_names_;
};

/// Parses comma-separated numeric data. The first row holds column names when
/// `header` is set; otherwise names default to X1..Xd.
Dataset parse_csv(std::istream& in, bool header, const std::string& source = "<stream>");
Dataset read_csv(const std::filesystem::path& path, bool header = true);

/// Writes with a header row and round-trip (17 significant digit) precision.
void write_csv(const Dataset& data, std::ostream& out);
void write_csv(const Dataset& data, const std::filesystem::path& path);

void validate_variable_set(std::span<const int> vars, int d);

/// Columns in `vars` order, names carried over. An empty selection is an error.
Dataset subset_columns(const Dataset& data, std::span<const int> vars);

/// Column block of a raw matrix in `vars` order.
Matrix select_columns(const Matrix& values, std::span<const int> vars);

/// `size` distinct row indices drawn uniformly without replacement, sorted ascending.
std::vector<int> subsample_rows(int n, int size, std::uint64_t seed);
inline std::vector<int> subsample_rows(const Dataset& data, int size, std::uint64_t seed) {
  return subsample_rows(data.n(), size, seed);
}

}  // namespace varsel

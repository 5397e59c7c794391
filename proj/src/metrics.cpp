#include "varsel/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace varsel {

namespace {

double choose2(long long m) { return 0.5 * static_cast<double>(m) * static_cast<double>(m - 1); }

std::vector<int> compact(std::span<const int> labels) {
  std::map<int, int> ids;
  std::vector<int> out;
  out.reserve(labels.size());
  for (const int l : labels) {
    const auto [it, inserted] = ids.emplace(l, static_cast<int>(ids.size()));
    out.push_back(it->second);
  }
  return out;
}

struct Margins {
  std::vector<long long> rows;
  std::vector<long long> cols;
  double pairs_both = 0.0;
  double pairs_rows = 0.0;
  double pairs_cols = 0.0;
  double pairs_total = 0.0;
};

Margins margins(const ContingencyTable& t) {
  Margins m;
  m.rows.assign(t.rows(), 0);
  m.cols.assign(t.cols(), 0);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) {
      m.rows[i] += t.counts[i][j];
      m.cols[j] += t.counts[i][j];
      m.pairs_both += choose2(t.counts[i][j]);
    }
  }
  for (const auto r : m.rows) m.pairs_rows += choose2(r);
  for (const auto c : m.cols) m.pairs_cols += choose2(c);
  m.pairs_total = choose2(t.n);
  return m;
}

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw DataError(fmt::format("label vectors differ in length ({} vs {})", a, b));
  if (a == 0) throw DataError("empty label vectors");
}

}  // namespace

ContingencyTable ContingencyTable::from_labels(std::span<const int> a, std::span<const int> b) {
  check_lengths(a.size(), b.size());
  const auto ca = compact(a);
  const auto cb = compact(b);
  const auto r = static_cast<std::size_t>(*std::max_element(ca.begin(), ca.end()) + 1);
  const auto c = static_cast<std::size_t>(*std::max_element(cb.begin(), cb.end()) + 1);
  ContingencyTable t;
  t.counts.assign(r, std::vector<long long>(c, 0));
  for (std::size_t i = 0; i < ca.size(); ++i) ++t.counts[static_cast<std::size_t>(ca[i])][static_cast<std::size_t>(cb[i])];
  t.n = static_cast<long long>(a.size());
  return t;
}

ContingencyTable ContingencyTable::from_counts(std::vector<std::vector<long long>> counts) {
  ContingencyTable t;
  if (counts.empty() || counts.front().empty()) throw DataError("empty contingency table");
  for (const auto& row : counts) {
    if (row.size() != counts.front().size()) throw DataError("ragged contingency table");
    for (const auto v : row) {
      if (v < 0) throw DataError("negative count in contingency table");
      t.n += v;
    }
  }
  if (t.n < 1) throw DataError("contingency table has no observations");
  t.counts = std::move(counts);
  return t;
}

double ari(const ContingencyTable& table) {
  const Margins m = margins(table);
  if (m.pairs_total == 0.0) return 1.0;
  const double expected = m.pairs_rows * m.pairs_cols / m.pairs_total;
  const double maximum = 0.5 * (m.pairs_rows + m.pairs_cols);
  if (maximum == expected) return 1.0;
  return (m.pairs_both - expected) / (maximum - expected);
}

double ari(std::span<const int> a, std::span<const int> b) { return ari(ContingencyTable::from_labels(a, b)); }

double rand_index(const ContingencyTable& table) {
  const Margins m = margins(table);
  if (m.pairs_total == 0.0) return 1.0;
  return (m.pairs_total + 2.0 * m.pairs_both - m.pairs_rows - m.pairs_cols) / m.pairs_total;
}

double cer(const ContingencyTable& table) { return 1.0 - rand_index(table); }
double cer(std::span<const int> a, std::span<const int> b) { return cer(ContingencyTable::from_labels(a, b)); }

double class_error(const ContingencyTable& table) {
  const std::size_t r = table.rows();
  const std::size_t c = table.cols();
  long long correct = 0;
  if (c > r) {
    for (std::size_t j = 0; j < c; ++j) {
      long long best = 0;
      for (std::size_t i = 0; i < r; ++i) best = std::max(best, table.counts[i][j]);
      correct += best;
    }
  } else {
    double assignments = 1.0;
    for (std::size_t k = 0; k < c; ++k) assignments *= static_cast<double>(r - k);
    if (c <= 8 && assignments <= 1e7) {
      std::vector<char> taken(r, 0);
      std::function<void(std::size_t, long long)> search = [&](std::size_t j, long long acc) {
        if (j == c) {
          correct = std::max(correct, acc);
          return;
        }
        for (std::size_t i = 0; i < r; ++i) {
          if (taken[i]) continue;
          taken[i] = 1;
          search(j + 1, acc + table.counts[i][j]);
          taken[i] = 0;
        }
      };
      search(0, 0);
    } else {
      std::vector<char> row_used(r, 0);
      std::vector<char> col_used(c, 0);
      for (std::size_t step = 0; step < c; ++step) {
        long long best = -1;
        std::size_t bi = 0;
        std::size_t bj = 0;
        for (std::size_t i = 0; i < r; ++i) {
          if (row_used[i]) continue;
          for (std::size_t j = 0; j < c; ++j) {
            if (!col_used[j] && table.counts[i][j] > best) {
              best = table.counts[i][j];
              bi = i;
              bj = j;
            }
          }
        }
        row_used[bi] = 1;
        col_used[bj] = 1;
        correct += best;
      }
    }
  }
  return static_cast<double>(table.n - correct) / static_cast<double>(table.n);
}

double class_error(std::span<const int> truth, std::span<const int> cluster) {
  return class_error(ContingencyTable::from_labels(truth, cluster));
}

double vser(std::span<const int> selected, std::span<const int> truth, int d) {
  if (d < 1) throw DataError("vser needs d >= 1");
  validate_variable_set(selected, d);
  validate_variable_set(truth, d);
  const std::set<int> s(selected.begin(), selected.end());
  const std::set<int> t(truth.begin(), truth.end());
  std::vector<int> diff;
  std::set_symmetric_difference(s.begin(), s.end(), t.begin(), t.end(), std::back_inserter(diff));
  return static_cast<double>(diff.size()) / static_cast<double>(d);
}

std::vector<int> encode_labels(std::span<const std::string> labels) {
  std::map<std::string, int> ids;
  std::vector<int> out;
  out.reserve(labels.size());
  for (const auto& l : labels) {
    const auto [it, inserted] = ids.emplace(l, static_cast<int>(ids.size()));
    out.push_back(it->second);
  }
  return out;
}

}  // namespace varsel

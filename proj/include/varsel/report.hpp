#pragma once

#include "varsel/gmm.hpp"
#include "varsel/selection.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace varsel {

/// Five-column trace table with row numbers, in the layout of R's data frame printer.
std::string format_trace_table(std::span<const TraceEntry> trace);

/// Header line, trace table and "Selected subset" line, as printed by `varsel select`.
std::string render_search(const SearchResult& result);

/// One JSON record per trace entry followed by a result record.
std::string trace_to_jsonl(const SearchResult& result);

/// Inverse of trace_to_jsonl (the final fit is not restored). Throws DataError on malformed input.
SearchResult parse_trace_jsonl(std::istream& in);

/// Pretty-printed JSON of a search result including the final fit.
std::string search_result_json(const SearchResult& result);

/// JSON of a mixture fit: model, G, loglik, df, BIC, parameters and classification.
std::string fit_result_json(const FitResult& fit, std::span<const std::string> names = {});

/// Shortest fixed-point rendering that keeps `digits` significant digits for every value;
/// all values share the number of decimals. Non-finite values print as -Inf, Inf, NA.
std::vector<std::string> format_column(std::span<const double> values, int digits = 7);

}  // namespace varsel

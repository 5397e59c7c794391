#include "test_util.hpp"

#include "varsel/report.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <sstream>

using namespace varsel;

namespace {

TraceEntry row(int k, const char* name, double bic, double diff, StepType t, Decision d) {
  TraceEntry e;
  e.step_index = k;
  e.variable = k;
  e.variable_name = name;
  e.bic = bic;
  e.bic_proposal = bic;
  e.bic_difference = diff;
  e.step_type = t;
  e.decision = d;
  return e;
}

constexpr auto Add = StepType::add;
constexpr auto Rem = StepType::remove;
constexpr auto Acc = Decision::accepted;
constexpr auto Rej = Decision::rejected;

SearchResult crabs_forward() {
  SearchResult r;
  r.trace = {row(1, "CW", -1408.710, -6.21775, Add, Acc),   row(2, "RW", -1908.964, 127.38583, Add, Acc),
             row(3, "FL", -2357.252, 81.24626, Add, Acc),   row(4, "FL", -2357.252, 81.24074, Rem, Rej),
             row(5, "BD", -2609.777, 56.08094, Add, Acc),   row(6, "BD", -2609.777, 71.39446, Rem, Rej),
             row(7, "CL", -2609.777, -31.07119, Add, Rej),  row(8, "BD", -2609.777, 71.39446, Rem, Rej)};
  r.subset = {3, 1, 0, 4};
  r.subset_names = {"CW", "RW", "FL", "BD"};
  return r;
}

}  // namespace

TEST(Render, ForwardTraceLayout) {
  const std::string expected =
      "Stepwise (forward) greedy search:\n"
      "   Variable proposed        BIC  BIC difference  Type of step  Decision\n"
      "1                 CW  -1408.710        -6.21775           Add  Accepted\n"
      "2                 RW  -1908.964       127.38583           Add  Accepted\n"
      "3                 FL  -2357.252        81.24626           Add  Accepted\n"
      "4                 FL  -2357.252        81.24074        Remove  Rejected\n"
      "5                 BD  -2609.777        56.08094           Add  Accepted\n"
      "6                 BD  -2609.777        71.39446        Remove  Rejected\n"
      "7                 CL  -2609.777       -31.07119           Add  Rejected\n"
      "8                 BD  -2609.777        71.39446        Remove  Rejected\n"
      "\n"
      "Selected subset: CW, RW, FL, BD\n";
  EXPECT_EQ(render_search(crabs_forward()), expected);
}

TEST(Render, LongNamesAndSixDecimals) {
  const std::vector<TraceEntry> trace{row(1, "Extract Yield", -788.3021, -10.930431, Rem, Acc),
                                      row(2, "Neochlorogenic Acid", -852.5413, -9.982637, Rem, Acc),
                                      row(8, "Isochlorogenic Acid", -999.1101, -90.028182, Add, Rej)};
  const std::string expected =
      "     Variable proposed        BIC  BIC difference  Type of step  Decision\n"
      "1        Extract Yield  -788.3021      -10.930431        Remove  Accepted\n"
      "2  Neochlorogenic Acid  -852.5413       -9.982637        Remove  Accepted\n"
      "8  Isochlorogenic Acid  -999.1101      -90.028182           Add  Rejected\n";
  EXPECT_EQ(format_trace_table(trace), expected);
}

TEST(Render, NonFiniteValues) {
  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<double> v{-inf, 1.5, std::numeric_limits<double>::quiet_NaN(), inf};
  EXPECT_EQ(format_column(v), (std::vector<std::string>{"-Inf", "1.5", "NA", "Inf"}));
}

TEST(TraceLog, RoundTripRendersIdentically) {
  SearchResult r = crabs_forward();
  r.trace[6].bic_difference = -std::numeric_limits<double>::infinity();
  r.candidates_discarded = {2};
  r.direction = Direction::backward;
  r.iterations = 4;
  const std::string log = trace_to_jsonl(r);
  std::istringstream in(log);
  const SearchResult back = parse_trace_jsonl(in);
  EXPECT_EQ(render_search(back), render_search(r));
  EXPECT_EQ(back.subset, r.subset);
  EXPECT_EQ(back.candidates_discarded, r.candidates_discarded);
  EXPECT_EQ(back.iterations, 4);
  EXPECT_EQ(trace_to_jsonl(back), log);
}

TEST(TraceLog, MalformedInput) {
  std::istringstream missing("{\"record\":\"step\"}\n");
  EXPECT_THROW(parse_trace_jsonl(missing), DataError);
  std::istringstream no_result("");
  EXPECT_THROW(parse_trace_jsonl(no_result), DataError);
  std::istringstream garbage("not json\n");
  EXPECT_THROW(parse_trace_jsonl(garbage), DataError);
}

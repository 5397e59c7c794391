#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace varsel {

struct SpeedupPoint {
  int workers = 1;       // P
  double seconds = 0.0;  // t_P
};

/// Wall times per worker count; must contain P = 1 as the baseline.
struct SpeedupSeries {
  std::vector<SpeedupPoint> points;

  /// Throws DataError unless times are positive, P values distinct and >= 1, and P = 1 present.
  void validate() const;
  double baseline() const;
  /// s_P = t_1 / t_P in point order.
  std::vector<double> speedups() const;
};

/// Predicted speedup on P workers for sequential fraction f.
double amdahl_speedup(double f, double P);

struct AmdahlFit {
  double f = 0.0;
  double s_max = 0.0;  // 1 / f, infinite for f = 0
  double residual = 0.0;
};

/// Sum of squared differences between observed and predicted speedups.
double amdahl_residual(double f, std::span<const int> P, std::span<const double> s);

/// Least-squares f in [0, 1] over a 1e-4 grid refined by golden-section search.
AmdahlFit amdahl_fit(std::span<const int> P, std::span<const double> s);
AmdahlFit amdahl_fit(const SpeedupSeries& series);

/// Generates a series whose speedups follow the law exactly (t_1 = base_seconds).
SpeedupSeries synthetic_series(double f, std::span<const int> P, double base_seconds = 1.0);

double median(std::vector<double> values);

using BenchTask = std::function<void(int workers)>;

/// Median wall time of `repetitions` runs for each worker count.
SpeedupSeries measure(const BenchTask& task, int repetitions, std::span<const int> workers);

/// Times one run of `fn` in seconds.
double time_once(const std::function<void()>& fn);

/// CSV with columns P,t_P,s_P followed by comment lines carrying f and s_max.
std::string speedup_csv(const SpeedupSeries& series, const AmdahlFit& fit);

/// Reads P with t_P and/or s_P columns (comment lines start with '#'). When only
/// s_P is given, times are taken as 1 / s_P.
SpeedupSeries read_speedup_csv(std::istream& in);

/// Speedup against P with the fitted curve and the ideal line.
std::string speedup_svg(const SpeedupSeries& series, const AmdahlFit& fit);

}  // namespace varsel

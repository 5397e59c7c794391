#include "varsel/bench.hpp"

#include "varsel/dataset.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <set>
#include <sstream>

namespace varsel {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

double to_double(const std::string& s, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DataError(fmt::format("line {}: cannot parse '{}' as a number", line, s));
  }
  return v;
}

}  // namespace

void SpeedupSeries::validate() const {
  if (points.empty()) throw DataError("empty speedup series");
  std::set<int> seen;
  for (const auto& p : points) {
    if (p.workers < 1) throw DataError(fmt::format("invalid worker count {}", p.workers));
    if (!(p.seconds > 0.0) || !std::isfinite(p.seconds)) {
      throw DataError(fmt::format("time for P = {} must be positive", p.workers));
    }
    if (!seen.insert(p.workers).second) throw DataError(fmt::format("duplicate worker count {}", p.workers));
  }
  if (!seen.count(1)) throw DataError("speedup series needs the P = 1 baseline");
}

double SpeedupSeries::baseline() const {
  for (const auto& p : points) {
    if (p.workers == 1) return p.seconds;
  }
  throw DataError("speedup series needs the P = 1 baseline");
}

std::vector<double> SpeedupSeries::speedups() const {
  const double t1 = baseline();
  std::vector<double> s;
  s.reserve(points.size());
  for (const auto& p : points) s.push_back(t1 / p.seconds);
  return s;
}

double amdahl_speedup(double f, double P) { return 1.0 / (f + (1.0 - f) / P); }

double amdahl_residual(double f, std::span<const int> P, std::span<const double> s) {
  double r = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const double e = s[i] - amdahl_speedup(f, P[i]);
    r += e * e;
  }
  return r;
}

AmdahlFit amdahl_fit(std::span<const int> P, std::span<const double> s) {
  if (P.size() != s.size()) throw DataError("worker counts and speedups differ in length");
  if (std::set<int>(P.begin(), P.end()).size() < 2) throw DataError("fitting needs at least two distinct worker counts");
  for (const double v : s) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DataError("speedups must be positive and finite");
  }

  constexpr int steps = 10000;
  double best_f = 0.0;
  double best_r = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= steps; ++k) {
    const double f = static_cast<double>(k) / steps;
    const double r = amdahl_residual(f, P, s);
    if (r < best_r) {
      best_r = r;
      best_f = f;
    }
  }

  double lo = std::max(0.0, best_f - 1.0 / steps);
  double hi = std::min(1.0, best_f + 1.0 / steps);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - phi * (hi - lo);
  double b = lo + phi * (hi - lo);
  double ra = amdahl_residual(a, P, s);
  double rb = amdahl_residual(b, P, s);
  while (hi - lo > 1e-12) {
    if (ra < rb) {
      hi = b;
      b = a;
      rb = ra;
      a = hi - phi * (hi - lo);
      ra = amdahl_residual(a, P, s);
    } else {
      lo = a;
      a = b;
      ra = rb;
      b = lo + phi * (hi - lo);
      rb = amdahl_residual(b, P, s);
    }
  }
  const double refined = 0.5 * (lo + hi);
  const double refined_r = amdahl_residual(refined, P, s);
  if (refined_r < best_r) {
    best_f = refined;
    best_r = refined_r;
  }

  AmdahlFit fit;
  fit.f = best_f;
  fit.residual = best_r;
  fit.s_max = best_f > 0.0 ? 1.0 / best_f : std::numeric_limits<double>::infinity();
  return fit;
}

AmdahlFit amdahl_fit(const SpeedupSeries& series) {
  series.validate();
  std::vector<int> P;
  for (const auto& p : series.points) P.push_back(p.workers);
  const auto s = series.speedups();
  return amdahl_fit(P, s);
}

SpeedupSeries synthetic_series(double f, std::span<const int> P, double base_seconds) {
  if (f < 0.0 || f > 1.0) throw DataError("f must lie in [0, 1]");
  SpeedupSeries series;
  for (const int p : P) series.points.push_back({p, base_seconds / amdahl_speedup(f, p)});
  series.validate();
  return series;
}

double median(std::vector<double> values) {
  if (values.empty()) throw DataError("median of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 == 1 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

double time_once(const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SpeedupSeries measure(const BenchTask& task, int repetitions, std::span<const int> workers) {
  if (repetitions < 1) throw DataError("repetitions must be at least 1");
  if (workers.empty()) throw DataError("no worker counts to measure");
  SpeedupSeries series;
  for (const int w : workers) {
    std::vector<double> times;
    for (int r = 0; r < repetitions; ++r) {
      try {
        times.push_back(time_once([&] { task(w); }));
      } catch (const std::exception& e) {
        throw std::runtime_error(fmt::format("benchmark task failed with {} workers (repetition {}): {}", w, r + 1,
                                             e.what()));
      }
    }
    series.points.push_back({w, std::max(median(std::move(times)), 1e-9)});
  }
  return series;
}

std::string speedup_csv(const SpeedupSeries& series, const AmdahlFit& fit) {
  std::string out = "P,t_P,s_P\n";
  const auto s = series.speedups();
  for (std::size_t i = 0; i < series.points.size(); ++i) {
    out += fmt::format("{},{:.9g},{:.9g}\n", series.points[i].workers, series.points[i].seconds, s[i]);
  }
  out += fmt::format("# f,{:.6f}\n", fit.f);
  out += std::isfinite(fit.s_max) ? fmt::format("# s_max,{:.6f}\n", fit.s_max) : std::string("# s_max,Inf\n");
  return out;
}

SpeedupSeries read_speedup_csv(std::istream& in) {
  std::string line;
  int lineno = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    header = split(line);
  }
  const auto col = [&](std::string_view name) {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int cp = col("P");
  const int ct = col("t_P");
  const int cs = col("s_P");
  if (cp < 0 || (ct < 0 && cs < 0)) throw DataError("speedup CSV needs a P column and a t_P or s_P column");

  SpeedupSeries series;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw DataError(fmt::format("line {}: expected {} fields", lineno, header.size()));
    const double p = to_double(cells[static_cast<std::size_t>(cp)], lineno);
    if (p != std::floor(p)) throw DataError(fmt::format("line {}: P must be an integer", lineno));
    const double t = ct >= 0 ? to_double(cells[static_cast<std::size_t>(ct)], lineno)
                             : 1.0 / to_double(cells[static_cast<std::size_t>(cs)], lineno);
    series.points.push_back({static_cast<int>(p), t});
  }
  series.validate();
  return series;
}

std::string speedup_svg(const SpeedupSeries& series, const AmdahlFit& fit) {
  constexpr double W = 640;
  constexpr double H = 480;
  constexpr double L = 60;
  constexpr double R = 20;
  constexpr double T = 30;
  constexpr double B = 50;
  const auto s = series.speedups();
  int pmax = 1;
  for (const auto& p : series.points) pmax = std::max(pmax, p.workers);
  double smax = 1.0;
  for (const double v : s) smax = std::max(smax, v);
  smax = std::max(smax, static_cast<double>(pmax));
  const auto sx = [&](double p) { return L + (p - 1.0) / std::max(1, pmax - 1) * (W - L - R); };
  const auto sy = [&](double v) { return H - B - v / smax * (H - T - B); };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n", W, H);
  out += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", W, H);
  out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", L, H - B, W - R);
  out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", L, H - B, T);
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\">workers (P)</text>\n",
                     (L + W - R) / 2, H - 12);
  out += fmt::format(
      "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 16 {})\">speedup</text>\n",
      (T + H - B) / 2, (T + H - B) / 2);
  for (int p = 1; p <= pmax; ++p) {
    out += fmt::format("<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\" font-size=\"11\">{}</text>\n", sx(p),
                       H - B + 16, p);
  }
  out += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n",
                     sx(1), sy(1), sx(pmax), sy(pmax));
  std::string path;
  constexpr int samples = 200;
  for (int k = 0; k <= samples; ++k) {
    const double p = 1.0 + (pmax - 1.0) * k / samples;
    path += fmt::format("{}{:.1f},{:.1f} ", k == 0 ? "M" : "L", sx(p), sy(amdahl_speedup(fit.f, p)));
  }
  out += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\"/>\n", path);
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"4\" fill=\"firebrick\"/>\n",
                       sx(series.points[i].workers), sy(s[i]));
  }
  out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"13\">f = {:.4f}</text>\n", L + 10, T + 14, fit.f);
  out += "</svg>\n";
  return out;
}

}  // namespace varsel

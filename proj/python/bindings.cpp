#include "varsel/bench.hpp"
#include "varsel/datagen.hpp"
#include "varsel/dataset.hpp"
#include "varsel/gmm.hpp"
#include "varsel/metrics.hpp"
#include "varsel/report.hpp"
#include "varsel/selection.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace varsel;

namespace {

CovarianceModel to_model(const std::string& name) {
  const auto m = parse_model(name);
  if (!m) throw DataError("unknown model '" + name + "'");
  return *m;
}

std::vector<CovarianceModel> to_models(const std::vector<std::string>& names) {
  std::vector<CovarianceModel> out;
  for (const auto& n : names) out.push_back(to_model(n));
  return out;
}

HcUse to_hc_use(const std::string& name) {
  const auto u = parse_hc_use(name);
  if (!u) throw DataError("unknown hc_use '" + name + "'");
  return *u;
}

Dataset make_dataset(const Matrix& x, std::optional<std::vector<std::string>> names) {
  return names ? Dataset(x, *names) : Dataset::with_default_names(x);
}

py::dict fit_dict(const FitResult& f) {
  py::dict d;
  d["model"] = std::string(model_name(f.model));
  d["G"] = f.G;
  d["n"] = f.n;
  d["loglik"] = f.loglik;
  d["df"] = f.df;
  d["bic"] = f.bic;
  d["converged"] = f.converged;
  d["iterations"] = f.iterations;
  d["weights"] = f.params.weights;
  d["means"] = f.params.means;
  d["covariances"] = f.params.covariances;
  d["z"] = f.z;
  d["classification"] = f.classification;
  d["loglik_trace"] = f.loglik_trace;
  d["summary"] = summarize(f);
  return d;
}

py::dict result_dict(const SearchResult& r) {
  py::list trace;
  for (const auto& e : r.trace) {
    py::dict t;
    t["step_index"] = e.step_index;
    t["variable"] = e.variable;
    t["variable_name"] = e.variable_name;
    t["bic"] = e.bic;
    t["bic_proposal"] = e.bic_proposal;
    t["bic_difference"] = e.bic_difference;
    t["step_type"] = std::string(to_string(e.step_type));
    t["decision"] = std::string(to_string(e.decision));
    trace.append(t);
  }
  py::dict d;
  d["subset"] = r.subset;
  d["subset_names"] = r.subset_names;
  d["trace"] = trace;
  d["final_fit"] = r.final_fit ? py::object(fit_dict(*r.final_fit)) : py::object(py::none());
  d["candidates_discarded"] = r.candidates_discarded;
  d["status"] = std::string(to_string(r.status));
  d["iterations"] = r.iterations;
  d["report"] = render_search(r);
  d["trace_log"] = trace_to_jsonl(r);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Variable selection for Gaussian-mixture clustering";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<FitFailure>(m, "FitFailure", PyExc_RuntimeError);

  m.def("models", [] {
    std::vector<std::string> out;
    for (const auto x : univariate_models()) out.emplace_back(model_name(x));
    for (const auto x : multivariate_models()) out.emplace_back(model_name(x));
    return out;
  });

  m.def("n_params", [](const std::string& model, int d, int G) { return n_params(to_model(model), d, G); },
        py::arg("model"), py::arg("d"), py::arg("G"));
  m.def("bic", &bic, py::arg("loglik"), py::arg("df"), py::arg("n"));

  m.def(
      "read_csv",
      [](const std::string& path, bool header) {
        const Dataset d = read_csv(path, header);
        return py::make_tuple(d.values(), d.col_names());
      },
      py::arg("path"), py::arg("header") = true);

  m.def(
      "fit",
      [](const Matrix& x, std::vector<int> G, std::optional<std::vector<std::string>> models, const std::string& hc_model,
         const std::string& hc_use, bool samp, int sampsize, std::uint64_t seed) {
        FitOptions o;
        o.hc_model = to_model(hc_model);
        o.hc_use = to_hc_use(hc_use);
        o.samp = samp;
        o.sampsize = sampsize;
        o.seed = seed;
        const auto ms = models ? to_models(*models) : (x.cols() == 1 ? univariate_models() : multivariate_models());
        FitResult f;
        {
          py::gil_scoped_release release;
          f = best_fit(x, G, ms, o);
        }
        return fit_dict(f);
      },
      py::arg("x"), py::arg("G") = std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9}, py::arg("models") = py::none(),
      py::arg("hc_model") = "VVV", py::arg("hc_use") = "SVD", py::arg("samp") = false, py::arg("sampsize") = 0,
      py::arg("seed") = 0);

  const SearchOptions def;
  m.def(
      "select",
      [](const Matrix& x, std::optional<std::vector<std::string>> names, std::vector<int> G,
         const std::string& direction, const std::string& search, double bic_diff, double bic_upper, double bic_lower,
         int itermax, bool forcetwo, int parallel, bool samp, int sampsize, std::uint64_t seed,
         std::optional<std::vector<std::string>> em_models_1, std::optional<std::vector<std::string>> em_models_2,
         const std::string& hc_model, const std::string& hc_use, const std::string& regression) {
        if (direction != "forward" && direction != "backward") throw DataError("direction must be forward or backward");
        if (search != "greedy" && search != "headlong") throw DataError("search must be greedy or headlong");
        if (regression != "subset" && regression != "all") throw DataError("regression must be subset or all");
        SearchOptions o;
        o.g_range = std::move(G);
        o.direction = direction == "forward" ? Direction::forward : Direction::backward;
        o.search = search == "greedy" ? SearchKind::greedy : SearchKind::headlong;
        o.bic_diff_threshold = bic_diff;
        o.bic_upper = bic_upper;
        o.bic_lower = bic_lower;
        o.itermax = itermax;
        o.forcetwo = forcetwo;
        o.parallel = parallel;
        o.fit_options.samp = samp;
        o.fit_options.sampsize = sampsize;
        o.fit_options.seed = seed;
        o.fit_options.hc_model = to_model(hc_model);
        o.fit_options.hc_use = to_hc_use(hc_use);
        o.regression_mode = regression == "all" ? RegressionMode::all : RegressionMode::subset;
        if (em_models_1) o.em_models_1 = to_models(*em_models_1);
        if (em_models_2) o.em_models_2 = to_models(*em_models_2);
        const Dataset data = make_dataset(x, std::move(names));
        SearchResult r;
        {
          py::gil_scoped_release release;
          r = run_search(data, o);
        }
        return result_dict(r);
      },
      py::arg("x"), py::arg("names") = py::none(), py::arg("G") = def.g_range, py::arg("direction") = "forward",
      py::arg("search") = "greedy", py::arg("bic_diff") = def.bic_diff_threshold, py::arg("bic_upper") = def.bic_upper,
      py::arg("bic_lower") = def.bic_lower, py::arg("itermax") = def.itermax, py::arg("forcetwo") = def.forcetwo,
      py::arg("parallel") = def.parallel, py::arg("samp") = def.fit_options.samp,
      py::arg("sampsize") = def.fit_options.sampsize, py::arg("seed") = def.fit_options.seed,
      py::arg("em_models_1") = py::none(), py::arg("em_models_2") = py::none(), py::arg("hc_model") = "VVV",
      py::arg("hc_use") = "SVD", py::arg("regression") = "subset");

  m.def(
      "bic_diff",
      [](const Matrix& x, std::vector<int> S, int candidate, std::vector<int> G) {
        SearchOptions o;
        o.g_range = std::move(G);
        const Dataset data = Dataset::with_default_names(x);
        const auto r = bic_diff(data, S, candidate, o);
        py::dict d;
        d["bic_clust_joint"] = r.bic_clust_joint;
        d["bic_clust_S"] = r.bic_clust_S;
        d["bic_reg"] = r.bic_reg;
        d["bic_not_clust"] = r.bic_not_clust;
        d["diff"] = r.diff;
        d["regressors"] = r.regressors;
        return d;
      },
      py::arg("x"), py::arg("S"), py::arg("candidate"), py::arg("G") = def.g_range);

  using Labels = std::vector<int>;
  m.def("ari", [](const Labels& a, const Labels& b) { return ari(a, b); }, py::arg("a"), py::arg("b"));
  m.def("cer", [](const Labels& a, const Labels& b) { return cer(a, b); }, py::arg("a"), py::arg("b"));
  m.def("class_error", [](const Labels& t, const Labels& c) { return class_error(t, c); }, py::arg("truth"),
        py::arg("cluster"));
  m.def("vser", [](const Labels& s, const Labels& t, int d) { return vser(s, t, d); }, py::arg("selected"),
        py::arg("truth"), py::arg("d"));

  m.def(
      "generate",
      [](const std::string& scenario, int n, std::uint64_t seed) {
        const auto id = parse_scenario(scenario);
        if (!id) throw DataError("unknown scenario '" + scenario + "'");
        const GeneratedData g = generate({*id, n, seed});
        return py::make_tuple(g.data.values(), g.data.col_names(), g.labels, g.truth);
      },
      py::arg("scenario"), py::arg("n"), py::arg("seed") = 0);

  m.def(
      "amdahl_fit",
      [](std::vector<int> P, std::vector<double> s) {
        const auto f = amdahl_fit(P, s);
        return py::make_tuple(f.f, f.s_max);
      },
      py::arg("P"), py::arg("s"));
}

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "pleader/analysis.hpp"
#include "pleader/cascades.hpp"
#include "pleader/errors.hpp"
#include "pleader/harness.hpp"
#include "pleader/hrv.hpp"
#include "pleader/io.hpp"
#include "pleader/processes.hpp"

namespace py = pybind11;
using namespace pleader;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const std::vector<double>& v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Signal to_signal(const Array& a) {
  std::vector<double> v(a.data(), a.data() + a.size());
  if (a.ndim() == 1) return Signal::make_1d(std::move(v));
  if (a.ndim() == 2)
    return Signal::make_2d(std::move(v), static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  throw ParameterError("expected a 1D or 2D array");
}

AnalysisOptions make_options(const std::vector<double>& p, const std::optional<std::vector<double>>& q, int m,
                             int j1, int j2, bool correction, const std::string& mode,
                             const std::string& weights, bool discard_border) {
  AnalysisOptions o;
  o.p_list = p;
  if (q) o.q_grid = *q;
  o.m_max = m;
  o.j1 = j1;
  o.j2 = j2;
  o.correction = correction;
  o.mode = leader_mode_from_string(mode);
  o.weights = weight_scheme_from_string(weights);
  o.discard_border = discard_border;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "p-leader multifractal analysis with finite-resolution correction";

  py::register_exception<Error>(m, "PleaderError", PyExc_ValueError);

  m.attr("INDEX_CONVENTION") = io::kIndexConvention;

  m.def(
      "analyze",
      [](const Array& data, int nvm, const std::vector<double>& p, const std::optional<std::vector<double>>& q,
         int m_max, int j1, int j2, bool correction, const std::string& mode, const std::string& weights,
         bool discard_border) {
        const auto pyr = dwt(to_signal(data), nvm);
        const auto opts = make_options(p, q, m_max, j1, j2, correction, mode, weights, discard_border);
        return io::report_to_json(analyze(pyr, opts)).dump();
      },
      py::arg("data"), py::arg("nvm") = 3, py::arg("p") = default_p_list(), py::arg("q") = py::none(),
      py::arg("m") = 3, py::arg("j1") = 0, py::arg("j2") = 0, py::arg("correction") = true,
      py::arg("mode") = "full", py::arg("weights") = "nj", py::arg("discard_border") = false,
      "Analysis report of a 1D or 2D signal as a JSON string.");

  m.def(
      "analyze_pyramid",
      [](const std::string& pyramid_json, const std::vector<double>& p, const std::optional<std::vector<double>>& q,
         int m_max, int j1, int j2, bool correction, const std::string& mode, const std::string& weights) {
        const auto pyr = io::pyramid_from_json(nlohmann::json::parse(pyramid_json));
        const auto opts = make_options(p, q, m_max, j1, j2, correction, mode, weights, false);
        return io::report_to_json(analyze(pyr, opts)).dump();
      },
      py::arg("pyramid_json"), py::arg("p") = default_p_list(), py::arg("q") = py::none(), py::arg("m") = 3,
      py::arg("j1") = 0, py::arg("j2") = 0, py::arg("correction") = true, py::arg("mode") = "full",
      py::arg("weights") = "nj");

  m.def(
      "synthesize_process",
      [](const std::string& kind, std::size_t length, double hurst, double lam, double alpha, std::uint64_t seed,
         std::uint64_t realization, double frac_order) {
        ProcessSpec s;
        s.kind = process_kind_from_string(kind);
        s.length = length;
        s.hurst = hurst;
        s.lambda = lam;
        s.alpha = alpha;
        s.seed = seed;
        s.frac_order = frac_order;
        return to_array(synthesize(s, realization).values);
      },
      py::arg("kind"), py::arg("length") = 1 << 15, py::arg("hurst") = 0.7, py::arg("lam") = 0.0,
      py::arg("alpha") = 1.5, py::arg("seed") = 0, py::arg("realization") = 0, py::arg("frac_order") = 0.0,
      "Sample path of fbm, mrw or levy.");

  m.def(
      "synthesize_cascade",
      [](const std::string& spec_json, std::uint64_t realization) {
        const auto spec = experiment_from_json(nlohmann::json::parse(spec_json));
        if (spec.source != ExperimentSpec::Source::cascade) throw ParameterError("spec has no cascade");
        CascadeSpec cs = spec.cascade;
        cs.seed = spec.seed;
        return io::pyramid_to_json(synthesize(cs, realization)).dump();
      },
      py::arg("spec_json"), py::arg("realization") = 0, "Cascade pyramid (JSON string) from an experiment spec.");

  m.def(
      "run_benchmark",
      [](const std::string& spec_json) {
        MonteCarloResult res;
        {
          py::gil_scoped_release release;
          res = run_monte_carlo(experiment_from_json(nlohmann::json::parse(spec_json)));
        }
        return py::make_tuple(summary_json(res).dump(), perf_table_csv(res.table));
      },
      py::arg("spec_json"), "Monte Carlo run; returns (summary JSON, performance table CSV).");

  m.def("gamma_correction", &gamma_correction, py::arg("j"), py::arg("eta"));
  m.def("dbwc_eta", &dbwc_eta, py::arg("weights"), py::arg("dim"), py::arg("q"));
  m.def("oracle_dbwc_sf", &oracle_dbwc_sf, py::arg("weights"), py::arg("alpha"), py::arg("p"), py::arg("q"),
        py::arg("j"), py::arg("depth"));
  m.def(
      "legendre_at",
      [](const std::vector<double>& q, const std::vector<double>& zeta, int dim, double h) {
        return legendre_at(q, zeta, dim, h);
      },
      py::arg("q"), py::arg("zeta"), py::arg("dim"), py::arg("h"));
  m.def(
      "resample_rr",
      [](const std::vector<double>& rr, double fs) {
        RRRecord rec;
        double t = 0.0;
        for (double v : rr) {
          if (!(v > 0.0)) throw IngestError("RR interval must be positive");
          rec.beat_times.push_back(t += v);
          rec.rr.push_back(v);
        }
        return to_array(resample_rr(rec, fs));
      },
      py::arg("rr"), py::arg("fs") = 4.0, "Natural-spline resampling of RR intervals at fs Hz.");
}

#include "pleader/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <thread>

#include "pleader/errors.hpp"
#include "pleader/io.hpp"

namespace pleader {

using nlohmann::json;

namespace {

constexpr double kLog2e = std::numbers::log2e;
constexpr double kLn2 = std::numbers::ln2;

// Stream index of the pilot realization used to tune the fractional order.
constexpr std::uint64_t kPilotRealization = 0xfffffffeULL;

std::vector<double> numbers_from(const json& a) {
  std::vector<double> v;
  for (const auto& x : a) v.push_back(io::to_number(x));
  return v;
}

json numbers_to(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(io::number(x));
  return a;
}

MultiplierLaw law_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "lognormal") {
    if (j.contains("c1")) return MultiplierLaw::lognormal_from_log_cumulants(j.at("c1"), j.at("c2"));
    return MultiplierLaw::lognormal(j.at("mu"), j.at("sigma2"));
  }
  if (kind == "two_point") return MultiplierLaw::two_point(j.at("w0"), j.at("w1"));
  if (kind == "deterministic") return MultiplierLaw::deterministic(j.at("w"));
  throw ParameterError("unknown multiplier law '" + kind + "'");
}

json law_to_json(const MultiplierLaw& law) {
  const auto& p = law.parameters();
  switch (law.kind()) {
    case MultiplierLaw::Kind::deterministic: return {{"kind", "deterministic"}, {"w", p[0]}};
    case MultiplierLaw::Kind::lognormal: return {{"kind", "lognormal"}, {"mu", p[0]}, {"sigma2", p[1]}};
    case MultiplierLaw::Kind::two_point: return {{"kind", "two_point"}, {"w0", p[0]}, {"w1", p[1]}};
  }
  return {};
}

// Sample cumulants kappa_1..3 of ln W for each law (population values).
std::vector<double> log_multiplier_cumulants(const MultiplierLaw& law) {
  const auto& p = law.parameters();
  switch (law.kind()) {
    case MultiplierLaw::Kind::deterministic: return {std::log(p[0]), 0.0, 0.0};
    case MultiplierLaw::Kind::lognormal: return {p[0], p[1], 0.0};
    case MultiplierLaw::Kind::two_point: {
      const double a = std::log(p[0]), b = std::log(p[1]);
      return {0.5 * (a + b), 0.25 * (a - b) * (a - b), 0.0};
    }
  }
  return {0.0, 0.0, 0.0};
}

std::vector<double> uniform_log_cumulants(const std::vector<double>& w) {
  double mean = 0.0;
  for (double x : w) mean += std::log(x);
  mean /= static_cast<double>(w.size());
  double m2 = 0.0, m3 = 0.0;
  for (double x : w) {
    const double d = std::log(x) - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  return {mean, m2 / static_cast<double>(w.size()), m3 / static_cast<double>(w.size())};
}

double finite_or_nan(double v) { return std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN(); }

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  const double a = v[n / 2 - 1], b = v[n / 2];
  if (std::isinf(a) || std::isinf(b)) return b;
  return 0.5 * (a + b);
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

void ExperimentSpec::validate() const {
  if (n_mc < 2) throw ParameterError("n_mc must be at least 2");
  if (p_list.empty()) throw ParameterError("p list must not be empty");
  for (double p : p_list)
    if (!(p > 0.0)) throw ParameterError("p must be positive");
  if (m_max < 1 || m_max > 3) throw ParameterError("m_max must be in 1..3");
  if (n_vanishing_moments < 1) throw ParameterError("n_vanishing_moments must be at least 1");
  if (truth && truth->size() < static_cast<std::size_t>(m_max))
    throw ParameterError("truth must list c1..c_m_max");
  if (!(target_p0 > 0.0)) throw ParameterError("target_p0 must be positive");
  if (source == Source::process) {
    process.validate();
  } else {
    cascade.validate();
    if (std::isfinite(target_p0)) throw ParameterError("target_p0 applies to processes only");
  }
}

ExperimentSpec experiment_from_json(const json& doc) {
  try {
    ExperimentSpec s = doc.contains("preset") ? preset(doc.at("preset").get<std::string>()) : ExperimentSpec{};
    if (doc.contains("name")) s.name = doc.at("name").get<std::string>();
    if (doc.contains("process")) {
      const json& p = doc.at("process");
      s.source = ExperimentSpec::Source::process;
      if (p.contains("kind")) s.process.kind = process_kind_from_string(p.at("kind").get<std::string>());
      if (p.contains("hurst")) s.process.hurst = p.at("hurst");
      if (p.contains("lambda")) s.process.lambda = p.at("lambda");
      if (p.contains("alpha")) s.process.alpha = p.at("alpha");
      if (p.contains("length")) s.process.length = p.at("length");
      if (p.contains("frac_order")) s.process.frac_order = p.at("frac_order");
      if (p.contains("integral_scale")) s.process.integral_scale = p.at("integral_scale");
    }
    if (doc.contains("cascade")) {
      const json& c = doc.at("cascade");
      s.source = ExperimentSpec::Source::cascade;
      if (c.contains("kind")) s.cascade.kind = cascade_kind_from_string(c.at("kind").get<std::string>());
      if (c.contains("weights")) s.cascade.weights = c.at("weights").get<std::vector<double>>();
      if (c.contains("law")) s.cascade.law = law_from_json(c.at("law"));
      if (c.contains("depth")) s.cascade.depth = c.at("depth");
      if (c.contains("anisotropy")) s.cascade.anisotropy = c.at("anisotropy").get<std::vector<double>>();
    }
    if (doc.contains("n_mc")) s.n_mc = doc.at("n_mc");
    if (doc.contains("p")) s.p_list = numbers_from(doc.at("p"));
    if (doc.contains("q")) s.q_grid = numbers_from(doc.at("q"));
    if (doc.contains("m_max")) s.m_max = doc.at("m_max");
    if (doc.contains("n_vanishing_moments")) s.n_vanishing_moments = doc.at("n_vanishing_moments");
    if (doc.contains("seed")) s.seed = doc.at("seed");
    if (doc.contains("mode")) s.mode = leader_mode_from_string(doc.at("mode").get<std::string>());
    if (doc.contains("weights")) s.weights = weight_scheme_from_string(doc.at("weights").get<std::string>());
    if (doc.contains("j2")) s.j2 = doc.at("j2");
    if (doc.contains("discard_border")) s.discard_border = doc.at("discard_border");
    if (doc.contains("target_p0")) s.target_p0 = io::to_number(doc.at("target_p0"));
    if (doc.contains("truth")) s.truth = numbers_from(doc.at("truth"));
    if (doc.contains("threads")) s.threads = doc.at("threads");
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("invalid experiment: ") + e.what());
  }
}

json experiment_to_json(const ExperimentSpec& s) {
  json doc = {{"name", s.name},
              {"n_mc", s.n_mc},
              {"p", numbers_to(s.p_list)},
              {"q", numbers_to(s.q_grid)},
              {"m_max", s.m_max},
              {"n_vanishing_moments", s.n_vanishing_moments},
              {"seed", s.seed},
              {"mode", to_string(s.mode)},
              {"weights", to_string(s.weights)},
              {"j2", s.j2},
              {"discard_border", s.discard_border},
              {"target_p0", io::number(s.target_p0)}};
  if (s.truth) doc["truth"] = numbers_to(*s.truth);
  if (s.source == ExperimentSpec::Source::process) {
    doc["process"] = {{"kind", to_string(s.process.kind)},
                      {"hurst", s.process.hurst},
                      {"lambda", s.process.lambda},
                      {"alpha", s.process.alpha},
                      {"length", s.process.length},
                      {"frac_order", s.process.frac_order},
                      {"integral_scale", s.process.integral_scale}};
  } else {
    doc["cascade"] = {{"kind", to_string(s.cascade.kind)},
                      {"weights", s.cascade.weights},
                      {"law", law_to_json(s.cascade.law)},
                      {"depth", s.cascade.depth},
                      {"anisotropy", s.cascade.anisotropy}};
  }
  return doc;
}

ExperimentSpec preset(const std::string& name) {
  ExperimentSpec s;
  s.name = name;
  if (name == "fbm") {
    s.process.kind = ProcessKind::fbm;
    s.process.hurst = 0.7;
  } else if (name == "mrw") {
    s.process.kind = ProcessKind::mrw;
    s.process.hurst = 0.84;
    s.process.lambda = std::sqrt(0.08);
  } else if (name == "levy") {
    s.process.kind = ProcessKind::levy;
    s.process.alpha = 0.8;
  } else if (name == "dbwc2d") {
    s.source = ExperimentSpec::Source::cascade;
    s.cascade.kind = CascadeKind::dbwc2d;
    s.cascade.weights = {0.3, 0.5, 0.7, 0.9};
    s.cascade.anisotropy = {1.0, 2.0, 0.5};
    s.cascade.depth = 9;
    s.mode = LeaderMode::restricted;
    s.n_mc = 2;
  } else {
    throw ParameterError("unknown preset '" + name + "' (fbm, mrw, levy, dbwc2d)");
  }
  return s;
}

std::vector<double> experiment_truth(const ExperimentSpec& spec) {
  if (spec.truth) return *spec.truth;
  if (spec.source == ExperimentSpec::Source::process) {
    const auto t = analytic_log_cumulants(spec.process);
    return {t.c1, t.c2, t.c3};
  }
  const auto k = spec.cascade.random() ? log_multiplier_cumulants(spec.cascade.law)
                                       : uniform_log_cumulants(spec.cascade.weights);
  return {-k[0] / kLn2, -k[1] / kLn2, -k[2] / kLn2};
}

int default_thread_count() {
  if (const char* env = std::getenv("PLEADER_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

RealizationEstimate run_realization(const ExperimentSpec& spec, std::uint64_t index) {
  RealizationEstimate est;
  est.index = index;
  try {
    WaveletPyramid pyr;
    if (spec.source == ExperimentSpec::Source::process) {
      ProcessSpec ps = spec.process;
      ps.seed = spec.seed;
      pyr = dwt(synthesize(ps, index), spec.n_vanishing_moments);
    } else {
      CascadeSpec cs = spec.cascade;
      cs.seed = spec.seed;
      pyr = synthesize(cs, index);
    }
    const std::size_t border =
        spec.discard_border ? 2 * static_cast<std::size_t>(pyr.n_vanishing_moments) : 0;
    const std::size_t lead = border > 0 && spec.mode == LeaderMode::full ? 1 : 0;
    const ScalingRange eta_range = default_eta_range(pyr.num_octaves());
    est.p0 = estimate_p0(estimate_eta(pyr, default_p0_grid(), eta_range, spec.weights, border)).value;
    for (double p : spec.p_list) {
      PLeaderField field = compute_pleaders(pyr, p, spec.mode);
      if (border > 0) field = field.trimmed(border, lead);
      double eta = std::numeric_limits<double>::quiet_NaN();
      if (!std::isinf(p)) {
        const double pp[] = {p};
        eta = estimate_eta(pyr, pp, eta_range, spec.weights, border)[0].eta;
      }
      Cumulants raw = cumulants(field, spec.m_max);
      est.corrected.push_back(correct_cumulants(raw, eta, p));
      est.uncorrected.push_back(std::move(raw));
      est.eta.push_back(eta);
      if (!spec.q_grid.empty()) {
        const StructureFunctions sf = structure_function(field, spec.q_grid);
        const StructureFunctions sfc = correct_structure(sf, eta, p);
        std::vector<std::vector<double>> u, c;
        for (std::size_t qi = 0; qi < spec.q_grid.size(); ++qi) {
          u.push_back(sf.log2_row(qi));
          c.push_back(sfc.log2_row(qi));
        }
        est.log2_sf_uncorrected.push_back(std::move(u));
        est.log2_sf_corrected.push_back(std::move(c));
      }
    }
    est.ok = true;
  } catch (const std::exception& e) {
    est.error = e.what();
    est.eta.clear();
    est.corrected.clear();
    est.uncorrected.clear();
  }
  return est;
}

PerfRow summarize_estimates(const std::vector<double>& estimates, double target) {
  PerfRow row;
  row.n = estimates.size();
  if (estimates.empty()) {
    row.mean = row.bias = row.std = row.rmse = std::numeric_limits<double>::quiet_NaN();
    return row;
  }
  double mean = 0.0;
  for (double v : estimates) mean += v;
  mean /= static_cast<double>(estimates.size());
  double var = 0.0;
  for (double v : estimates) var += (v - mean) * (v - mean);
  row.mean = mean;
  row.bias = mean - target;
  row.std = std::sqrt(var / static_cast<double>(estimates.size()));
  row.rmse = std::sqrt(row.bias * row.bias + row.std * row.std);
  return row;
}

SeRatio se_ratio(const std::vector<std::vector<double>>& corrected,
                 const std::vector<std::vector<double>>& uncorrected, double truth_slope,
                 int j_first, int j_align) {
  if (corrected.size() != uncorrected.size() || corrected.empty())
    throw ParameterError("se_ratio needs the same non-zero number of curves");
  if (j_first < 1 || j_align <= j_first) throw ParameterError("se_ratio needs j_first < j_align");
  auto mean_se = [&](const std::vector<std::vector<double>>& curves) {
    double total = 0.0;
    for (const auto& c : curves) {
      if (c.size() < static_cast<std::size_t>(j_align)) throw ParameterError("curve shorter than j_align");
      const double ref = c[static_cast<std::size_t>(j_align - 1)];
      for (int j = j_first; j <= j_align; ++j) {
        const double dev = c[static_cast<std::size_t>(j - 1)] - ref - truth_slope * (j - j_align);
        total += dev * dev;
      }
    }
    return total / static_cast<double>(curves.size());
  };
  const double se_u = mean_se(uncorrected);
  const double se_c = mean_se(corrected);
  SeRatio r;
  if (se_u == se_c) return r;
  if (se_c == 0.0) return {kSeRatioCap, true};
  if (se_u == 0.0) return {-kSeRatioCap, false};
  r.value = std::log10(se_u / se_c);
  if (r.value >= kSeRatioCap) return {kSeRatioCap, true};
  r.value = std::max(r.value, -kSeRatioCap);
  return r;
}

RormseOlc rormse_and_olc(const std::vector<double>& rmse_uncorrected,
                         const std::vector<double>& rmse_corrected, int j1_first) {
  if (rmse_uncorrected.empty() || rmse_corrected.empty())
    throw ParameterError("rmse curves must not be empty");
  auto argmin = [](const std::vector<double>& v) {
    std::size_t best = v.size();
    for (std::size_t i = 0; i < v.size(); ++i)
      if (std::isfinite(v[i]) && (best == v.size() || v[i] < v[best])) best = i;
    if (best == v.size()) throw ParameterError("rmse curve has no finite value");
    return best;
  };
  const std::size_t iu = argmin(rmse_uncorrected);
  const std::size_t ic = argmin(rmse_corrected);
  RormseOlc r;
  r.rormse = rmse_uncorrected[iu] / rmse_corrected[ic];
  r.olc_uncorrected = j1_first + static_cast<int>(iu);
  r.olc_corrected = j1_first + static_cast<int>(ic);
  return r;
}

MonteCarloResult run_monte_carlo(const ExperimentSpec& input) {
  input.validate();
  MonteCarloResult res;
  res.spec = input;
  ExperimentSpec& spec = res.spec;

  if (spec.source == ExperimentSpec::Source::process && std::isfinite(spec.target_p0)) {
    ProcessSpec base = spec.process;
    base.seed = spec.seed;
    const WaveletPyramid pilot = dwt(synthesize(base, kPilotRealization), spec.n_vanishing_moments);
    const std::size_t border =
        spec.discard_border ? 2 * static_cast<std::size_t>(spec.n_vanishing_moments) : 0;
    const auto eta = estimate_eta(pilot, default_p0_grid(), default_eta_range(pilot.num_octaves()),
                                  spec.weights, border);
    spec.process.frac_order += fractional_order_for_p0(eta, spec.target_p0);
  }
  if (spec.source == ExperimentSpec::Source::process) res.frac_order = spec.process.frac_order;
  res.truth = experiment_truth(spec);

  const auto n = static_cast<std::size_t>(spec.n_mc);
  res.realizations.resize(n);
  const int threads = std::clamp(spec.threads > 0 ? spec.threads : default_thread_count(), 1,
                                 static_cast<int>(n));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) res.realizations[i] = run_realization(spec, i);
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<const RealizationEstimate*> ok;
  for (const auto& r : res.realizations) {
    if (r.ok)
      ok.push_back(&r);
    else
      ++res.failed;
  }
  if (static_cast<double>(res.failed) > kMaxFailedFraction * static_cast<double>(n) || ok.size() < 2) {
    std::string first;
    for (const auto& r : res.realizations)
      if (!r.ok) {
        first = r.error;
        break;
      }
    throw MonteCarloError(std::to_string(res.failed) + " of " + std::to_string(n) +
                          " realizations failed; first: " + first);
  }

  res.nj = ok.front()->uncorrected.front().nj;
  res.num_octaves = static_cast<int>(res.nj.size());
  const ScalingRange def = default_scaling_range(res.nj);
  res.j2 = spec.j2 > 0 ? std::min(spec.j2, res.num_octaves) : def.j2;
  const int j2 = res.j2;
  if (j2 < 2) throw RegressionError("fewer than two octaves available");
  const int default_j1 = std::min(def.j1, j2 - 1);

  std::vector<double> p0s;
  for (const auto* r : ok) p0s.push_back(r->p0);
  const double p0 = std::isfinite(spec.target_p0) ? spec.target_p0 : median(p0s);

  for (std::size_t pi = 0; pi < spec.p_list.size(); ++pi) {
    const double p = spec.p_list[pi];
    std::vector<double> rmse_u, rmse_c;
    for (int m = 1; m <= spec.m_max; ++m) {
      for (bool corr : {false, true}) {
        for (int j1 = 1; j1 < j2; ++j1) {
          std::vector<double> est;
          for (const auto* r : ok) {
            const Cumulants& c = corr ? r->corrected[pi] : r->uncorrected[pi];
            const auto& row = c.values[static_cast<std::size_t>(m - 1)];
            bool finite = true;
            for (int j = j1; j <= j2; ++j) finite = finite && std::isfinite(row[static_cast<std::size_t>(j - 1)]);
            if (!finite) continue;
            est.push_back(regress(row, c.nj, j1, j2, spec.weights).slope * kLog2e);
          }
          PerfRow row = summarize_estimates(est, res.truth[static_cast<std::size_t>(m - 1)]);
          row.m = m;
          row.corrected = corr;
          row.p = p;
          row.p0 = p0;
          row.j1 = j1;
          row.j2 = j2;
          if (m == 1) (corr ? rmse_c : rmse_u).push_back(row.rmse);
          res.table.rows.push_back(row);
        }
      }
    }

    PSummary s;
    s.p = p;
    s.p0 = p0;
    std::vector<std::vector<double>> cu, cc;
    for (const auto* r : ok) {
      cu.push_back(r->uncorrected[pi].values[0]);
      cc.push_back(r->corrected[pi].values[0]);
    }
    const SeRatio se = se_ratio(cc, cu, res.truth[0] * kLn2, 1, j2);
    s.se_ratio = se.value;
    s.se_exact = se.exact;
    const RormseOlc ro = rormse_and_olc(rmse_u, rmse_c, 1);
    s.rormse = ro.rormse;
    s.olc_uncorrected = ro.olc_uncorrected;
    s.olc_corrected = ro.olc_corrected;
    s.olc_scales_uncorrected = j2 - ro.olc_uncorrected + 1;
    s.olc_scales_corrected = j2 - ro.olc_corrected + 1;
    if (spec.m_max >= 2) {
      std::vector<double> c2;
      for (const auto* r : ok) {
        s.c2_identical = s.c2_identical && same_bits(r->corrected[pi].values[1], r->uncorrected[pi].values[1]);
        const auto& row = r->corrected[pi].values[1];
        c2.push_back(finite_or_nan(regress(row, r->corrected[pi].nj, default_j1, j2, spec.weights).slope * kLog2e));
      }
      const PerfRow c2row = summarize_estimates(c2, 0.0);
      s.c2_mean = c2row.mean;
      s.c2_std = c2row.std;
    }
    res.table.summaries.push_back(s);
  }
  return res;
}

std::string figure_csv(const std::vector<FigurePoint>& points) {
  std::ostringstream os;
  os << "j,value,p,series\n";
  for (const auto& pt : points)
    os << pt.j << ',' << format_real(pt.value) << ',' << format_real(pt.p) << ',' << pt.series << '\n';
  return os.str();
}

std::vector<FigurePoint> figure_data(const MonteCarloResult& result, const std::string& kind) {
  std::vector<FigurePoint> pts;
  std::vector<const RealizationEstimate*> ok;
  for (const auto& r : result.realizations)
    if (r.ok) ok.push_back(&r);
  if (ok.empty()) return pts;
  const auto& spec = result.spec;
  const int J = result.num_octaves;
  const int j2 = result.j2;

  if (kind == "logscale") {
    for (std::size_t pi = 0; pi < spec.p_list.size(); ++pi) {
      const double p = spec.p_list[pi];
      for (bool corr : {false, true}) {
        for (int j = 1; j <= J; ++j) {
          double mean = 0.0;
          for (const auto* r : ok) {
            const auto& row = (corr ? r->corrected[pi] : r->uncorrected[pi]).values[0];
            mean += row[static_cast<std::size_t>(j - 1)] - row[static_cast<std::size_t>(j2 - 1)];
          }
          pts.push_back({j, mean / static_cast<double>(ok.size()), p, corr ? "corrected" : "uncorrected"});
        }
      }
      for (int j = 1; j <= J; ++j) pts.push_back({j, result.truth[0] * kLn2 * (j - j2), p, "truth"});
    }
  } else if (kind == "rmse") {
    for (const char* stat : {"bias", "std", "rmse"})
      for (const auto& row : result.table.rows) {
        if (row.m != 1) continue;
        const double v = std::string(stat) == "bias" ? row.bias : std::string(stat) == "std" ? row.std : row.rmse;
        pts.push_back({row.j1, v, row.p, std::string(stat) + (row.corrected ? "_corrected" : "_uncorrected")});
      }
  } else if (kind == "structure") {
    if (spec.q_grid.empty()) return pts;
    for (std::size_t pi = 0; pi < spec.p_list.size(); ++pi)
      for (std::size_t qi = 0; qi < spec.q_grid.size(); ++qi)
        for (bool corr : {false, true})
          for (int j = 1; j <= J; ++j) {
            double mean = 0.0;
            for (const auto* r : ok)
              mean += (corr ? r->log2_sf_corrected : r->log2_sf_uncorrected)[pi][qi][static_cast<std::size_t>(j - 1)];
            pts.push_back({j, mean / static_cast<double>(ok.size()), spec.p_list[pi],
                           "q=" + format_real(spec.q_grid[qi]) + (corr ? "_corrected" : "_uncorrected")});
          }
  } else {
    throw ParameterError("unknown figure kind '" + kind + "' (logscale, rmse, structure)");
  }
  return pts;
}

std::string perf_table_csv(const PerfTable& table) {
  std::ostringstream os;
  os << "estimator,corrected,p,p0,j1,j2,n,mean,bias,std,rmse\n";
  for (const auto& r : table.rows)
    os << 'c' << r.m << ',' << (r.corrected ? 1 : 0) << ',' << format_real(r.p) << ','
       << format_real(r.p0) << ',' << r.j1 << ',' << r.j2 << ',' << r.n << ',' << format_real(r.mean)
       << ',' << format_real(r.bias) << ',' << format_real(r.std) << ',' << format_real(r.rmse) << '\n';
  return os.str();
}

json summary_json(const MonteCarloResult& result) {
  json sums = json::array();
  for (const auto& s : result.table.summaries)
    sums.push_back({{"p", io::number(s.p)},
                    {"p0", io::number(s.p0)},
                    {"se_ratio_log10", io::number(s.se_ratio)},
                    {"se_ratio_exact", s.se_exact},
                    {"rormse", io::number(s.rormse)},
                    {"log10_rormse", io::number(std::log10(s.rormse))},
                    {"olc_j1", {{"uncorrected", s.olc_uncorrected}, {"corrected", s.olc_corrected}}},
                    {"olc_scales", {{"uncorrected", s.olc_scales_uncorrected}, {"corrected", s.olc_scales_corrected}}},
                    {"c2_mean", io::number(s.c2_mean)},
                    {"c2_std", io::number(s.c2_std)},
                    {"c2_identical", s.c2_identical}});
  json failures = json::array();
  for (const auto& r : result.realizations)
    if (!r.ok) failures.push_back({{"index", r.index}, {"error", r.error}});
  return {{"format", "pleader-bench"},
          {"version", io::kFormatVersion},
          {"index_convention", io::kIndexConvention},
          {"experiment", experiment_to_json(result.spec)},
          {"truth", numbers_to(result.truth)},
          {"frac_order", result.frac_order},
          {"num_octaves", result.num_octaves},
          {"j2", result.j2},
          {"nj", result.nj},
          {"realizations", result.realizations.size()},
          {"failed", result.failed},
          {"failures", failures},
          {"summaries", sums}};
}

void write_outputs(const MonteCarloResult& result, const std::string& outdir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec) throw ParameterError("cannot create " + outdir + ": " + ec.message());
  const fs::path dir(outdir);
  io::write_file((dir / "perf_table.csv").string(), perf_table_csv(result.table));
  io::write_file((dir / "summary.json").string(), summary_json(result).dump(2) + "\n");
  for (const char* kind : {"logscale", "rmse", "structure"})
    io::write_file((dir / (std::string("figure_") + kind + ".csv")).string(),
                   figure_csv(figure_data(result, kind)));
}

}  // namespace pleader

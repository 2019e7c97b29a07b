#include "pleader/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pleader/errors.hpp"

namespace pleader {

namespace {

constexpr double kLog2e = std::numbers::log2e;

Regression nan_regression(int j1, int j2) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {nan, nan, nan, j1, j2};
}

// Regression that reports NaN for rows with non-finite values instead of failing.
Regression row_regression(std::span<const double> row, std::span<const std::size_t> nj,
                          ScalingRange range, WeightScheme scheme) {
  for (int j = range.j1; j <= range.j2; ++j)
    if (!std::isfinite(row[static_cast<std::size_t>(j - 1)])) return nan_regression(range.j1, range.j2);
  return regress(row, nj, range.j1, range.j2, scheme);
}

Estimates estimate(const ScalingStats& stats, ScalingRange range, WeightScheme scheme, int dim) {
  Estimates e;
  std::vector<double> zeta;
  bool all_finite = true;
  for (std::size_t qi = 0; qi < stats.sf.q_grid.size(); ++qi) {
    const auto row = stats.sf.log2_row(qi);
    e.zeta.push_back(row_regression(row, stats.sf.nj, range, scheme));
    zeta.push_back(e.zeta.back().slope);
    all_finite = all_finite && std::isfinite(zeta.back());
  }
  e.log_cumulants = log_cumulant_regressions(stats.cum, range, scheme);
  if (all_finite && stats.sf.q_grid.size() >= 3) e.legendre = legendre(stats.sf.q_grid, zeta, dim);
  return e;
}

std::string format_p(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

}  // namespace

Cumulants coefficient_log_cumulant_table(const WaveletPyramid& pyramid, int m_max,
                                         std::size_t trailing_border) {
  Cumulants cum;
  cum.m_max = m_max;
  cum.values.assign(static_cast<std::size_t>(m_max), std::vector<double>(pyramid.octaves.size()));
  for (int j = 1; j <= pyramid.num_octaves(); ++j) {
    const Octave& oc = pyramid.octave(j);
    std::vector<double> mags;
    const std::size_t keep_cols = oc.cols > trailing_border ? oc.cols - trailing_border : oc.cols;
    const std::size_t keep_rows =
        pyramid.dim == 2 && oc.rows > trailing_border ? oc.rows - trailing_border : oc.rows;
    for (const auto& band : oc.subbands)
      for (std::size_t r = 0; r < keep_rows; ++r)
        for (std::size_t c = 0; c < keep_cols; ++c) {
          const double a = std::abs(band[r * oc.cols + c]);
          if (a >= std::numeric_limits<double>::min()) mags.push_back(a);
        }
    cum.nj.push_back(mags.size());
    cum.dropped.push_back(oc.subbands.size() * keep_rows * keep_cols - mags.size());
    const auto c = log_cumulants(mags, m_max);
    for (int m = 0; m < m_max; ++m)
      cum.values[static_cast<std::size_t>(m)][static_cast<std::size_t>(j - 1)] =
          c[static_cast<std::size_t>(m)];
  }
  return cum;
}

std::vector<Regression> log_cumulant_regressions(const Cumulants& cum, ScalingRange range,
                                                 WeightScheme scheme) {
  std::vector<Regression> out;
  for (int m = 0; m < cum.m_max; ++m) {
    Regression r = row_regression(cum.values[static_cast<std::size_t>(m)], cum.nj, range, scheme);
    r.slope *= kLog2e;
    r.intercept *= kLog2e;
    r.stderr_slope *= kLog2e;
    out.push_back(r);
  }
  return out;
}

AnalysisReport analyze(const WaveletPyramid& pyramid, const AnalysisOptions& options) {
  pyramid.validate();
  if (options.p_list.empty()) throw ParameterError("p list must not be empty");
  if (options.m_max < 1 || options.m_max > 3) throw ParameterError("m must be in 1..3");
  for (double p : options.p_list)
    if (!(p > 0.0)) throw ParameterError("p must be positive");

  AnalysisReport rep;
  rep.options = options;
  rep.dim = pyramid.dim;
  rep.num_octaves = pyramid.num_octaves();
  rep.n_vanishing_moments = pyramid.n_vanishing_moments;

  const std::size_t border =
      options.discard_border ? 2 * static_cast<std::size_t>(pyramid.n_vanishing_moments) : 0;
  const std::size_t lead_border = options.discard_border && options.mode == LeaderMode::full ? 1 : 0;

  // Coefficient statistics.
  std::vector<double> q_pos;
  for (double q : options.q_grid)
    if (q >= 0.0) q_pos.push_back(q);
  rep.coefficient_sf = coefficient_structure_function(pyramid, q_pos, border);

  if (options.j1 > 0 || options.j2 > 0) {
    const ScalingRange def = default_scaling_range(rep.coefficient_sf.nj);
    rep.range = {options.j1 > 0 ? options.j1 : def.j1, options.j2 > 0 ? options.j2 : def.j2};
  } else {
    rep.range = default_scaling_range(rep.coefficient_sf.nj);
  }
  if (rep.range.j2 > rep.num_octaves || rep.range.j1 < 1 || rep.range.j2 <= rep.range.j1)
    throw RegressionError("scaling range [" + std::to_string(rep.range.j1) + ", " +
                          std::to_string(rep.range.j2) + "] invalid for " +
                          std::to_string(rep.num_octaves) + " octaves");
  const ScalingRange def_eta = default_eta_range(rep.num_octaves);
  rep.eta_range = {options.eta_j1 > 0 ? options.eta_j1 : def_eta.j1,
                   options.eta_j2 > 0 ? options.eta_j2 : def_eta.j2};

  for (std::size_t qi = 0; qi < q_pos.size(); ++qi)
    rep.coefficient_zeta.push_back(
        row_regression(rep.coefficient_sf.log2_row(qi), rep.coefficient_sf.nj, rep.range,
                       options.weights));
  rep.coefficient_cumulants = coefficient_log_cumulant_table(pyramid, options.m_max, border);
  rep.coefficient_log_cumulants =
      log_cumulant_regressions(rep.coefficient_cumulants, rep.range, options.weights);

  rep.eta = estimate_eta(pyramid, options.p0_grid, rep.eta_range, options.weights, border);
  rep.p0 = estimate_p0(rep.eta);
  if (rep.p0.below_grid)
    rep.warnings.push_back("eta(p) <= 0 already at p = " + format_p(options.p0_grid.front()) +
                           ": p0 lies below the p grid");

  for (double p : options.p_list) {
    PAnalysis pa;
    pa.p = p;
    PLeaderField field = compute_pleaders(pyramid, p, options.mode);
    if (border > 0 || lead_border > 0) field = field.trimmed(border, lead_border);
    pa.uncorrected = scaling_stats(field, options.q_grid, options.m_max);
    pa.uncorrected_estimates = estimate(pa.uncorrected, rep.range, options.weights, rep.dim);
    pa.exceeds_p0 = std::isfinite(p) && p >= rep.p0.value;
    if (pa.exceeds_p0)
      rep.warnings.push_back("p = " + format_p(p) + " is not below the estimated p0 = " +
                             format_p(rep.p0.value));
    if (options.correction) {
      if (!std::isinf(p)) {
        const double pp[] = {p};
        const EtaSample s = estimate_eta(pyramid, pp, rep.eta_range, options.weights, border)[0];
        pa.eta = s.eta;
        pa.eta_stderr = s.stderr_eta;
        for (int j = 1; j <= rep.num_octaves; ++j) pa.gamma.push_back(gamma_correction(j, pa.eta));
      }
      pa.corrected = correct(pa.uncorrected, pa.eta);
      pa.corrected_estimates = estimate(*pa.corrected, rep.range, options.weights, rep.dim);
    }
    rep.per_p.push_back(std::move(pa));
  }
  return rep;
}

}  // namespace pleader

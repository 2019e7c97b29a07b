#include "pleader/mfa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "pleader/errors.hpp"

namespace pleader {

const char* to_string(LeaderMode mode) { return mode == LeaderMode::full ? "full" : "restricted"; }
const char* to_string(WeightScheme scheme) { return scheme == WeightScheme::nj ? "nj" : "uniform"; }

LeaderMode leader_mode_from_string(const std::string& name) {
  if (name == "full" || name == "full3") return LeaderMode::full;
  if (name == "restricted") return LeaderMode::restricted;
  throw ParameterError("unknown leader mode '" + name + "'");
}

WeightScheme weight_scheme_from_string(const std::string& name) {
  if (name == "nj") return WeightScheme::nj;
  if (name == "uniform") return WeightScheme::uniform;
  throw ParameterError("unknown weight scheme '" + name + "'");
}

namespace {

std::vector<std::size_t> neighbours(std::size_t k, std::size_t n) {
  std::vector<std::size_t> out{(k + n - 1) % n, k, (k + 1) % n};
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> trim_axis(const std::vector<double>& values, std::size_t rows,
                              std::size_t cols, std::size_t trailing, std::size_t leading,
                              bool two_d, std::size_t& out_rows, std::size_t& out_cols) {
  const std::size_t drop = trailing + leading;
  out_cols = cols > drop ? cols - drop : cols;
  const std::size_t c0 = cols > drop ? leading : 0;
  out_rows = rows;
  std::size_t r0 = 0;
  if (two_d && rows > drop) {
    out_rows = rows - drop;
    r0 = leading;
  }
  std::vector<double> out;
  out.reserve(out_rows * out_cols);
  for (std::size_t r = r0; r < r0 + out_rows; ++r)
    for (std::size_t c = c0; c < c0 + out_cols; ++c) out.push_back(values[r * cols + c]);
  return out;
}

bool is_degenerate(double v) { return !(v >= std::numeric_limits<double>::min()); }

}  // namespace

PLeaderField PLeaderField::trimmed(std::size_t trailing, std::size_t leading) const {
  PLeaderField out = *this;
  for (std::size_t o = 0; o < octaves.size(); ++o)
    out.octaves[o] = trim_axis(octaves[o], rows[o], cols[o], trailing, leading, dim == 2,
                               out.rows[o], out.cols[o]);
  return out;
}

PLeaderField compute_pleaders(const WaveletPyramid& pyramid, double p, LeaderMode mode) {
  if (!(p > 0.0)) throw ParameterError("p must be positive, got " + std::to_string(p));
  if (pyramid.octaves.empty()) throw DepthError("pyramid has no octaves", 0);
  const bool sup = std::isinf(p);
  const int d = pyramid.dim;
  const double child_weight = std::exp2(-d);

  PLeaderField field;
  field.p = p;
  field.mode = mode;
  field.dim = d;

  std::vector<double> prev;
  std::size_t prev_cols = 0;
  std::vector<std::vector<double>> restricted;
  for (int j = 1; j <= pyramid.num_octaves(); ++j) {
    const Octave& oc = pyramid.octave(j);
    if (oc.count() == 0) throw DepthError("octave " + std::to_string(j) + " is empty", j - 1);
    std::vector<double> r(oc.count(), 0.0);
    for (const auto& band : oc.subbands)
      for (std::size_t k = 0; k < r.size(); ++k) {
        const double a = std::abs(band[k]);
        if (sup)
          r[k] = std::max(r[k], a);
        else
          r[k] += std::pow(a, p);
      }
    if (j > 1) {
      for (std::size_t row = 0; row < oc.rows; ++row)
        for (std::size_t col = 0; col < oc.cols; ++col) {
          double acc = 0.0;
          if (d == 1) {
            const double a = prev[2 * col], b = prev[2 * col + 1];
            acc = sup ? std::max(a, b) : a + b;
          } else {
            for (std::size_t er = 0; er < 2; ++er)
              for (std::size_t ec = 0; ec < 2; ++ec) {
                const double v = prev[(2 * row + er) * prev_cols + 2 * col + ec];
                acc = sup ? std::max(acc, v) : acc + v;
              }
          }
          double& dst = r[row * oc.cols + col];
          dst = sup ? std::max(dst, acc) : dst + child_weight * acc;
        }
    }
    prev = r;
    prev_cols = oc.cols;
    restricted.push_back(std::move(r));
    field.rows.push_back(oc.rows);
    field.cols.push_back(oc.cols);
  }

  for (std::size_t o = 0; o < restricted.size(); ++o) {
    const std::vector<double>& r = restricted[o];
    const std::size_t rows = field.rows[o], cols = field.cols[o];
    std::vector<double> out(r.size());
    for (std::size_t row = 0; row < rows; ++row)
      for (std::size_t col = 0; col < cols; ++col) {
        double acc = 0.0;
        if (mode == LeaderMode::restricted) {
          acc = r[row * cols + col];
        } else {
          const auto ncols = neighbours(col, cols);
          const auto nrows = d == 2 ? neighbours(row, rows) : std::vector<std::size_t>{0};
          for (std::size_t rr : nrows)
            for (std::size_t cc : ncols) {
              const double v = r[rr * cols + cc];
              acc = sup ? std::max(acc, v) : acc + v;
            }
        }
        out[row * cols + col] = sup ? acc : std::pow(acc, 1.0 / p);
      }
    field.octaves.push_back(std::move(out));
  }
  return field;
}

std::vector<double> StructureFunctions::log2_row(std::size_t qi) const {
  std::vector<double> out(values.at(qi).size());
  std::transform(values[qi].begin(), values[qi].end(), out.begin(),
                 [](double v) { return std::log2(v); });
  return out;
}

StructureFunctions structure_function(const PLeaderField& field, std::span<const double> q_grid) {
  StructureFunctions sf;
  sf.q_grid.assign(q_grid.begin(), q_grid.end());
  sf.values.assign(q_grid.size(), std::vector<double>(field.octaves.size()));
  for (int j = 1; j <= field.num_octaves(); ++j) {
    const auto& vals = field.at(j);
    sf.nj.push_back(vals.size());
    const std::size_t zeros = static_cast<std::size_t>(
        std::count_if(vals.begin(), vals.end(), [](double v) { return v == 0.0; }));
    for (std::size_t qi = 0; qi < q_grid.size(); ++qi) {
      const double q = q_grid[qi];
      if (zeros > 0 && q <= 0.0)
        throw DegenerateValueError(std::to_string(zeros) + " zero leaders at octave " +
                                       std::to_string(j) + " with q = " + std::to_string(q),
                                   zeros);
      double acc = 0.0;
      for (double v : vals) acc += std::pow(v, q);
      sf.values[qi][static_cast<std::size_t>(j - 1)] = acc / static_cast<double>(vals.size());
    }
  }
  return sf;
}

StructureFunctions coefficient_structure_function(const WaveletPyramid& pyramid,
                                                  std::span<const double> q_grid,
                                                  std::size_t trailing_border) {
  StructureFunctions sf;
  sf.q_grid.assign(q_grid.begin(), q_grid.end());
  for (double q : q_grid)
    if (q < 0.0) throw ParameterError("coefficient structure functions need q >= 0");
  sf.values.assign(q_grid.size(), std::vector<double>(pyramid.octaves.size()));
  for (int j = 1; j <= pyramid.num_octaves(); ++j) {
    const Octave& oc = pyramid.octave(j);
    std::vector<std::vector<double>> bands;
    std::size_t rows = oc.rows, cols = oc.cols;
    for (const auto& band : oc.subbands)
      bands.push_back(trim_axis(band, oc.rows, oc.cols, trailing_border, 0, pyramid.dim == 2,
                                rows, cols));
    const std::size_t n = rows * cols;
    sf.nj.push_back(n);
    for (std::size_t qi = 0; qi < q_grid.size(); ++qi) {
      double acc = 0.0;
      for (const auto& band : bands)
        for (double c : band) acc += std::pow(std::abs(c), q_grid[qi]);
      sf.values[qi][static_cast<std::size_t>(j - 1)] = acc / static_cast<double>(n);
    }
  }
  return sf;
}

std::vector<double> log_cumulants(std::span<const double> values, int m_max) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> out(static_cast<std::size_t>(m_max), nan);
  const double n = static_cast<double>(values.size());
  if (values.empty()) return out;
  double mean = 0.0;
  for (double v : values) mean += std::log(v);
  mean /= n;
  out[0] = mean;
  if (m_max < 2) return out;
  double m2 = 0.0, m3 = 0.0;
  for (double v : values) {
    const double dev = std::log(v) - mean;
    m2 += dev * dev;
    m3 += dev * dev * dev;
  }
  if (values.size() >= 2) out[1] = m2 / (n - 1.0);
  // k3 = n / ((n-1)(n-2)) * sum dev^3
  if (m_max >= 3 && values.size() >= 3) out[2] = n * m3 / ((n - 1.0) * (n - 2.0));
  return out;
}

Cumulants cumulants(const PLeaderField& field, int m_max) {
  if (m_max < 1 || m_max > 3) throw ParameterError("cumulant order must be 1..3");
  Cumulants cum;
  cum.m_max = m_max;
  cum.values.assign(static_cast<std::size_t>(m_max), std::vector<double>(field.octaves.size()));
  std::vector<double> kept;
  for (int j = 1; j <= field.num_octaves(); ++j) {
    const auto& vals = field.at(j);
    kept.clear();
    for (double v : vals)
      if (!is_degenerate(v)) kept.push_back(v);
    const std::size_t dropped = vals.size() - kept.size();
    if (static_cast<double>(dropped) > kMaxDroppedFraction * static_cast<double>(vals.size()))
      throw DegenerateValueError(std::to_string(dropped) + " of " + std::to_string(vals.size()) +
                                     " leaders are zero at octave " + std::to_string(j),
                                 dropped);
    cum.nj.push_back(kept.size());
    cum.dropped.push_back(dropped);
    const auto c = log_cumulants(kept, m_max);
    for (int m = 0; m < m_max; ++m)
      cum.values[static_cast<std::size_t>(m)][static_cast<std::size_t>(j - 1)] =
          c[static_cast<std::size_t>(m)];
  }
  return cum;
}

ScalingStats scaling_stats(const PLeaderField& field, std::span<const double> q_grid, int m_max) {
  ScalingStats s;
  s.p = field.p;
  s.sf = structure_function(field, q_grid);
  s.cum = cumulants(field, m_max);
  return s;
}

double gamma_correction(int octave, double eta) {
  if (octave < 1) throw ParameterError("gamma needs at least one finer-or-equal octave");
  if (std::abs(eta) < kEtaLimitThreshold) return static_cast<double>(octave);
  return -std::expm1(-octave * eta * std::numbers::ln2) / -std::expm1(-eta * std::numbers::ln2);
}

StructureFunctions correct_structure(const StructureFunctions& sf, double eta, double p) {
  StructureFunctions out = sf;
  if (std::isinf(p)) return out;
  for (std::size_t qi = 0; qi < sf.q_grid.size(); ++qi) {
    const double expo = -sf.q_grid[qi] / p;
    if (expo == 0.0) continue;
    for (std::size_t o = 0; o < out.values[qi].size(); ++o)
      out.values[qi][o] *= std::pow(gamma_correction(static_cast<int>(o) + 1, eta), expo);
  }
  return out;
}

Cumulants correct_cumulants(const Cumulants& cum, double eta, double p) {
  Cumulants out = cum;
  if (std::isinf(p)) return out;
  for (std::size_t o = 0; o < out.values[0].size(); ++o)
    out.values[0][o] -= std::log(gamma_correction(static_cast<int>(o) + 1, eta)) / p;
  return out;
}

ScalingStats correct(const ScalingStats& stats, double eta) {
  ScalingStats out;
  out.p = stats.p;
  out.sf = correct_structure(stats.sf, eta, stats.p);
  out.cum = correct_cumulants(stats.cum, eta, stats.p);
  out.corrected = true;
  out.eta_used = eta;
  return out;
}

Regression regress(std::span<const double> values, std::span<const std::size_t> nj, int j1,
                   int j2, WeightScheme scheme) {
  if (j2 <= j1)
    throw RegressionError("regression range [" + std::to_string(j1) + ", " + std::to_string(j2) +
                          "] needs at least two octaves");
  if (j1 < 1 || static_cast<std::size_t>(j2) > values.size() ||
      (scheme == WeightScheme::nj && static_cast<std::size_t>(j2) > nj.size()))
    throw RegressionError("regression range [" + std::to_string(j1) + ", " + std::to_string(j2) +
                          "] outside the available " + std::to_string(values.size()) + " octaves");
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (int j = j1; j <= j2; ++j) {
    const std::size_t o = static_cast<std::size_t>(j - 1);
    if (!std::isfinite(values[o]))
      throw RegressionError("non-finite value at octave " + std::to_string(j));
    const double w = scheme == WeightScheme::nj ? static_cast<double>(nj[o]) : 1.0;
    sw += w;
    sx += w * j;
    sy += w * values[o];
  }
  if (!(sw > 0.0)) throw RegressionError("all regression weights are zero");
  const double xm = sx / sw, ym = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (int j = j1; j <= j2; ++j) {
    const std::size_t o = static_cast<std::size_t>(j - 1);
    const double w = scheme == WeightScheme::nj ? static_cast<double>(nj[o]) : 1.0;
    sxx += w * (j - xm) * (j - xm);
    sxy += w * (j - xm) * (values[o] - ym);
  }
  Regression r;
  r.j1 = j1;
  r.j2 = j2;
  r.slope = sxy / sxx;
  r.intercept = ym - r.slope * xm;
  const int npts = j2 - j1 + 1;
  if (npts > 2) {
    double ssr = 0.0;
    for (int j = j1; j <= j2; ++j) {
      const std::size_t o = static_cast<std::size_t>(j - 1);
      const double w = scheme == WeightScheme::nj ? static_cast<double>(nj[o]) : 1.0;
      const double res = values[o] - r.intercept - r.slope * j;
      ssr += w * res * res;
    }
    r.stderr_slope = std::sqrt(ssr / (npts - 2) / sxx);
  } else {
    r.stderr_slope = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

ScalingRange default_scaling_range(std::span<const std::size_t> nj) {
  int j2 = 0;
  for (std::size_t o = 0; o < nj.size(); ++o)
    if (nj[o] >= 8) j2 = static_cast<int>(o) + 1;
  if (j2 < 2) throw RegressionError("fewer than two octaves with at least 8 coefficients");
  int j1 = 3;
  if (j2 - j1 < 1) j1 = std::max(1, j2 - 2);
  return {j1, j2};
}

ScalingRange default_eta_range(int num_octaves) {
  if (num_octaves < 2) throw RegressionError("eta needs at least two octaves");
  ScalingRange r{3, num_octaves - 2};
  if (r.j2 - r.j1 < 1) r = {1, num_octaves};
  return r;
}

std::vector<EtaSample> estimate_eta(const WaveletPyramid& pyramid, std::span<const double> p_grid,
                                    ScalingRange range, WeightScheme scheme,
                                    std::size_t trailing_border) {
  const auto sf = coefficient_structure_function(pyramid, p_grid, trailing_border);
  std::vector<EtaSample> out;
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    const auto row = sf.log2_row(i);
    const Regression r = regress(row, sf.nj, range.j1, range.j2, scheme);
    out.push_back({p_grid[i], r.slope, r.stderr_slope});
  }
  return out;
}

namespace {

template <class F>
double bisect_root(F&& f, double lo, double hi) {
  // f(lo) > 0 >= f(hi)
  while (hi - lo > kP0Tolerance * 1e-3) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

P0Estimate estimate_p0(std::span<const EtaSample> samples) {
  if (samples.empty()) throw ParameterError("p0 needs at least one eta sample");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].p > samples[i - 1].p)) throw ParameterError("p grid must be increasing");
  if (!(samples.front().eta > 0.0)) return {samples.front().p, true};
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].eta > 0.0) continue;
    const EtaSample a = samples[i - 1], b = samples[i];
    auto interp = [&](double p) { return a.eta + (b.eta - a.eta) * (p - a.p) / (b.p - a.p); };
    if (b.eta == 0.0) return {b.p, false};
    return {bisect_root(interp, a.p, b.p), false};
  }
  return {kInf, false};
}

P0Estimate estimate_p0(const std::function<double(double)>& eta, std::span<const double> p_grid) {
  if (p_grid.empty()) throw ParameterError("p0 needs a non-empty grid");
  if (!(eta(p_grid.front()) > 0.0)) return {p_grid.front(), true};
  for (std::size_t i = 1; i < p_grid.size(); ++i) {
    const double v = eta(p_grid[i]);
    if (v > 0.0) continue;
    if (v == 0.0) return {p_grid[i], false};
    return {bisect_root(eta, p_grid[i - 1], p_grid[i]), false};
  }
  return {kInf, false};
}

std::vector<double> default_p0_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 80; ++i) g.push_back(0.25 * i);
  return g;
}

std::vector<double> default_q_grid() {
  std::vector<double> g;
  for (int i = -20; i <= 20; ++i) g.push_back(0.25 * i);
  return g;
}

std::vector<double> default_p_list() { return {0.25, 0.5, 1.0, 2.0, 5.0, kInf}; }

double legendre_at(std::span<const double> q_grid, std::span<const double> zeta, int dim, double h) {
  if (q_grid.size() != zeta.size() || q_grid.empty())
    throw ParameterError("Legendre transform needs matching non-empty q and zeta");
  double best = kInf;
  for (std::size_t i = 0; i < q_grid.size(); ++i)
    best = std::min(best, dim + q_grid[i] * h - zeta[i]);
  return best;
}

LegendreSpectrum legendre(std::span<const double> q_grid, std::span<const double> zeta, int dim,
                          std::size_t n_h) {
  const std::size_t n = q_grid.size();
  if (n != zeta.size() || n < 3) throw ParameterError("Legendre transform needs at least 3 q values");
  if (n_h < 2) throw ParameterError("Legendre h grid needs at least 2 points");
  for (std::size_t i = 1; i < n; ++i)
    if (!(q_grid[i] > q_grid[i - 1])) throw ParameterError("q grid must be increasing");

  // Three-point derivative (exact on quadratics), one-sided at the ends.
  auto deriv3 = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t at) {
    const double xa = q_grid[a], xb = q_grid[b], xc = q_grid[c], x = q_grid[at];
    return zeta[a] * ((x - xb) + (x - xc)) / ((xa - xb) * (xa - xc)) +
           zeta[b] * ((x - xa) + (x - xc)) / ((xb - xa) * (xb - xc)) +
           zeta[c] * ((x - xa) + (x - xb)) / ((xc - xa) * (xc - xb));
  };
  double hmin = kInf, hmax = -kInf;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i == 0 ? 0 : (i == n - 1 ? n - 3 : i - 1);
    const double dz = deriv3(a, a + 1, a + 2, i);
    hmin = std::min(hmin, dz);
    hmax = std::max(hmax, dz);
  }

  LegendreSpectrum spec;
  const double scale = std::max(1.0, *std::max_element(zeta.begin(), zeta.end()) -
                                         *std::min_element(zeta.begin(), zeta.end()));
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double left = (zeta[i] - zeta[i - 1]) / (q_grid[i] - q_grid[i - 1]);
    const double right = (zeta[i + 1] - zeta[i]) / (q_grid[i + 1] - q_grid[i]);
    if (right - left > 1e-9 * scale) spec.concave = false;
  }
  for (std::size_t k = 0; k < n_h; ++k) {
    const double h = hmin + (hmax - hmin) * static_cast<double>(k) / static_cast<double>(n_h - 1);
    const double L = legendre_at(q_grid, zeta, dim, h);
    if (L >= -1e-10 * scale) spec.points.push_back({h, L});
  }
  return spec;
}

}  // namespace pleader

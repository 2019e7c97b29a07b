#include "pleader/wavelet.hpp"

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Eigenvalues>

#include "pleader/errors.hpp"

namespace pleader {

Signal Signal::make_1d(std::vector<double> values, double sample_period) {
  if (!(sample_period > 0.0)) throw ParameterError("sample period must be positive");
  for (double v : values)
    if (!std::isfinite(v)) throw ParameterError("signal contains non-finite values");
  Signal s;
  s.cols = values.size();
  s.values = std::move(values);
  s.sample_period = sample_period;
  return s;
}

Signal Signal::make_2d(std::vector<double> values, std::size_t rows, std::size_t cols,
                       double sample_period) {
  if (values.size() != rows * cols) throw ParameterError("2D signal size does not match rows*cols");
  Signal s = make_1d(std::move(values), sample_period);
  s.rows = rows;
  s.cols = cols;
  s.dim = 2;
  return s;
}

void WaveletPyramid::validate() const {
  if (dim != 1 && dim != 2) throw ParameterError("pyramid dimension must be 1 or 2");
  const std::size_t nsub = static_cast<std::size_t>(subband_count());
  for (std::size_t o = 0; o < octaves.size(); ++o) {
    const Octave& oc = octaves[o];
    if (oc.subbands.size() != nsub)
      throw ParameterError("octave " + std::to_string(o + 1) + " has wrong subband count");
    if (dim == 1 && oc.rows != 1) throw ParameterError("1D octave must have a single row");
    for (const auto& band : oc.subbands) {
      if (band.size() != oc.count())
        throw ParameterError("octave " + std::to_string(o + 1) + " subband size mismatch");
      for (double v : band)
        if (!std::isfinite(v)) throw ParameterError("pyramid contains non-finite coefficients");
    }
    if (o > 0) {
      const Octave& finer = octaves[o - 1];
      const bool halves = finer.cols == 2 * oc.cols && (dim == 1 || finer.rows == 2 * oc.rows);
      if (!halves)
        throw ParameterError("octave " + std::to_string(o + 1) + " does not halve octave " +
                             std::to_string(o));
    }
  }
}

namespace {

using cplx = std::complex<double>;

cplx eval_poly(const std::vector<double>& coeffs, cplx x) {
  cplx acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

cplx eval_dpoly(const std::vector<double>& coeffs, cplx x) {
  cplx acc = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * x + static_cast<double>(k) * coeffs[k];
  return acc;
}

// Roots of sum_k coeffs[k] x^k via the companion matrix, polished by Newton.
std::vector<cplx> poly_roots(const std::vector<double>& coeffs) {
  const int deg = static_cast<int>(coeffs.size()) - 1;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs[i] / coeffs[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<cplx> roots;
  for (int i = 0; i < deg; ++i) {
    cplx r = solver.eigenvalues()[i];
    for (int it = 0; it < 8; ++it) {
      const cplx d = eval_dpoly(coeffs, r);
      if (std::abs(d) == 0.0) break;
      r -= eval_poly(coeffs, r) / d;
    }
    roots.push_back(r);
  }
  return roots;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void circular_step(std::span<const double> in, std::size_t stride, std::size_t count,
                   const FilterPair& f, double* low, double* high, std::size_t out_stride) {
  // in: `count` samples spaced by `stride`; outputs count/2 samples each.
  const std::size_t taps = f.low.size();
  for (std::size_t k = 0; k < count / 2; ++k) {
    double s = 0.0, d = 0.0;
    for (std::size_t n = 0; n < taps; ++n) {
      const double x = in[((2 * k + n) % count) * stride];
      s += f.low[n] * x;
      d += f.high[n] * x;
    }
    low[k * out_stride] = s;
    high[k * out_stride] = d;
  }
}

}  // namespace

FilterPair daubechies_filter(int n_vanishing_moments) {
  const int nvm = n_vanishing_moments;
  if (nvm < 1 || nvm > 10)
    throw ParameterError("number of vanishing moments must be in 1..10, got " + std::to_string(nvm));

  // H(z) = (1 + z)^N * prod (z - z_i) where the z_i are the roots inside the
  // unit circle of the factorization of the Daubechies polynomial.
  std::vector<cplx> poly{1.0};
  auto multiply = [&poly](cplx root) {
    std::vector<cplx> next(poly.size() + 1, 0.0);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k + 1] += poly[k];
      next[k] -= root * poly[k];
    }
    poly = std::move(next);
  };
  for (int i = 0; i < nvm; ++i) multiply(-1.0);

  if (nvm > 1) {
    std::vector<double> q(static_cast<std::size_t>(nvm));
    for (int k = 0; k < nvm; ++k) q[static_cast<std::size_t>(k)] = binomial(nvm - 1 + k, k);
    for (const cplx& y : poly_roots(q)) {
      // y = (2 - z - 1/z) / 4  <=>  z^2 - (2 - 4y) z + 1 = 0
      const cplx b = 2.0 - 4.0 * y;
      const cplx disc = std::sqrt(b * b - 4.0);
      cplx z = (b + disc) / 2.0;
      if (std::abs(z) > 1.0) z = (b - disc) / 2.0;
      multiply(z);
    }
  }

  FilterPair f;
  const std::size_t taps = poly.size();
  double sum = 0.0;
  for (const cplx& c : poly) sum += c.real();
  f.low.resize(taps);
  // Descending powers give the conventional (front-loaded) ordering.
  for (std::size_t n = 0; n < taps; ++n) f.low[n] = poly[taps - 1 - n].real() * std::sqrt(2.0) / sum;
  f.high.resize(taps);
  for (std::size_t n = 0; n < taps; ++n)
    f.high[n] = ((n % 2) ? -1.0 : 1.0) * f.low[taps - 1 - n];
  return f;
}

int max_feasible_octaves(std::size_t length, int n_vanishing_moments) {
  const std::size_t taps = 2 * static_cast<std::size_t>(n_vanishing_moments);
  int depth = 0;
  std::size_t m = length;
  while (m % 2 == 0 && m >= taps && m >= 2) {
    ++depth;
    m /= 2;
  }
  return depth;
}

double l1_factor(int octave, int dim) { return std::exp2(-0.5 * octave * dim); }

WaveletPyramid dwt(const Signal& signal, int n_vanishing_moments, int max_octaves) {
  const FilterPair f = daubechies_filter(n_vanishing_moments);
  const int feasible = signal.dim == 1
                           ? max_feasible_octaves(signal.cols, n_vanishing_moments)
                           : std::min(max_feasible_octaves(signal.rows, n_vanishing_moments),
                                      max_feasible_octaves(signal.cols, n_vanishing_moments));
  if (feasible < 1)
    throw DepthError("signal too short for a single octave with " +
                         std::to_string(2 * n_vanishing_moments) + "-tap filters",
                     feasible);
  const int depth = max_octaves <= 0 ? feasible : max_octaves;
  if (depth > feasible)
    throw DepthError("requested " + std::to_string(depth) + " octaves, at most " +
                         std::to_string(feasible) + " feasible",
                     feasible);
  for (double v : signal.values)
    if (!std::isfinite(v)) throw ParameterError("signal contains non-finite values");

  WaveletPyramid pyr;
  pyr.dim = signal.dim;
  pyr.n_vanishing_moments = n_vanishing_moments;

  std::vector<double> approx = signal.values;
  std::size_t rows = signal.dim == 1 ? 1 : signal.rows;
  std::size_t cols = signal.cols;

  for (int j = 1; j <= depth; ++j) {
    const double scale = l1_factor(j, signal.dim);
    Octave oc;
    if (signal.dim == 1) {
      std::vector<double> low(cols / 2), high(cols / 2);
      circular_step(approx, 1, cols, f, low.data(), high.data(), 1);
      for (double& v : high) v *= scale;
      oc.cols = cols / 2;
      oc.subbands.push_back(std::move(high));
      approx = std::move(low);
      cols /= 2;
    } else {
      const std::size_t hc = cols / 2, hr = rows / 2;
      std::vector<double> lo_c(rows * hc), hi_c(rows * hc);
      for (std::size_t r = 0; r < rows; ++r)
        circular_step(std::span<const double>(approx).subspan(r * cols, cols), 1, cols, f,
                      lo_c.data() + r * hc, hi_c.data() + r * hc, 1);
      std::vector<double> ll(hr * hc), lh(hr * hc), hl(hr * hc), hh(hr * hc);
      for (std::size_t c = 0; c < hc; ++c) {
        // lh: low along columns, high along rows; hl: high along columns, low along rows.
        circular_step(std::span<const double>(lo_c).subspan(c), hc, rows, f, ll.data() + c,
                      lh.data() + c, hc);
        circular_step(std::span<const double>(hi_c).subspan(c), hc, rows, f, hl.data() + c,
                      hh.data() + c, hc);
      }
      for (auto* band : {&lh, &hl, &hh})
        for (double& v : *band) v *= scale;
      oc.rows = hr;
      oc.cols = hc;
      oc.subbands = {std::move(lh), std::move(hl), std::move(hh)};
      approx = std::move(ll);
      rows = hr;
      cols = hc;
    }
    pyr.octaves.push_back(std::move(oc));
  }
  pyr.approximation = std::move(approx);
  return pyr;
}

}  // namespace pleader

#include "pleader/processes.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "pleader/errors.hpp"
#include "pleader/fft.hpp"

namespace pleader {

const char* to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::fbm: return "fbm";
    case ProcessKind::mrw: return "mrw";
    case ProcessKind::levy: return "levy";
  }
  return "unknown";
}

ProcessKind process_kind_from_string(const std::string& name) {
  if (name == "fbm") return ProcessKind::fbm;
  if (name == "mrw") return ProcessKind::mrw;
  if (name == "levy") return ProcessKind::levy;
  throw ParameterError("unknown process kind '" + name + "'");
}

void ProcessSpec::validate() const {
  if (length < (1u << 10) || (length & (length - 1)) != 0)
    throw ParameterError("process length must be a power of two >= 1024, got " +
                         std::to_string(length));
  if (kind != ProcessKind::levy && !(hurst > 0.0 && hurst < 1.0))
    throw ParameterError("Hurst parameter must lie in (0, 1)");
  if (kind == ProcessKind::mrw && !(lambda >= 0.0)) throw ParameterError("lambda must be >= 0");
  if (kind == ProcessKind::levy && !(alpha > 0.0 && alpha <= 2.0))
    throw ParameterError("stability index must lie in (0, 2]");
  if (!std::isfinite(frac_order)) throw ParameterError("fractional order must be finite");
  if (integral_scale < 0.0) throw ParameterError("integral scale must be >= 0");
}

std::vector<double> circulant_gaussian(const std::function<double(std::size_t)>& cov,
                                       std::size_t length, Rng& rng) {
  if (length == 0) return {};
  std::size_t m = 2 * length;
  std::vector<std::complex<double>> eig;
  for (int attempt = 0;; ++attempt) {
    eig.assign(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) eig[k] = cov(std::min(k, m - k));
    fft::forward(eig);
    double lo = 0.0, hi = 0.0;
    for (const auto& e : eig) {
      lo = std::min(lo, e.real());
      hi = std::max(hi, e.real());
    }
    if (lo >= -1e-8 * hi) break;
    if (attempt == 3)
      throw ParameterError("circulant embedding is not positive definite (min eigenvalue " +
                           std::to_string(lo) + ")");
    m *= 2;
  }
  std::vector<std::complex<double>> z(m);
  const double md = static_cast<double>(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double amp = std::sqrt(std::max(0.0, eig[k].real()) / md);
    const double re = rng.normal();
    const double im = rng.normal();
    z[k] = amp * std::complex<double>(re, im);
  }
  fft::forward(z);
  std::vector<double> out(length);
  for (std::size_t k = 0; k < length; ++k) out[k] = z[k].real();
  return out;
}

double fgn_covariance(double hurst, std::size_t lag) {
  const double k = static_cast<double>(lag);
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) + std::pow(std::abs(k - 1.0), h2));
}

std::vector<double> synth_fgn(double hurst, std::size_t length, Rng& rng) {
  return circulant_gaussian([hurst](std::size_t lag) { return fgn_covariance(hurst, lag); },
                            length, rng);
}

std::vector<double> increments(std::span<const double> path) {
  std::vector<double> out(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) out[i] = path[i] - (i ? path[i - 1] : 0.0);
  return out;
}

std::vector<double> cumulative_sum(std::span<const double> steps) {
  std::vector<double> out(steps.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < steps.size(); ++i) out[i] = acc += steps[i];
  return out;
}

Signal synth_fbm(double hurst, std::size_t length, std::uint64_t seed, std::uint64_t realization) {
  ProcessSpec spec;
  spec.kind = ProcessKind::fbm;
  spec.hurst = hurst;
  spec.length = length;
  spec.seed = seed;
  return synthesize(spec, realization);
}

Signal synth_mrw(double hurst, double lambda, std::size_t length, std::uint64_t seed,
                 std::uint64_t realization, double integral_scale) {
  ProcessSpec spec;
  spec.kind = ProcessKind::mrw;
  spec.hurst = hurst;
  spec.lambda = lambda;
  spec.length = length;
  spec.seed = seed;
  spec.integral_scale = integral_scale;
  return synthesize(spec, realization);
}

std::vector<double> stable_increments(double alpha, std::size_t length, Rng& rng) {
  std::vector<double> out(length);
  const double half_pi = 0.5 * std::numbers::pi;
  for (double& x : out) {
    const double v = (rng.uniform() - 0.5) * std::numbers::pi;
    double e = rng.exponential();
    if (e <= 0.0) e = std::numeric_limits<double>::min();
    if (alpha == 1.0) {
      x = std::tan(v);
    } else {
      const double cv = std::max(std::cos(v), std::cos(half_pi - 1e-15));
      x = std::sin(alpha * v) / std::pow(cv, 1.0 / alpha) *
          std::pow(std::cos(v - alpha * v) / e, (1.0 - alpha) / alpha);
    }
  }
  return out;
}

Signal synth_levy(double alpha, std::size_t length, std::uint64_t seed, std::uint64_t realization) {
  ProcessSpec spec;
  spec.kind = ProcessKind::levy;
  spec.alpha = alpha;
  spec.length = length;
  spec.seed = seed;
  return synthesize(spec, realization);
}

Signal fractional_integrate(const Signal& signal, double s) {
  if (signal.dim != 1) throw ParameterError("fractional integration is implemented for 1D signals");
  if (s == 0.0) return signal;
  const std::size_t n = signal.size();
  std::vector<std::complex<double>> spec(signal.values.begin(), signal.values.end());
  fft::forward(spec);
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = k <= n / 2 ? static_cast<double>(k) : static_cast<double>(k) - n;
    const double omega = 2.0 * std::numbers::pi * std::abs(kk) / static_cast<double>(n);
    spec[k] *= std::pow(omega, -s);
  }
  fft::backward(spec);
  Signal out = signal;
  for (std::size_t k = 0; k < n; ++k) out.values[k] = spec[k].real() / static_cast<double>(n);
  return out;
}

Signal synthesize(const ProcessSpec& spec, std::uint64_t realization) {
  spec.validate();
  Rng rng(spec.seed, realization);
  const std::size_t n = spec.length;
  std::vector<double> steps;
  switch (spec.kind) {
    case ProcessKind::fbm:
      steps = synth_fgn(spec.hurst, n, rng);
      break;
    case ProcessKind::mrw: {
      steps = synth_fgn(spec.hurst, n, rng);
      if (spec.lambda > 0.0) {
        const double scale = spec.integral_scale > 0.0 ? spec.integral_scale : static_cast<double>(n);
        const double l2 = spec.lambda * spec.lambda;
        auto cov = [l2, scale](std::size_t lag) {
          return l2 * std::max(0.0, std::log(scale / (static_cast<double>(lag) + 1.0)));
        };
        const auto omega = circulant_gaussian(cov, n, rng);
        const double mean = -cov(0);
        for (std::size_t i = 0; i < n; ++i) steps[i] *= std::exp(mean + omega[i]);
      }
      break;
    }
    case ProcessKind::levy:
      steps = stable_increments(spec.alpha, n, rng);
      break;
  }
  if (spec.frac_order != 0.0)
    steps = fractional_integrate(Signal::make_1d(std::move(steps)), spec.frac_order).values;
  return Signal::make_1d(cumulative_sum(steps));
}

double fractional_order_for_p0(std::span<const EtaSample> base_eta, double target_p0) {
  if (base_eta.size() < 2) throw ParameterError("need at least two eta samples");
  if (!(target_p0 > 0.0)) throw ParameterError("target p0 must be positive");
  if (std::isinf(target_p0)) return 0.0;
  if (target_p0 < base_eta.front().p || target_p0 > base_eta.back().p)
    throw ParameterError("target p0 outside the sampled p grid");
  for (std::size_t i = 1; i < base_eta.size(); ++i) {
    if (base_eta[i].p < target_p0) continue;
    const EtaSample a = base_eta[i - 1], b = base_eta[i];
    const double eta = a.eta + (b.eta - a.eta) * (target_p0 - a.p) / (b.p - a.p);
    return -eta / target_p0;
  }
  return -base_eta.back().eta / target_p0;
}

LogCumulantTruth analytic_log_cumulants(const ProcessSpec& spec) {
  LogCumulantTruth t;
  switch (spec.kind) {
    case ProcessKind::fbm:
      t.c1 = spec.hurst;
      break;
    case ProcessKind::mrw:
      t.c1 = spec.hurst + 0.5 * spec.lambda * spec.lambda;
      t.c2 = -spec.lambda * spec.lambda;
      break;
    case ProcessKind::levy:
      t.c1 = 1.0 / spec.alpha;
      break;
  }
  t.c1 += spec.frac_order;
  return t;
}

}  // namespace pleader

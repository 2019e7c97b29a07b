#include "pleader/cascades.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "pleader/errors.hpp"
#include "pleader/mfa.hpp"

namespace pleader {

MultiplierLaw MultiplierLaw::deterministic(double w) {
  if (!(w > 0.0)) throw ParameterError("deterministic multiplier must be positive");
  return {Kind::deterministic, {w}};
}

MultiplierLaw MultiplierLaw::lognormal(double mu, double sigma2) {
  if (!std::isfinite(mu) || !(sigma2 >= 0.0))
    throw ParameterError("log-normal multiplier needs finite mu and sigma2 >= 0");
  return {Kind::lognormal, {mu, sigma2}};
}

MultiplierLaw MultiplierLaw::two_point(double w0, double w1) {
  if (!(w0 > 0.0) || !(w1 > 0.0)) throw ParameterError("two-point multipliers must be positive");
  return {Kind::two_point, {w0, w1}};
}

MultiplierLaw MultiplierLaw::lognormal_from_log_cumulants(double c1, double c2) {
  if (c2 > 0.0) throw ParameterError("log-normal multipliers need c2 <= 0");
  return lognormal(-c1 * std::numbers::ln2, -c2 * std::numbers::ln2);
}

std::string MultiplierLaw::name() const {
  switch (kind_) {
    case Kind::deterministic: return "deterministic";
    case Kind::lognormal: return "lognormal";
    case Kind::two_point: return "two_point";
  }
  return "unknown";
}

double MultiplierLaw::moment(double q) const {
  switch (kind_) {
    case Kind::deterministic: return std::pow(params_[0], q);
    case Kind::lognormal: return std::exp(q * params_[0] + 0.5 * q * q * params_[1]);
    case Kind::two_point: return 0.5 * (std::pow(params_[0], q) + std::pow(params_[1], q));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double MultiplierLaw::eta(double q) const {
  switch (kind_) {
    case Kind::deterministic: return -q * std::log2(params_[0]);
    case Kind::lognormal: return -(q * params_[0] + 0.5 * q * q * params_[1]) / std::numbers::ln2;
    case Kind::two_point: return -std::log2(moment(q));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double MultiplierLaw::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::deterministic: return params_[0];
    case Kind::lognormal: return std::exp(params_[0] + std::sqrt(params_[1]) * rng.normal());
    case Kind::two_point: return rng.coin() ? params_[1] : params_[0];
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double MultiplierLaw::sample_product(Rng& rng, int count) const {
  switch (kind_) {
    case Kind::deterministic: return std::pow(params_[0], count);
    case Kind::lognormal:
      return std::exp(count * params_[0] + std::sqrt(count * params_[1]) * rng.normal());
    case Kind::two_point: {
      std::binomial_distribution<int> heads(count, 0.5);
      const int k = heads(rng.engine());
      return std::pow(params_[1], k) * std::pow(params_[0], count - k);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

const char* to_string(CascadeKind kind) {
  switch (kind) {
    case CascadeKind::dbwc1d: return "dbwc1d";
    case CascadeKind::dbwc2d: return "dbwc2d";
    case CascadeKind::mrws: return "mrws";
    case CascadeKind::rwc: return "rwc";
  }
  return "unknown";
}

CascadeKind cascade_kind_from_string(const std::string& name) {
  if (name == "dbwc1d") return CascadeKind::dbwc1d;
  if (name == "dbwc2d") return CascadeKind::dbwc2d;
  if (name == "mrws") return CascadeKind::mrws;
  if (name == "rwc") return CascadeKind::rwc;
  throw ParameterError("unknown cascade kind '" + name + "'");
}

void CascadeSpec::validate() const {
  if (depth < 2) throw ParameterError("cascade depth must be at least 2");
  const int max_depth = kind == CascadeKind::dbwc2d ? 11 : 24;
  if (depth > max_depth)
    throw ParameterError("cascade depth " + std::to_string(depth) + " exceeds " +
                         std::to_string(max_depth) + " for " + to_string(kind));
  if (kind == CascadeKind::dbwc1d || kind == CascadeKind::dbwc2d) {
    const std::size_t expected = kind == CascadeKind::dbwc1d ? 2 : 4;
    if (weights.size() != expected)
      throw ParameterError(std::string(to_string(kind)) + " needs " + std::to_string(expected) +
                           " weights, got " + std::to_string(weights.size()));
    for (double w : weights)
      if (!(w > 0.0)) throw ParameterError("cascade weights must be positive");
  }
  if (kind == CascadeKind::dbwc2d) {
    if (anisotropy.size() != 3) throw ParameterError("dbwc2d needs 3 anisotropy factors");
    for (double a : anisotropy)
      if (!(a > 0.0)) throw ParameterError("anisotropy factors must be positive");
  }
}

namespace {

WaveletPyramid pyramid_from_levels(std::vector<std::vector<double>> levels, int dim,
                                   const std::vector<double>& alpha) {
  // levels[t-1] holds tree level t; octave j = depth - t + 1.
  WaveletPyramid pyr;
  pyr.dim = dim;
  const int depth = static_cast<int>(levels.size());
  for (int j = 1; j <= depth; ++j) {
    std::vector<double>& vals = levels[static_cast<std::size_t>(depth - j)];
    Octave oc;
    if (dim == 1) {
      oc.cols = vals.size();
      oc.subbands.push_back(std::move(vals));
    } else {
      const std::size_t side = std::size_t{1} << (depth - j + 1);
      oc.rows = side;
      oc.cols = side;
      for (double a : alpha) {
        std::vector<double> band(vals.size());
        for (std::size_t k = 0; k < vals.size(); ++k) band[k] = a * vals[k];
        oc.subbands.push_back(std::move(band));
      }
    }
    pyr.octaves.push_back(std::move(oc));
  }
  return pyr;
}

void require_kind(const CascadeSpec& spec, CascadeKind kind) {
  if (spec.kind != kind)
    throw ParameterError(std::string("cascade spec kind is ") + to_string(spec.kind) +
                         ", expected " + to_string(kind));
  spec.validate();
}

double pnorm_pow(const std::vector<double>& alpha, double p, double q) {
  // ||alpha||_p^q
  if (std::isinf(p)) {
    double m = 0.0;
    for (double a : alpha) m = std::max(m, std::abs(a));
    return std::pow(m, q);
  }
  double s = 0.0;
  for (double a : alpha) s += std::pow(std::abs(a), p);
  return std::pow(s, q / p);
}

std::vector<double> effective_alpha(const std::vector<double>& weights,
                                    const std::vector<double>& alpha) {
  if (weights.size() == 2) return {1.0};
  if (alpha.size() != 3) throw ParameterError("2D cascades need 3 anisotropy factors");
  return alpha;
}

}  // namespace

WaveletPyramid synth_dbwc1d(const CascadeSpec& spec) {
  require_kind(spec, CascadeKind::dbwc1d);
  std::vector<std::vector<double>> levels;
  std::vector<double> prev{1.0};
  for (int t = 1; t <= spec.depth; ++t) {
    std::vector<double> cur(prev.size() * 2);
    for (std::size_t k = 0; k < prev.size(); ++k) {
      cur[2 * k] = spec.weights[0] * prev[k];
      cur[2 * k + 1] = spec.weights[1] * prev[k];
    }
    levels.push_back(cur);
    prev = std::move(cur);
  }
  return pyramid_from_levels(std::move(levels), 1, {1.0});
}

WaveletPyramid synth_dbwc2d(const CascadeSpec& spec) {
  require_kind(spec, CascadeKind::dbwc2d);
  std::vector<std::vector<double>> levels;
  std::vector<double> prev{1.0};
  std::size_t side = 1;
  for (int t = 1; t <= spec.depth; ++t) {
    const std::size_t next_side = side * 2;
    std::vector<double> cur(next_side * next_side);
    for (std::size_t r = 0; r < side; ++r)
      for (std::size_t c = 0; c < side; ++c)
        for (std::size_t er = 0; er < 2; ++er)
          for (std::size_t ec = 0; ec < 2; ++ec)
            cur[(2 * r + er) * next_side + 2 * c + ec] =
                spec.weights[ec + 2 * er] * prev[r * side + c];
    levels.push_back(cur);
    prev = std::move(cur);
    side = next_side;
  }
  return pyramid_from_levels(std::move(levels), 2, spec.anisotropy);
}

WaveletPyramid synth_mrws(const CascadeSpec& spec, std::uint64_t realization) {
  require_kind(spec, CascadeKind::mrws);
  Rng rng(spec.seed, realization);
  std::vector<std::vector<double>> levels;
  for (int t = 1; t <= spec.depth; ++t) {
    std::vector<double> cur(std::size_t{1} << t);
    for (double& c : cur) c = spec.law.sample_product(rng, t);
    levels.push_back(std::move(cur));
  }
  return pyramid_from_levels(std::move(levels), 1, {1.0});
}

WaveletPyramid synth_rwc(const CascadeSpec& spec, std::uint64_t realization) {
  require_kind(spec, CascadeKind::rwc);
  Rng rng(spec.seed, realization);
  std::vector<std::vector<double>> levels;
  std::vector<double> prev{1.0};
  for (int t = 1; t <= spec.depth; ++t) {
    std::vector<double> cur(prev.size() * 2);
    for (std::size_t k = 0; k < prev.size(); ++k) {
      cur[2 * k] = spec.law.sample(rng) * prev[k];
      cur[2 * k + 1] = spec.law.sample(rng) * prev[k];
    }
    levels.push_back(cur);
    prev = std::move(cur);
  }
  return pyramid_from_levels(std::move(levels), 1, {1.0});
}

WaveletPyramid synthesize(const CascadeSpec& spec, std::uint64_t realization) {
  switch (spec.kind) {
    case CascadeKind::dbwc1d: return synth_dbwc1d(spec);
    case CascadeKind::dbwc2d: return synth_dbwc2d(spec);
    case CascadeKind::mrws: return synth_mrws(spec, realization);
    case CascadeKind::rwc: return synth_rwc(spec, realization);
  }
  throw ParameterError("unknown cascade kind");
}

double dbwc_eta(const std::vector<double>& weights, int dim, double q) {
  double s = 0.0;
  for (double w : weights) s += std::pow(w, q);
  return dim - std::log2(s);
}

double law_eta(const MultiplierLaw& law, double q) { return law.eta(q); }

int tree_level(int octave, int depth) {
  if (octave < 1 || octave > depth)
    throw ParameterError("octave " + std::to_string(octave) + " outside cascade depth " +
                         std::to_string(depth));
  return depth - octave + 1;
}

double dbwc_coefficient_sf(const std::vector<double>& weights, const std::vector<double>& alpha,
                           double q, int octave, int depth) {
  const auto a = effective_alpha(weights, alpha);
  const int t = tree_level(octave, depth);
  double s = 0.0;
  for (double w : weights) s += std::pow(w, q);
  return pnorm_pow(a, q, q) * std::pow(s / static_cast<double>(weights.size()), t);
}

double oracle_dbwc_sf(const std::vector<double>& weights, const std::vector<double>& alpha, double p,
                      double q, int octave, int depth) {
  if (!(p > 0.0)) throw ParameterError("p must be positive");
  const auto a = effective_alpha(weights, alpha);
  const int t = tree_level(octave, depth);
  const int dim = weights.size() == 2 ? 1 : 2;
  double s = 0.0;
  for (double w : weights) s += std::pow(w, q);
  const double mean_dq = std::pow(s / static_cast<double>(weights.size()), t);
  if (std::isinf(p)) {
    double wmax = 0.0;
    for (double w : weights) wmax = std::max(wmax, w);
    return pnorm_pow(a, p, q) * mean_dq * std::pow(std::max(1.0, wmax), q * (octave - 1));
  }
  const double g = gamma_correction(octave, dbwc_eta(weights, dim, p));
  return pnorm_pow(a, p, q) * mean_dq * std::pow(g, q / p);
}

double cascade_coefficient_sf(const MultiplierLaw& law, double q, int octave, int depth) {
  return std::pow(law.moment(q), tree_level(octave, depth));
}

MrwsBounds oracle_mrws_bounds(const MultiplierLaw& law, double p, double n, int octave, int depth) {
  if (!(p > 0.0) || !(n > 0.0)) throw ParameterError("MRWS bounds need p > 0 and n > 0");
  const int t = tree_level(octave, depth);
  const double eta_p = law.eta(p), eta_np = law.eta(n * p);
  MrwsBounds b;
  b.lower = std::exp2(-t * (n * eta_p - eta_np));
  b.upper = std::pow(gamma_correction(octave, eta_np / n) / gamma_correction(octave, eta_p), n);
  return b;
}

double rwc_pair_factor(const MultiplierLaw& law, double p, int octave) {
  if (octave < 1) throw ParameterError("octave must be >= 1");
  const double a = law.moment(p), b = law.moment(2.0 * p);
  double pair_sum = 0.0;
  for (int l1 = 0; l1 < octave; ++l1)
    for (int l2 = 0; l2 < octave; ++l2) {
      const int lo = std::min(l1, l2);
      for (int h = 0; h <= lo; ++h) {
        // 2^{-l1-l2} * N_exact(h) with N_exact(h) = 2^{l1+l2-h-1} (h < lo) or 2^{l1+l2-lo}
        const double weight = h < lo ? std::exp2(-h - 1) : std::exp2(-lo);
        pair_sum += weight * std::pow(b, h) * std::pow(a, l1 + l2 - 2 * h);
      }
    }
  const double g = gamma_correction(octave, law.eta(p));
  return pair_sum / (g * g);
}

double oracle_rwc_sf(const MultiplierLaw& law, double p, int octave, int depth, RwcOrder order) {
  if (!(p > 0.0) || std::isinf(p)) throw ParameterError("RWC oracle needs finite p > 0");
  const double g = gamma_correction(octave, law.eta(p));
  if (order == RwcOrder::p) return cascade_coefficient_sf(law, p, octave, depth) * g;
  return cascade_coefficient_sf(law, 2.0 * p, octave, depth) * g * g *
         rwc_pair_factor(law, p, octave);
}

std::uint64_t lca_pair_count(int l1, int l2, int l) {
  if (l < 0 || l > std::min(l1, l2)) throw ParameterError("need 0 <= l <= min(l1, l2)");
  const int e = l1 + l2 - l;
  if (e >= 64) throw ParameterError("pair count overflows 64 bits");
  return std::uint64_t{1} << e;
}

std::uint64_t lca_exact_pair_count(int l1, int l2, int h) {
  const int lo = std::min(l1, l2);
  if (h < 0 || h > lo) throw ParameterError("need 0 <= h <= min(l1, l2)");
  const int e = h < lo ? l1 + l2 - h - 1 : l1 + l2 - lo;
  if (e >= 64) throw ParameterError("pair count overflows 64 bits");
  return std::uint64_t{1} << e;
}

}  // namespace pleader

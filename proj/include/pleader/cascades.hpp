#pragma once

// Wavelet-domain cascade synthesis and the closed-form expressions used as
// ground truth for the finite-resolution correction.
//
// A cascade of depth D is a tree whose root (tree level 0, value 1) is not
// stored. Tree level t = 1..D maps to practical octave j = D - t + 1, so the
// leaves are octave 1 and the root's children form the coarsest octave D.

#include <cstdint>
#include <string>
#include <vector>

#include "pleader/rng.hpp"
#include "pleader/wavelet.hpp"

namespace pleader {

// Law of the positive multiplier W.
class MultiplierLaw {
 public:
  enum class Kind { deterministic, lognormal, two_point };

  static MultiplierLaw deterministic(double w);
  // ln W ~ N(mu, sigma2)
  static MultiplierLaw lognormal(double mu, double sigma2);
  // W = w0 or w1 with probability 1/2 each.
  static MultiplierLaw two_point(double w0, double w1);
  // Log-normal law with eta(q) = c1 q + c2 q^2 / 2 (c2 <= 0).
  static MultiplierLaw lognormal_from_log_cumulants(double c1, double c2);

  Kind kind() const noexcept { return kind_; }
  const std::vector<double>& parameters() const noexcept { return params_; }
  std::string name() const;

  // E[W^q]
  double moment(double q) const;
  // eta(q) = -log2 E[W^q], in closed form for each law.
  double eta(double q) const;
  double sample(Rng& rng) const;
  // One draw of the product of `count` independent copies of W.
  double sample_product(Rng& rng, int count) const;

 private:
  MultiplierLaw(Kind kind, std::vector<double> params) : kind_(kind), params_(std::move(params)) {}
  Kind kind_;
  std::vector<double> params_;
};

enum class CascadeKind { dbwc1d, dbwc2d, mrws, rwc };

const char* to_string(CascadeKind kind);
CascadeKind cascade_kind_from_string(const std::string& name);

struct CascadeSpec {
  CascadeKind kind = CascadeKind::dbwc1d;
  // Deterministic kinds: 2 (1D) or 4 (2D) positive weights.
  std::vector<double> weights;
  // Random kinds.
  MultiplierLaw law = MultiplierLaw::deterministic(0.5);
  int depth = 8;
  // DBWC2D: one positive factor per subband (3). Ignored otherwise.
  std::vector<double> anisotropy{1.0, 1.0, 1.0};
  std::uint64_t seed = 0;

  int dim() const noexcept { return kind == CascadeKind::dbwc2d ? 2 : 1; }
  bool random() const noexcept { return kind == CascadeKind::mrws || kind == CascadeKind::rwc; }
  // Throws ParameterError on inconsistent fields.
  void validate() const;
};

WaveletPyramid synth_dbwc1d(const CascadeSpec& spec);
WaveletPyramid synth_dbwc2d(const CascadeSpec& spec);
// Independent coefficients: c at tree level t is a fresh product of t copies of W.
WaveletPyramid synth_mrws(const CascadeSpec& spec, std::uint64_t realization = 0);
// Shared-ancestor tree: c_{t,2k} = W_l c_{t-1,k}, c_{t,2k+1} = W_r c_{t-1,k}.
WaveletPyramid synth_rwc(const CascadeSpec& spec, std::uint64_t realization = 0);
// Dispatches on spec.kind.
WaveletPyramid synthesize(const CascadeSpec& spec, std::uint64_t realization = 0);

// eta(q) = d - log2 sum_m w_m^q.
double dbwc_eta(const std::vector<double>& weights, int dim, double q);
double law_eta(const MultiplierLaw& law, double q);

// Tree level holding practical octave j in a cascade of the given depth.
int tree_level(int octave, int depth);

// Exact DBWC wavelet structure function
// S_c(q,j) = ||alpha||_q^q * (sum_m w_m^q / 2^d)^t.
double dbwc_coefficient_sf(const std::vector<double>& weights, const std::vector<double>& alpha,
                           double q, int octave, int depth);

// Exact restricted p-leader structure function of a DBWC:
// ||alpha||_p^q * (sum_m w_m^q / 2^d)^t * gamma(j, eta(p))^{q/p}.
double oracle_dbwc_sf(const std::vector<double>& weights, const std::vector<double>& alpha, double p,
                      double q, int octave, int depth);

// E[c^q] at the octave for MRWS/RWC: E[W^q]^t.
double cascade_coefficient_sf(const MultiplierLaw& law, double q, int octave, int depth);

struct MrwsBounds {
  double lower = 1.0;
  double upper = 1.0;
};

// Bounds on E[S(np, j)] / (S_c(np, j) * gamma(j, eta(p))^n) for MRWS:
// lower = 2^{-t (n eta(p) - eta(np))}, upper = gamma(j, eta(np)/n)^n / gamma(j, eta(p))^n.
MrwsBounds oracle_mrws_bounds(const MultiplierLaw& law, double p, double n, int octave, int depth);

enum class RwcOrder { p, two_p };

// Expected restricted p-leader structure function of a RWC at q = p or q = 2p.
double oracle_rwc_sf(const MultiplierLaw& law, double p, int octave, int depth, RwcOrder order);

// f(j, p) = E[S(2p, j)] / (S_c(2p, j) gamma(j, eta(p))^2), evaluated from the
// exact lowest-common-ancestor decomposition of the pair sum.
double rwc_pair_factor(const MultiplierLaw& law, double p, int octave);

// Number of (node at relative level l1, node at relative level l2) pairs in a
// binary tree that share a common ancestor at level l: 2^{l1 + l2 - l}.
std::uint64_t lca_pair_count(int l1, int l2, int l);
// Number of such pairs whose lowest common ancestor is exactly at level h.
std::uint64_t lca_exact_pair_count(int l1, int l2, int h);

}  // namespace pleader

#pragma once

// p-leader multifractal analysis: leaders, structure functions, log-cumulants,
// the finite-resolution correction, weighted regressions, the wavelet scaling
// function eta(p), the critical Lebesgue index p0 and the Legendre spectrum.
//
// All quantities are indexed by octave j = 1 (finest) .. J (coarsest). In this
// convention scaling laws read S(q,j) ~ 2^{j zeta(q)} and
// C(m,j) ~ C0 + c_m j ln 2, so every exponent is a positive-direction slope.

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pleader/wavelet.hpp"

namespace pleader {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Below this |eta| the gamma factor switches to its analytic limit (gamma = j).
inline constexpr double kEtaLimitThreshold = 1e-8;

// A leader is dropped from log statistics when it is zero or subnormal; more
// than this fraction dropped in one octave is an error.
inline constexpr double kMaxDroppedFraction = 0.01;

enum class LeaderMode { restricted, full };
enum class WeightScheme { uniform, nj };

const char* to_string(LeaderMode mode);
const char* to_string(WeightScheme scheme);
LeaderMode leader_mode_from_string(const std::string& name);
WeightScheme weight_scheme_from_string(const std::string& name);

struct PLeaderField {
  double p = 1.0;
  LeaderMode mode = LeaderMode::restricted;
  int dim = 1;
  // Finest octave entering the sums (always 1 here; kept for reporting).
  int finest_octave_used = 1;
  // octaves[j-1] holds rows[j-1]*cols[j-1] leader values, row-major.
  std::vector<std::vector<double>> octaves;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;

  int num_octaves() const noexcept { return static_cast<int>(octaves.size()); }
  const std::vector<double>& at(int j) const { return octaves.at(static_cast<std::size_t>(j - 1)); }
  std::size_t count(int j) const { return at(j).size(); }

  // Copy without the last `trailing` and first `leading` positions along every
  // axis of each octave (octaves that would become empty are kept whole).
  PLeaderField trimmed(std::size_t trailing, std::size_t leading = 0) const;
};

// p-leaders by fine-to-coarse recursion. Finite p: restricted sums
// R_j = sum_i |c_j|^p + 2^{-d} * (sum of the 2^d children R_{j-1}); full mode
// adds the 3^d neighbouring restricted sums (periodic wrap); leader = R^{1/p}.
// p = +inf replaces the weighted sums by maxima (wavelet leaders).
PLeaderField compute_pleaders(const WaveletPyramid& pyramid, double p,
                              LeaderMode mode = LeaderMode::full);

struct StructureFunctions {
  std::vector<double> q_grid;
  // values[qi][j-1]
  std::vector<std::vector<double>> values;
  std::vector<std::size_t> nj;

  int num_octaves() const noexcept { return static_cast<int>(nj.size()); }
  std::vector<double> log2_row(std::size_t qi) const;
};

// S(q,j) = (1/n_j) sum_k l_{j,k}^q. Zero leaders with q <= 0 raise
// DegenerateValueError carrying the number of zeros.
StructureFunctions structure_function(const PLeaderField& field, std::span<const double> q_grid);

// S_c(q,j) = (1/n_j) sum_k sum_i |c_{j,k}^{(i)}|^q for q >= 0, n_j = positions per
// octave. `trailing_border` positions per axis are excluded from every octave.
StructureFunctions coefficient_structure_function(const WaveletPyramid& pyramid,
                                                  std::span<const double> q_grid,
                                                  std::size_t trailing_border = 0);

struct Cumulants {
  int m_max = 3;
  // values[m-1][j-1], natural-log cumulants of ln l_{j,.}
  std::vector<std::vector<double>> values;
  std::vector<std::size_t> nj;
  std::vector<std::size_t> dropped;

  int num_octaves() const noexcept { return static_cast<int>(nj.size()); }
};

// C(1,j) sample mean, C(2,j) unbiased variance, C(3,j) k-statistic k3 of
// ln l_{j,.}. Octaves too small for an estimator get NaN.
Cumulants cumulants(const PLeaderField& field, int m_max = 3);

// Sample cumulants of an arbitrary positive-valued set, same estimators.
std::vector<double> log_cumulants(std::span<const double> values, int m_max);

struct ScalingStats {
  double p = 1.0;
  StructureFunctions sf;
  Cumulants cum;
  bool corrected = false;
  // eta(p) used by the correction; NaN when uncorrected.
  double eta_used = std::numeric_limits<double>::quiet_NaN();
};

ScalingStats scaling_stats(const PLeaderField& field, std::span<const double> q_grid, int m_max);

// gamma(j, eta) = (1 - 2^{-j eta}) / (1 - 2^{-eta}); equals j for |eta| < 1e-8.
double gamma_correction(int octave, double eta);

// S_bar = S * gamma^{-q/p}; p = inf returns the input unchanged.
StructureFunctions correct_structure(const StructureFunctions& sf, double eta, double p);
// C_bar(1,j) = C(1,j) - ln(gamma)/p, higher orders unchanged; p = inf is the identity.
Cumulants correct_cumulants(const Cumulants& cum, double eta, double p);
ScalingStats correct(const ScalingStats& stats, double eta);

struct Regression {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  int j1 = 0;
  int j2 = 0;
};

// Weighted least squares of values[j-1] against j over [j1, j2]. Weights are
// uniform or proportional to n_j. Throws RegressionError for j2 <= j1, ranges
// outside the table, or non-finite values in range.
Regression regress(std::span<const double> values, std::span<const std::size_t> nj, int j1,
                   int j2, WeightScheme scheme = WeightScheme::nj);

struct ScalingRange {
  int j1 = 0;
  int j2 = 0;
};

// j1 = 3, j2 = coarsest octave with n_j >= 8; shrinks j1 when that leaves fewer
// than two octaves.
ScalingRange default_scaling_range(std::span<const std::size_t> nj);
// [3, J-2], falling back to [1, J] for shallow pyramids.
ScalingRange default_eta_range(int num_octaves);

struct EtaSample {
  double p = 0.0;
  double eta = 0.0;
  double stderr_eta = 0.0;
};

// eta(p) as the slope of log2 S_c(p, j) over the range. Requires p >= 0.
std::vector<EtaSample> estimate_eta(const WaveletPyramid& pyramid, std::span<const double> p_grid,
                                    ScalingRange range, WeightScheme scheme = WeightScheme::nj,
                                    std::size_t trailing_border = 0);

struct P0Estimate {
  // +inf when eta stays positive over the whole grid.
  double value = kInf;
  // eta(p_min) <= 0: p0 lies below the grid; value is then p_min.
  bool below_grid = false;
};

inline constexpr double kP0Tolerance = 1e-3;

// Bisection on the piecewise-linear interpolant of eta over an increasing grid.
P0Estimate estimate_p0(std::span<const EtaSample> samples);
// Same, bisecting an exact eta function between the bracketing grid points.
P0Estimate estimate_p0(const std::function<double(double)>& eta, std::span<const double> p_grid);

std::vector<double> default_p0_grid();       // 0.25, 0.5, ..., 20
std::vector<double> default_q_grid();        // -5, -4.75, ..., 5
std::vector<double> default_p_list();        // 1/4, 1/2, 1, 2, 5, inf

struct LegendrePoint {
  double h = 0.0;
  double L = 0.0;
};

struct LegendreSpectrum {
  std::vector<LegendrePoint> points;
  bool concave = true;
};

// L(h) = min_q (d + q h - zeta(q)) over the supplied grid.
double legendre_at(std::span<const double> q_grid, std::span<const double> zeta, int dim, double h);

// Evaluates L on `n_h` points spanning the numerical derivative range of zeta
// and keeps L(h) >= 0. Non-concave zeta only clears the `concave` flag.
LegendreSpectrum legendre(std::span<const double> q_grid, std::span<const double> zeta, int dim,
                          std::size_t n_h = 201);

}  // namespace pleader

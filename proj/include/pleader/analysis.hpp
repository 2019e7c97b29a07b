#pragma once

// End-to-end analysis of one pyramid: p-leaders for every p, raw and corrected
// statistics, regressions, eta(p), p0 and Legendre spectra.

#include <optional>
#include <string>
#include <vector>

#include "pleader/mfa.hpp"
#include "pleader/wavelet.hpp"

namespace pleader {

struct AnalysisOptions {
  std::vector<double> p_list = default_p_list();
  std::vector<double> q_grid = default_q_grid();
  int m_max = 3;
  // Scaling range for zeta and c_m; 0 selects the default.
  int j1 = 0;
  int j2 = 0;
  // Range for eta(p); 0 selects [3, J-2].
  int eta_j1 = 0;
  int eta_j2 = 0;
  bool correction = true;
  LeaderMode mode = LeaderMode::full;
  WeightScheme weights = WeightScheme::nj;
  bool discard_border = false;
  std::vector<double> p0_grid = default_p0_grid();
};

// Regressions of one statistics table.
struct Estimates {
  // zeta(q), one regression per q of the grid (slope of log2 S).
  std::vector<Regression> zeta;
  // c_m, m = 1..m_max: slope of C(m, j) times log2(e).
  std::vector<Regression> log_cumulants;
  std::optional<LegendreSpectrum> legendre;
};

struct PAnalysis {
  double p = 1.0;
  ScalingStats uncorrected;
  std::optional<ScalingStats> corrected;
  // eta(p) used by the correction (NaN for p = inf).
  double eta = std::numeric_limits<double>::quiet_NaN();
  double eta_stderr = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> gamma;
  Estimates uncorrected_estimates;
  std::optional<Estimates> corrected_estimates;
  bool exceeds_p0 = false;
};

struct AnalysisReport {
  AnalysisOptions options;
  int dim = 1;
  int num_octaves = 0;
  int n_vanishing_moments = 0;
  ScalingRange range;
  ScalingRange eta_range;
  // Coefficient statistics on the q >= 0 part of the grid.
  StructureFunctions coefficient_sf;
  std::vector<Regression> coefficient_zeta;
  Cumulants coefficient_cumulants;
  std::vector<Regression> coefficient_log_cumulants;
  std::vector<EtaSample> eta;
  P0Estimate p0;
  std::vector<PAnalysis> per_p;
  std::vector<std::string> warnings;
};

// Cumulants of ln|c| per octave (all subbands pooled).
Cumulants coefficient_log_cumulant_table(const WaveletPyramid& pyramid, int m_max,
                                         std::size_t trailing_border = 0);

// c_m regressions of a cumulant table over a range (slopes in log2 units).
std::vector<Regression> log_cumulant_regressions(const Cumulants& cum, ScalingRange range,
                                                 WeightScheme scheme);

AnalysisReport analyze(const WaveletPyramid& pyramid, const AnalysisOptions& options = {});

}  // namespace pleader

#pragma once

// Monte Carlo benchmark: per-realization synthesis and analysis, bias/std/rmse
// of log-cumulant estimates over a sweep of lower cutoffs j1, logscale-diagram
// deviation ratios, optimal rmse ratios and figure data.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pleader/cascades.hpp"
#include "pleader/mfa.hpp"
#include "pleader/processes.hpp"

namespace pleader {

// Cap applied to log10 deviation ratios (reached when the corrected curve is exact).
inline constexpr double kSeRatioCap = 12.0;
// A run fails when more than this fraction of realizations fail.
inline constexpr double kMaxFailedFraction = 0.05;

struct ExperimentSpec {
  enum class Source { process, cascade };

  std::string name = "experiment";
  Source source = Source::process;
  ProcessSpec process;
  CascadeSpec cascade;
  int n_mc = 50;
  std::vector<double> p_list = default_p_list();
  // Optional; when non-empty the mean log2 S(q, j) curves are kept for figures.
  std::vector<double> q_grid;
  int m_max = 3;
  int n_vanishing_moments = 3;
  std::uint64_t seed = 1;
  LeaderMode mode = LeaderMode::full;
  WeightScheme weights = WeightScheme::nj;
  // Drop the border positions touched by the periodic wrap from every octave
  // (no effect on cascades, whose pyramids have no filter support).
  bool discard_border = true;
  // Upper end of every regression; 0 selects the default.
  int j2 = 0;
  // When finite, the fractional order of the process is tuned so that eta(p)
  // estimated on a pilot realization crosses zero here.
  double target_p0 = kInf;
  // Analytic log-cumulants c1..c3; derived from the source when absent.
  std::optional<std::vector<double>> truth;
  // 0: PLEADER_THREADS or the hardware concurrency.
  int threads = 0;

  void validate() const;
};

ExperimentSpec experiment_from_json(const nlohmann::json& doc);
nlohmann::json experiment_to_json(const ExperimentSpec& spec);
// "fbm", "mrw", "levy", "dbwc2d".
ExperimentSpec preset(const std::string& name);

// log-cumulant targets c1..c3 of the experiment's source.
std::vector<double> experiment_truth(const ExperimentSpec& spec);

struct RealizationEstimate {
  std::uint64_t index = 0;
  bool ok = false;
  std::string error;
  double p0 = kInf;
  // Per p (same order as the spec): eta(p), raw and corrected C(m, j).
  std::vector<double> eta;
  std::vector<Cumulants> uncorrected;
  std::vector<Cumulants> corrected;
  // log2 S(q, j), per p then per q; empty without a q grid.
  std::vector<std::vector<std::vector<double>>> log2_sf_uncorrected;
  std::vector<std::vector<std::vector<double>>> log2_sf_corrected;
};

struct PerfRow {
  int m = 1;
  bool corrected = false;
  double p = 1.0;
  double p0 = kInf;
  int j1 = 1;
  int j2 = 1;
  std::size_t n = 0;
  double mean = 0.0;
  double bias = 0.0;
  double std = 0.0;
  double rmse = 0.0;
};

struct PSummary {
  double p = 1.0;
  double p0 = kInf;
  double se_ratio = 0.0;
  bool se_exact = false;
  double rormse = 1.0;
  int olc_uncorrected = 1;
  int olc_corrected = 1;
  // Number of octaves in the optimal regression ranges.
  int olc_scales_uncorrected = 0;
  int olc_scales_corrected = 0;
  // Mean fitted c2 and its spread over realizations (default range).
  double c2_mean = 0.0;
  double c2_std = 0.0;
  // C(2, j) corrected and raw arrays identical in every realization.
  bool c2_identical = true;
};

struct PerfTable {
  std::vector<PerfRow> rows;
  std::vector<PSummary> summaries;
};

struct MonteCarloResult {
  ExperimentSpec spec;
  std::vector<double> truth;
  // Fractional order actually applied to the process.
  double frac_order = 0.0;
  int num_octaves = 0;
  int j2 = 0;
  std::vector<std::size_t> nj;
  std::vector<RealizationEstimate> realizations;
  std::size_t failed = 0;
  PerfTable table;
};

// One realization: synthesize, transform, leaders, raw and corrected stats.
RealizationEstimate run_realization(const ExperimentSpec& spec, std::uint64_t index);

// Runs all realizations in parallel and reduces in realization order.
// Throws Error when more than 5% of the realizations fail.
MonteCarloResult run_monte_carlo(const ExperimentSpec& spec);

// bias/std/rmse of estimates against a target (population std).
PerfRow summarize_estimates(const std::vector<double>& estimates, double target);

// log10 of mean squared deviation of the raw over the corrected C(1, j) curves
// from the truth slope (c1 ln 2 per octave), each curve aligned with the truth at
// octave j_align. Capped at kSeRatioCap; `exact` is set when the cap is hit.
struct SeRatio {
  double value = 0.0;
  bool exact = false;
};
SeRatio se_ratio(const std::vector<std::vector<double>>& corrected,
                 const std::vector<std::vector<double>>& uncorrected, double truth_slope,
                 int j_first, int j_align);

struct RormseOlc {
  double rormse = 1.0;
  int olc_uncorrected = 0;
  int olc_corrected = 0;
};
// rmse curves indexed by j1 starting at j1_first; ties go to the smaller j1.
RormseOlc rormse_and_olc(const std::vector<double>& rmse_uncorrected,
                         const std::vector<double>& rmse_corrected, int j1_first = 1);

struct FigurePoint {
  int j = 0;
  double value = 0.0;
  double p = 0.0;
  std::string series;
};
// CSV with columns j,value,p,series in the given order; header only when empty.
std::string figure_csv(const std::vector<FigurePoint>& points);

// Writes perf_table.csv, summary.json and the figure files into `outdir`.
// Kinds: "logscale" (mean C(1, j) curves), "rmse" (bias/std/rmse versus j1),
// "structure" (mean log2 S when a q grid is set).
std::vector<FigurePoint> figure_data(const MonteCarloResult& result, const std::string& kind);
std::string perf_table_csv(const PerfTable& table);
nlohmann::json summary_json(const MonteCarloResult& result);
void write_outputs(const MonteCarloResult& result, const std::string& outdir);

// Thread count from PLEADER_THREADS, else the hardware concurrency (at least 1).
int default_thread_count();

}  // namespace pleader

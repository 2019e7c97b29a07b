#pragma once

// Heart-rate ingestion: RR interval files, natural cubic spline resampling
// onto a uniform grid, and the analysis of the resampled series.

#include <iosfwd>
#include <string>
#include <vector>

#include "pleader/analysis.hpp"
#include "pleader/wavelet.hpp"

namespace pleader {

struct RRRecord {
  std::string source;
  // Beat time at the end of each interval (seconds) and the interval itself.
  std::vector<double> beat_times;
  std::vector<double> rr;
};

// One interval per line, or "time rr" pairs (whitespace or comma separated).
// '#' starts a comment. Throws IngestError with the 1-based line number.
RRRecord parse_rr(std::istream& in, const std::string& source = "");
RRRecord read_rr_file(const std::string& path);

// Natural cubic spline through strictly increasing knots.
class NaturalSpline {
 public:
  NaturalSpline(std::vector<double> x, std::vector<double> y);
  double operator()(double t) const;
  const std::vector<double>& second_derivatives() const noexcept { return m_; }

 private:
  std::vector<double> x_, y_, m_;
};

// Samples the spline through (beat time, rr) at t0, t0 + 1/fs, ... <= t_last.
std::vector<double> resample_rr(const RRRecord& record, double fs);

// Longest prefix whose length is divisible by 2^J for the deepest J leaving
// at least one full filter support at the coarsest octave.
std::vector<double> truncate_for_dwt(std::vector<double> values, int n_vanishing_moments);

struct HrvResult {
  RRRecord record;
  double fs = 4.0;
  std::vector<double> resampled;
  std::size_t analyzed_length = 0;
  AnalysisReport report;
};

HrvResult analyze_rr(const RRRecord& record, double fs, const AnalysisOptions& options,
                     int n_vanishing_moments = 3);

}  // namespace pleader

#include "pleader/hrv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pleader/errors.hpp"

namespace pleader {

namespace {

std::vector<double> parse_numbers(const std::string& line, std::size_t line_no) {
  std::string s = line;
  for (char& c : s)
    if (c == ',' || c == ';' || c == '\t') c = ' ';
  std::istringstream is(s);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw IngestError("not a number: '" + tok + "'", line_no);
    }
    if (used != tok.size()) throw IngestError("not a number: '" + tok + "'", line_no);
    out.push_back(v);
  }
  return out;
}

}  // namespace

RRRecord parse_rr(std::istream& in, const std::string& source) {
  RRRecord rec;
  rec.source = source;
  std::string line;
  std::size_t line_no = 0;
  int columns = 0;
  double t = 0.0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    const auto vals = parse_numbers(line, line_no);
    if (vals.empty()) continue;
    if (vals.size() > 2) throw IngestError("expected one or two columns", line_no);
    if (columns == 0) columns = static_cast<int>(vals.size());
    if (static_cast<int>(vals.size()) != columns)
      throw IngestError("inconsistent column count", line_no);
    const double rr = vals.back();
    if (!std::isfinite(rr) || rr <= 0.0)
      throw IngestError("RR interval must be positive", line_no);
    if (columns == 1) {
      t += rr;
    } else {
      t = vals[0];
      if (!std::isfinite(t)) throw IngestError("beat time must be finite", line_no);
      if (!rec.beat_times.empty() && t <= rec.beat_times.back())
        throw IngestError("beat times must increase", line_no);
    }
    rec.beat_times.push_back(t);
    rec.rr.push_back(rr);
  }
  if (rec.rr.size() < 2) throw IngestError("need at least two RR intervals", line_no);
  return rec;
}

RRRecord read_rr_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open " + path, 0);
  return parse_rr(in, path);
}

NaturalSpline::NaturalSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw ParameterError("spline needs at least two matching knots");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1])) throw ParameterError("spline knots must increase strictly");
  m_.assign(n, 0.0);
  if (n == 2) return;
  // Tridiagonal system for interior second derivatives (Thomas algorithm).
  const std::size_t k = n - 2;
  std::vector<double> diag(k), upper(k), rhs(k);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    diag[i - 1] = 2.0 * (h0 + h1);
    upper[i - 1] = h1;
    rhs[i - 1] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
  }
  for (std::size_t i = 1; i < k; ++i) {
    const double lower = x_[i + 1] - x_[i];
    const double w = lower / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  m_[k] = rhs[k - 1] / diag[k - 1];
  for (std::size_t i = k - 1; i >= 1; --i) m_[i] = (rhs[i - 1] - upper[i - 1] * m_[i + 1]) / diag[i - 1];
}

double NaturalSpline::operator()(double t) const {
  const std::size_t n = x_.size();
  std::size_t i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), t) - x_.begin());
  i = std::clamp<std::size_t>(i, 1, n - 1);
  const double h = x_[i] - x_[i - 1];
  const double a = (x_[i] - t) / h;
  const double b = (t - x_[i - 1]) / h;
  return a * y_[i - 1] + b * y_[i] +
         ((a * a * a - a) * m_[i - 1] + (b * b * b - b) * m_[i]) * h * h / 6.0;
}

std::vector<double> resample_rr(const RRRecord& record, double fs) {
  if (!(fs > 0.0) || !std::isfinite(fs)) throw ParameterError("sampling frequency must be positive");
  const NaturalSpline spline(record.beat_times, record.rr);
  const double t0 = record.beat_times.front();
  const double span = record.beat_times.back() - t0;
  const auto n = static_cast<std::size_t>(std::floor(span * fs + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = spline(t0 + static_cast<double>(i) / fs);
  return out;
}

std::vector<double> truncate_for_dwt(std::vector<double> values, int n_vanishing_moments) {
  const std::size_t taps = 2 * static_cast<std::size_t>(n_vanishing_moments);
  int depth = 0;
  while ((values.size() >> (depth + 1)) >= taps) ++depth;
  if (depth < 1)
    throw DepthError("series of " + std::to_string(values.size()) + " samples is too short", 0);
  values.resize((values.size() >> depth) << depth);
  return values;
}

HrvResult analyze_rr(const RRRecord& record, double fs, const AnalysisOptions& options,
                     int n_vanishing_moments) {
  HrvResult res;
  res.record = record;
  res.fs = fs;
  res.resampled = resample_rr(record, fs);
  auto series = truncate_for_dwt(res.resampled, n_vanishing_moments);
  res.analyzed_length = series.size();
  const Signal sig = Signal::make_1d(std::move(series), 1.0 / fs);
  res.report = analyze(dwt(sig, n_vanishing_moments), options);
  if (res.analyzed_length < res.resampled.size())
    res.report.warnings.push_back("analyzed the first " + std::to_string(res.analyzed_length) +
                                  " of " + std::to_string(res.resampled.size()) + " samples");
  return res;
}

}  // namespace pleader

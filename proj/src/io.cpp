#include "pleader/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "pleader/errors.hpp"

namespace pleader::io {

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double to_number(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  throw ParameterError("expected a number, got " + j.dump());
}

namespace {

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

std::vector<double> to_numbers(const Json& a) {
  std::vector<double> v;
  for (const auto& x : a) v.push_back(to_number(x));
  return v;
}

Json regression_json(const Regression& r) {
  return {{"value", number(r.slope)},
          {"stderr", number(r.stderr_slope)},
          {"intercept", number(r.intercept)},
          {"j1", r.j1},
          {"j2", r.j2}};
}

Json sf_json(const StructureFunctions& sf) {
  Json rows = Json::array();
  for (const auto& row : sf.values) rows.push_back(numbers(row));
  return {{"q", numbers(sf.q_grid)}, {"values", rows}, {"nj", sf.nj}};
}

Json cumulant_json(const Cumulants& c) {
  Json rows = Json::array();
  for (const auto& row : c.values) rows.push_back(numbers(row));
  return {{"m_max", c.m_max}, {"values", rows}, {"nj", c.nj}, {"dropped", c.dropped}};
}

Json stats_json(const ScalingStats& s) {
  return {{"corrected", s.corrected},
          {"eta_used", number(s.eta_used)},
          {"structure_functions", sf_json(s.sf)},
          {"cumulants", cumulant_json(s.cum)}};
}

Json estimates_json(const Estimates& e, const std::vector<double>& q) {
  Json zeta = Json::array();
  for (std::size_t i = 0; i < e.zeta.size(); ++i) {
    Json z = regression_json(e.zeta[i]);
    z["q"] = number(q[i]);
    zeta.push_back(z);
  }
  Json cm = Json::array();
  for (std::size_t m = 0; m < e.log_cumulants.size(); ++m) {
    Json c = regression_json(e.log_cumulants[m]);
    c["m"] = m + 1;
    cm.push_back(c);
  }
  Json out = {{"zeta", zeta}, {"log_cumulants", cm}};
  if (e.legendre) {
    Json pts = Json::array();
    for (const auto& p : e.legendre->points) pts.push_back({number(p.h), number(p.L)});
    out["legendre"] = {{"concave", e.legendre->concave}, {"points", pts}};
  }
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  return out;
}

double parse_field(const std::string& s, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw IngestError("not a number: '" + s + "'", line_no);
  }
  while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
  if (used != s.size()) throw IngestError("not a number: '" + s + "'", line_no);
  return v;
}

}  // namespace

void write_signal_csv(const Signal& signal, std::ostream& out) {
  out << std::setprecision(17);
  if (signal.dim == 1) {
    out << "index,value\n";
    for (std::size_t i = 0; i < signal.values.size(); ++i) out << i << ',' << signal.values[i] << '\n';
  } else {
    out << "row,col,value\n";
    for (std::size_t r = 0; r < signal.rows; ++r)
      for (std::size_t c = 0; c < signal.cols; ++c)
        out << r << ',' << c << ',' << signal.values[r * signal.cols + c] << '\n';
  }
}

Signal read_signal_csv(std::istream& in, double sample_period) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) break;
  }
  header = split_csv(line);
  const bool two_d = header.size() == 3 && header[0] == "row" && header[1] == "col" && header[2] == "value";
  if (!two_d && !(header.size() == 2 && header[0] == "index" && header[1] == "value"))
    throw IngestError("expected header 'index,value' or 'row,col,value'", line_no);

  std::vector<double> values;
  std::size_t rows = 0, cols = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != header.size()) throw IngestError("wrong number of fields", line_no);
    const double v = parse_field(f.back(), line_no);
    if (!two_d) {
      if (parse_field(f[0], line_no) != static_cast<double>(values.size()))
        throw IngestError("indices must run 0, 1, 2, ...", line_no);
    } else {
      const auto r = static_cast<std::size_t>(parse_field(f[0], line_no));
      const auto c = static_cast<std::size_t>(parse_field(f[1], line_no));
      if (r == 0) cols = std::max(cols, c + 1);
      rows = std::max(rows, r + 1);
      if (cols > 0 && r * cols + c != values.size())
        throw IngestError("2D entries must be row-major and complete", line_no);
    }
    values.push_back(v);
  }
  if (values.empty()) throw IngestError("no data rows", line_no);
  if (two_d) {
    if (rows * cols != values.size()) throw IngestError("incomplete 2D grid", line_no);
    return Signal::make_2d(std::move(values), rows, cols, sample_period);
  }
  return Signal::make_1d(std::move(values), sample_period);
}

Json pyramid_to_json(const WaveletPyramid& pyramid) {
  Json octaves = Json::array();
  for (std::size_t j = 0; j < pyramid.octaves.size(); ++j) {
    const Octave& oc = pyramid.octaves[j];
    Json bands = Json::array();
    for (const auto& b : oc.subbands) bands.push_back(numbers(b));
    octaves.push_back({{"j", j + 1}, {"rows", oc.rows}, {"cols", oc.cols}, {"subbands", bands}});
  }
  return {{"format", "pleader-pyramid"},
          {"version", kFormatVersion},
          {"index_convention", kIndexConvention},
          {"normalization", "L1"},
          {"boundary", "periodic"},
          {"dim", pyramid.dim},
          {"n_vanishing_moments", pyramid.n_vanishing_moments},
          {"octaves", octaves},
          {"approximation", numbers(pyramid.approximation)}};
}

WaveletPyramid pyramid_from_json(const Json& doc) {
  if (!doc.is_object() || doc.value("format", "") != "pleader-pyramid")
    throw IngestError("not a pyramid document");
  if (doc.value("version", 0) != kFormatVersion) throw IngestError("unsupported pyramid version");
  WaveletPyramid p;
  try {
    p.dim = doc.at("dim").get<int>();
    p.n_vanishing_moments = doc.at("n_vanishing_moments").get<int>();
    for (const auto& o : doc.at("octaves")) {
      Octave oc;
      oc.rows = o.at("rows").get<std::size_t>();
      oc.cols = o.at("cols").get<std::size_t>();
      for (const auto& b : o.at("subbands")) oc.subbands.push_back(to_numbers(b));
      p.octaves.push_back(std::move(oc));
    }
    if (doc.contains("approximation")) p.approximation = to_numbers(doc.at("approximation"));
  } catch (const Json::exception& e) {
    throw IngestError(std::string("malformed pyramid: ") + e.what());
  }
  p.validate();
  return p;
}

Json report_to_json(const AnalysisReport& rep) {
  const auto& o = rep.options;
  Json options = {{"p", numbers(o.p_list)},
                  {"q", numbers(o.q_grid)},
                  {"m_max", o.m_max},
                  {"correction", o.correction},
                  {"mode", to_string(o.mode)},
                  {"weights", to_string(o.weights)},
                  {"discard_border", o.discard_border}};
  std::vector<double> q_pos = rep.coefficient_sf.q_grid;
  Json coeff = {{"structure_functions", sf_json(rep.coefficient_sf)},
                {"cumulants", cumulant_json(rep.coefficient_cumulants)}};
  {
    Estimates e;
    e.zeta = rep.coefficient_zeta;
    e.log_cumulants = rep.coefficient_log_cumulants;
    coeff["estimates"] = estimates_json(e, q_pos);
  }
  Json eta = Json::array();
  for (const auto& s : rep.eta)
    eta.push_back({{"p", number(s.p)}, {"eta", number(s.eta)}, {"stderr", number(s.stderr_eta)}});

  Json per_p = Json::array();
  for (const auto& pa : rep.per_p) {
    Json entry = {{"p", number(pa.p)},
                  {"exceeds_p0", pa.exceeds_p0},
                  {"uncorrected", stats_json(pa.uncorrected)},
                  {"uncorrected_estimates", estimates_json(pa.uncorrected_estimates, o.q_grid)}};
    if (pa.corrected) {
      entry["eta_p"] = number(pa.eta);
      entry["eta_p_stderr"] = number(pa.eta_stderr);
      entry["gamma"] = numbers(pa.gamma);
      entry["corrected"] = stats_json(*pa.corrected);
      entry["corrected_estimates"] = estimates_json(*pa.corrected_estimates, o.q_grid);
    }
    per_p.push_back(entry);
  }
  return {{"format", "pleader-report"},
          {"version", kFormatVersion},
          {"index_convention", kIndexConvention},
          {"dim", rep.dim},
          {"num_octaves", rep.num_octaves},
          {"n_vanishing_moments", rep.n_vanishing_moments},
          {"options", options},
          {"range", {{"j1", rep.range.j1}, {"j2", rep.range.j2}}},
          {"eta_range", {{"j1", rep.eta_range.j1}, {"j2", rep.eta_range.j2}}},
          {"coefficients", coeff},
          {"eta", eta},
          {"p0", {{"value", number(rep.p0.value)}, {"below_grid", rep.p0.below_grid}}},
          {"per_p", per_p},
          {"warnings", rep.warnings}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot write " + path);
  out << content;
  if (!out) throw ParameterError("write failed for " + path);
}

WaveletPyramid load_pyramid(const std::string& path, int n_vanishing_moments) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw IngestError(std::string("invalid JSON: ") + e.what(), 0);
    }
    return pyramid_from_json(doc);
  }
  std::istringstream in(text);
  return dwt(read_signal_csv(in), n_vanishing_moments);
}

}  // namespace pleader::io

#include "pleader/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pleader/cascades.hpp"
#include "pleader/errors.hpp"
#include "pleader/harness.hpp"
#include "pleader/io.hpp"
#include "pleader/processes.hpp"

namespace pleader {

namespace {

using Json = nlohmann::json;

struct AnalyzeFlags {
  std::string p = "0.25,0.5,1,2,5,inf";
  std::string q;
  int m = 3;
  int j1 = 0;
  int j2 = 0;
  bool no_correction = false;
  std::string mode = "full";
  std::string weights = "nj";
  bool discard_border = false;
  int nvm = 3;

  void add_to(CLI::App* app) {
    app->add_option("--p", p, "p values, comma separated (inf allowed)")->capture_default_str();
    app->add_option("--q", q, "moment orders, comma separated (default -5:0.25:5)");
    app->add_option("--m", m, "highest log-cumulant order (1..3)")->capture_default_str();
    app->add_option("--j1", j1, "finest octave of the scaling range (0: default)");
    app->add_option("--j2", j2, "coarsest octave of the scaling range (0: default)");
    app->add_flag("--no-correction", no_correction, "skip the finite-resolution correction");
    app->add_option("--mode", mode, "leader neighbourhood: full or restricted")->capture_default_str();
    app->add_option("--weights", weights, "regression weights: nj or uniform")->capture_default_str();
    app->add_flag("--discard-border", discard_border, "drop border coefficients touched by the periodic wrap");
    app->add_option("--nvm", nvm, "vanishing moments of the Daubechies wavelet")->capture_default_str();
  }

  AnalysisOptions options() const {
    AnalysisOptions o;
    o.p_list = parse_number_list(p);
    if (!q.empty()) o.q_grid = parse_number_list(q);
    o.m_max = m;
    o.j1 = j1;
    o.j2 = j2;
    o.correction = !no_correction;
    o.mode = leader_mode_from_string(mode);
    o.weights = weight_scheme_from_string(weights);
    o.discard_border = discard_border;
    return o;
  }
};

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-")
    out << content;
  else
    io::write_file(path, content);
}

Json parse_json_file(const std::string& path) {
  const std::string text = io::read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw IngestError(path + ": invalid JSON: " + e.what());
  }
}

// A spec argument is a JSON file or the name of a preset.
ExperimentSpec load_experiment(const std::string& arg) {
  if (!std::filesystem::exists(arg) && arg.find('.') == std::string::npos) return preset(arg);
  return experiment_from_json(parse_json_file(arg));
}

void cmd_synth(const std::string& spec_path, std::uint64_t realization, const std::string& output,
               std::ostream& out) {
  ExperimentSpec spec = load_experiment(spec_path);
  std::ostringstream buf;
  if (spec.source == ExperimentSpec::Source::process) {
    ProcessSpec ps = spec.process;
    ps.seed = spec.seed;
    io::write_signal_csv(synthesize(ps, realization), buf);
  } else {
    CascadeSpec cs = spec.cascade;
    cs.seed = spec.seed;
    buf << io::pyramid_to_json(synthesize(cs, realization)).dump(1) << '\n';
  }
  emit(output, buf.str(), out);
}

void cmd_analyze(const std::string& input, const AnalyzeFlags& flags, const std::string& output,
                 std::ostream& out) {
  const auto pyramid = io::load_pyramid(input, flags.nvm);
  const auto report = analyze(pyramid, flags.options());
  emit(output, io::report_to_json(report).dump(1) + "\n", out);
}

void cmd_bench(const std::string& spec_path, const std::string& outdir, int n_mc, int threads,
               std::ostream& out) {
  ExperimentSpec spec = load_experiment(spec_path);
  if (n_mc > 0) spec.n_mc = n_mc;
  if (threads > 0) spec.threads = threads;
  spec.validate();
  const auto result = run_monte_carlo(spec);
  write_outputs(result, outdir);
  out << "wrote " << outdir << " (" << result.realizations.size() - result.failed << "/"
      << result.realizations.size() << " realizations)\n";
}

void cmd_hrv(const std::string& path, double fs, const AnalyzeFlags& flags, const std::string& output,
             const std::string& resampled_path, std::ostream& out) {
  const auto record = read_rr_file(path);
  const auto result = analyze_rr(record, fs, flags.options(), flags.nvm);
  if (!resampled_path.empty()) {
    std::ostringstream buf;
    io::write_signal_csv(Signal::make_1d(result.resampled, 1.0 / fs), buf);
    io::write_file(resampled_path, buf.str());
  }
  emit(output, hrv_report_to_json(result).dump(1) + "\n", out);
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ParameterError("empty entry in list '" + text + "'");
    item = item.substr(b, e - b + 1);
    if (item == "inf" || item == "Inf" || item == "infinity") {
      out.push_back(kInf);
      continue;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !std::isfinite(v)) throw ParameterError("not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ParameterError("empty list");
  return out;
}

Json hrv_report_to_json(const HrvResult& r) {
  Json doc = io::report_to_json(r.report);
  const auto& rr = r.record.rr;
  double mean_rr = 0.0;
  for (double v : rr) mean_rr += v;
  mean_rr /= static_cast<double>(rr.size());
  doc["hrv"] = {{"source", r.record.source},
                {"beats", rr.size()},
                {"mean_rr", mean_rr},
                {"duration", r.record.beat_times.back() - r.record.beat_times.front()},
                {"fs", r.fs},
                {"resampled_length", r.resampled.size()},
                {"analyzed_length", r.analyzed_length},
                {"p0", io::number(r.report.p0.value)}};
  Json overlay = Json::array();
  for (const auto& pa : r.report.per_p) {
    if (pa.p != 0.25 && pa.p != 0.5 && pa.p != 1.0) continue;
    Json entry = {{"p", pa.p}, {"j", Json::array()}, {"uncorrected", Json::array()}};
    const auto& c = pa.uncorrected.cum.values[0];
    for (std::size_t j = 0; j < c.size(); ++j) {
      entry["j"].push_back(j + 1);
      entry["uncorrected"].push_back(io::number(c[j]));
    }
    if (pa.corrected) {
      entry["corrected"] = Json::array();
      for (double v : pa.corrected->cum.values[0]) entry["corrected"].push_back(io::number(v));
    }
    overlay.push_back(entry);
  }
  doc["hrv"]["c1_overlay"] = overlay;
  return doc;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-leader multifractal analysis with finite-resolution correction", "pleader"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pleader 0.1.0");

  std::string spec_path, output, input, outdir, resampled;
  std::uint64_t realization = 0;
  int n_mc = 0, threads = 0;
  double fs = 4.0;
  AnalyzeFlags aflags, hflags;

  auto* synth = app.add_subcommand("synth", "synthesize a process (CSV) or cascade (pyramid JSON)");
  synth->add_option("spec", spec_path, "experiment JSON or preset name")->required();
  synth->add_option("-o,--output", output, "output file (default stdout)");
  synth->add_option("--realization", realization, "realization index")->capture_default_str();

  auto* an = app.add_subcommand("analyze", "analyze a signal CSV or pyramid JSON");
  an->add_option("input", input, "signal CSV or pyramid JSON")->required();
  an->add_option("-o,--output", output, "report file (default stdout)");
  aflags.add_to(an);

  auto* bench = app.add_subcommand("bench", "run a Monte Carlo benchmark");
  bench->add_option("spec", spec_path, "experiment JSON or preset name")->required();
  bench->add_option("-o,--outdir", outdir, "output directory")->required();
  bench->add_option("--n-mc", n_mc, "override the number of realizations");
  bench->add_option("--threads", threads, "worker threads (default PLEADER_THREADS or all cores)");

  auto* hrv = app.add_subcommand("hrv", "resample and analyze an RR interval file");
  hrv->add_option("rr", input, "RR file: one interval per line or 'time rr' pairs")->required();
  hrv->add_option("--fs", fs, "resampling frequency in Hz")->capture_default_str();
  hrv->add_option("-o,--output", output, "report file (default stdout)");
  hrv->add_option("--resampled", resampled, "also write the resampled series as CSV");
  hflags.add_to(hrv);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << '\n';
    return kExitUser;
  }

  try {
    if (synth->parsed()) cmd_synth(spec_path, realization, output, out);
    if (an->parsed()) cmd_analyze(input, aflags, output, out);
    if (bench->parsed()) cmd_bench(spec_path, outdir, n_mc, threads, out);
    if (hrv->parsed()) cmd_hrv(input, fs, hflags, output, resampled, out);
  } catch (const Error& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: " << e.kind() << ": " << msg << '\n';
    return kExitUser;
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: internal: " << msg << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace pleader

#pragma once

// File formats: signals as headered CSV, pyramids and analysis reports as
// versioned JSON carrying the octave index convention.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "pleader/analysis.hpp"
#include "pleader/wavelet.hpp"

namespace pleader::io {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kIndexConvention = "octave 1 = finest, increasing toward coarse";

// Non-finite reals are written as the strings "inf", "-inf", "nan".
Json number(double v);
double to_number(const Json& j);

// "index,value" for 1D, "row,col,value" for 2D; 17 significant digits.
void write_signal_csv(const Signal& signal, std::ostream& out);
Signal read_signal_csv(std::istream& in, double sample_period = 1.0);

Json pyramid_to_json(const WaveletPyramid& pyramid);
WaveletPyramid pyramid_from_json(const Json& doc);

Json report_to_json(const AnalysisReport& report);

// Reads a signal CSV or a pyramid JSON (decided by the first non-blank
// character) and returns the pyramid to analyze.
WaveletPyramid load_pyramid(const std::string& path, int n_vanishing_moments);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace pleader::io

#pragma once

// Time-domain synthesis of the benchmark processes.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pleader/mfa.hpp"
#include "pleader/rng.hpp"
#include "pleader/wavelet.hpp"

namespace pleader {

enum class ProcessKind { fbm, mrw, levy };

const char* to_string(ProcessKind kind);
ProcessKind process_kind_from_string(const std::string& name);

struct ProcessSpec {
  ProcessKind kind = ProcessKind::fbm;
  double hurst = 0.7;
  // MRW intermittency; the log-cumulant c2 of the process is -lambda^2.
  double lambda = 0.0;
  // Stability index of the Levy increments.
  double alpha = 1.5;
  std::size_t length = 1 << 15;
  std::uint64_t seed = 0;
  // Order of fractional integration applied to the increments (negative
  // values differentiate).
  double frac_order = 0.0;
  // MRW integral scale; 0 means the signal length.
  double integral_scale = 0.0;

  void validate() const;
};

// Zero-mean stationary Gaussian sequence with autocovariance `cov(lag)` by
// circulant embedding. The embedding doubles (up to 3 times) while it has
// significantly negative eigenvalues; then ParameterError.
std::vector<double> circulant_gaussian(const std::function<double(std::size_t)>& cov,
                                       std::size_t length, Rng& rng);

// Unit-variance fractional Gaussian noise autocovariance.
double fgn_covariance(double hurst, std::size_t lag);

std::vector<double> synth_fgn(double hurst, std::size_t length, Rng& rng);

Signal synth_fbm(double hurst, std::size_t length, std::uint64_t seed,
                 std::uint64_t realization = 0);

// Increments fGn(H)_i * exp(omega_i) with omega Gaussian,
// Cov(omega_i, omega_k) = lambda^2 ln+(L / (|i-k| + 1)) and E[omega] = -Var(omega).
Signal synth_mrw(double hurst, double lambda, std::size_t length, std::uint64_t seed,
                 std::uint64_t realization = 0, double integral_scale = 0.0);

// Symmetric alpha-stable increments (Chambers-Mallows-Stuck), unit scale.
std::vector<double> stable_increments(double alpha, std::size_t length, Rng& rng);
Signal synth_levy(double alpha, std::size_t length, std::uint64_t seed,
                  std::uint64_t realization = 0);

// Fourier multiplier |omega|^{-s} (zero frequency untouched) on the periodized signal.
Signal fractional_integrate(const Signal& signal, double s);

// Full synthesis for one realization; a non-zero frac_order is applied to the
// increments before the cumulative sum.
Signal synthesize(const ProcessSpec& spec, std::uint64_t realization = 0);

// Increments and cumulative sums of 1D signals.
std::vector<double> increments(std::span<const double> path);
std::vector<double> cumulative_sum(std::span<const double> steps);

// Order s such that eta(p) + s p crosses zero at p0, from eta estimated on the
// base process (linear interpolation in the sampled grid).
double fractional_order_for_p0(std::span<const EtaSample> base_eta, double target_p0);

// log-cumulant targets of a process spec (c1 shifted by frac_order).
struct LogCumulantTruth {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};
LogCumulantTruth analytic_log_cumulants(const ProcessSpec& spec);

}  // namespace pleader

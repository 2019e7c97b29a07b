#pragma once

// Discrete wavelet decomposition into an L1-normalized coefficient pyramid.
//
// Index convention used throughout the library: octave j = 1 is the finest
// scale and j increases toward coarse scales. Octave j of an N-sample signal
// holds N / 2^j coefficients (per axis). With L1 normalization the
// coefficients of a function with uniform regularity h behave like 2^{j h}.

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace pleader {

// Uniformly sampled 1D or 2D data. 2D values are stored row-major.
struct Signal {
  std::vector<double> values;
  std::size_t rows = 1;
  std::size_t cols = 0;
  int dim = 1;
  double sample_period = 1.0;

  static Signal make_1d(std::vector<double> values, double sample_period = 1.0);
  static Signal make_2d(std::vector<double> values, std::size_t rows, std::size_t cols,
                        double sample_period = 1.0);

  std::size_t size() const noexcept { return values.size(); }
  // Shortest axis length.
  std::size_t min_extent() const noexcept { return dim == 1 ? cols : std::min(rows, cols); }
};

enum class Boundary { periodic };

struct Octave {
  std::size_t rows = 1;
  std::size_t cols = 0;
  // One subband for d = 1, three for d = 2, each rows*cols values row-major.
  std::vector<std::vector<double>> subbands;

  std::size_t count() const noexcept { return rows * cols; }
};

struct WaveletPyramid {
  int dim = 1;
  // 0 for pyramids synthesized directly in the wavelet domain (cascades).
  int n_vanishing_moments = 0;
  Boundary boundary = Boundary::periodic;
  // octaves[0] is octave j = 1 (finest).
  std::vector<Octave> octaves;
  // Coarsest approximation, kept in L2 normalization. Empty for cascades.
  std::vector<double> approximation;

  int num_octaves() const noexcept { return static_cast<int>(octaves.size()); }
  const Octave& octave(int j) const { return octaves.at(static_cast<std::size_t>(j - 1)); }
  Octave& octave(int j) { return octaves.at(static_cast<std::size_t>(j - 1)); }
  int subband_count() const noexcept { return dim == 1 ? 1 : 3; }

  // Throws ParameterError when subband counts, halving or finiteness fail.
  void validate() const;
};

struct FilterPair {
  std::vector<double> low;
  std::vector<double> high;
};

// Orthonormal Daubechies conjugate-quadrature pair of length 2*n_vanishing_moments,
// obtained by spectral factorization (minimum-phase root selection).
// Throws ParameterError outside 1..10.
FilterPair daubechies_filter(int n_vanishing_moments);

// Deepest decomposition possible for an axis of `length` samples: the input to
// every step must be even and at least as long as the filter.
int max_feasible_octaves(std::size_t length, int n_vanishing_moments);

// Periodic fast wavelet transform. max_octaves <= 0 selects the deepest
// feasible depth. Throws DepthError when the signal is too short.
WaveletPyramid dwt(const Signal& signal, int n_vanishing_moments, int max_octaves = 0);

// Factor applied to L2 fast-transform outputs at octave j to get L1 coefficients.
double l1_factor(int octave, int dim);

}  // namespace pleader

#include <doctest.h>

#include <cmath>
#include <numeric>

#include "pleader/errors.hpp"
#include "pleader/wavelet.hpp"

using namespace pleader;

namespace {

// Published db3 scaling filter.
const double kDb3[] = {0.33267055295008261, 0.80689150931109257,  0.45987750211849154,
                       -0.13501102001025458, -0.085441273882026661, 0.035226291885709536};

double l2_coefficient(const WaveletPyramid& p, int j, std::size_t band, std::size_t k) {
  return p.octave(j).subbands[band][k] / l1_factor(j, p.dim);
}

std::vector<double> random_values(std::size_t n, unsigned seed) {
  std::vector<double> v(n);
  unsigned s = seed;
  for (auto& x : v) {
    s = s * 1103515245u + 12345u;
    x = static_cast<double>((s >> 8) % 20001) / 10000.0 - 1.0;
  }
  return v;
}

}  // namespace

TEST_CASE("haar taps") {
  const auto f = daubechies_filter(1);
  REQUIRE(f.low.size() == 2);
  CHECK(f.low[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(f.low[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("db3 taps match the published table") {
  const auto f = daubechies_filter(3);
  REQUIRE(f.low.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(f.low[i] - kDb3[i]) < 1e-12);
}

TEST_CASE("orthonormality and vanishing moments for every order") {
  for (int n = 1; n <= 10; ++n) {
    CAPTURE(n);
    const auto f = daubechies_filter(n);
    const std::size_t L = f.low.size();
    REQUIRE(L == static_cast<std::size_t>(2 * n));
    for (std::size_t shift = 0; shift < L; shift += 2) {
      double dot = 0.0;
      for (std::size_t i = 0; i + shift < L; ++i) dot += f.low[i] * f.low[i + shift];
      CHECK(dot == doctest::Approx(shift == 0 ? 1.0 : 0.0).scale(1.0).epsilon(1e-10));
    }
    for (int m = 0; m < n; ++m) {
      double moment = 0.0;
      for (std::size_t i = 0; i < L; ++i) moment += std::pow(static_cast<double>(i), m) * f.high[i];
      CHECK(std::abs(moment) < 1e-7 * std::pow(static_cast<double>(L), m));
    }
  }
}

TEST_CASE("filter order outside 1..10 is rejected") {
  CHECK_THROWS_AS(daubechies_filter(0), ParameterError);
  CHECK_THROWS_AS(daubechies_filter(11), ParameterError);
}

TEST_CASE("constant signal has zero details") {
  const auto pyr = dwt(Signal::make_1d(std::vector<double>(256, 3.5)), 3);
  for (const auto& oc : pyr.octaves)
    for (double c : oc.subbands[0]) CHECK(std::abs(c) < 1e-12);
}

TEST_CASE("ramp has zero interior details with two vanishing moments") {
  std::vector<double> ramp(512);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.25 * static_cast<double>(i) - 7.0;
  const auto pyr = dwt(Signal::make_1d(ramp), 2, 4);
  for (int j = 1; j <= 4; ++j) {
    const auto& c = pyr.octave(j).subbands[0];
    // The last coefficients straddle the periodic wrap.
    for (std::size_t k = 0; k + 3 < c.size(); ++k) CHECK(std::abs(c[k]) < 1e-9);
  }
}

TEST_CASE("impulse response at octave 1 is the high-pass filter") {
  const auto f = daubechies_filter(3);
  const std::size_t n = 64, k0 = 20;
  std::vector<double> x(n, 0.0);
  x[k0] = 1.0;
  const auto pyr = dwt(Signal::make_1d(x), 3, 1);
  // d[k] = sum_m g[m] x[2k + m]  ->  d[k] = g[k0 - 2k] when 0 <= k0 - 2k < 6.
  for (std::size_t k = 0; k < n / 2; ++k) {
    const long m = static_cast<long>(k0) - 2 * static_cast<long>(k);
    const double expected = (m >= 0 && m < 6) ? f.high[static_cast<std::size_t>(m)] : 0.0;
    CHECK(l2_coefficient(pyr, 1, 0, k) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("energy is preserved in L2 bookkeeping") {
  SUBCASE("1D") {
    const auto x = random_values(1024, 7);
    const auto pyr = dwt(Signal::make_1d(x), 3);
    double e = 0.0;
    for (int j = 1; j <= pyr.num_octaves(); ++j)
      for (std::size_t k = 0; k < pyr.octave(j).count(); ++k) e += std::pow(l2_coefficient(pyr, j, 0, k), 2);
    for (double a : pyr.approximation) e += a * a;
    const double ref = std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
    CHECK(std::abs(e - ref) < 1e-9 * ref);
  }
  SUBCASE("2D") {
    const auto x = random_values(64 * 32, 11);
    const auto pyr = dwt(Signal::make_2d(x, 64, 32), 2);
    double e = 0.0;
    for (int j = 1; j <= pyr.num_octaves(); ++j)
      for (std::size_t b = 0; b < 3; ++b)
        for (std::size_t k = 0; k < pyr.octave(j).count(); ++k) e += std::pow(l2_coefficient(pyr, j, b, k), 2);
    for (double a : pyr.approximation) e += a * a;
    const double ref = std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
    CHECK(std::abs(e - ref) < 1e-9 * ref);
  }
}

TEST_CASE("circular shift by 2^j shifts octave j by one") {
  const auto x = random_values(256, 3);
  const auto base = dwt(Signal::make_1d(x), 3);
  for (int j = 1; j <= 3; ++j) {
    const std::size_t s = std::size_t{1} << j;
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[(i + s) % x.size()] = x[i];
    const auto shifted = dwt(Signal::make_1d(y), 3);
    const auto& a = base.octave(j).subbands[0];
    const auto& b = shifted.octave(j).subbands[0];
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(b[(k + 1) % a.size()] == doctest::Approx(a[k]).epsilon(1e-12));
  }
}

TEST_CASE("L1 normalization factor") {
  CHECK(l1_factor(1, 1) == doctest::Approx(std::pow(2.0, -0.5)));
  CHECK(l1_factor(3, 2) == doctest::Approx(0.125));
}

TEST_CASE("pyramid shape: halving and subband counts") {
  const auto pyr = dwt(Signal::make_2d(random_values(128 * 64, 5), 128, 64), 3);
  CHECK(pyr.num_octaves() == max_feasible_octaves(64, 3));
  for (int j = 1; j <= pyr.num_octaves(); ++j) {
    CHECK(pyr.octave(j).rows == (std::size_t{128} >> j));
    CHECK(pyr.octave(j).cols == (std::size_t{64} >> j));
    CHECK(pyr.octave(j).subbands.size() == 3);
  }
  CHECK_NOTHROW(pyr.validate());
}

TEST_CASE("too deep a decomposition reports the feasible depth") {
  try {
    dwt(Signal::make_1d(std::vector<double>(64, 1.0)), 3, 8);
    FAIL("expected DepthError");
  } catch (const DepthError& e) {
    CHECK(e.max_feasible() == max_feasible_octaves(64, 3));
  }
  CHECK(max_feasible_octaves(2048, 3) == 9);
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pleader/errors.hpp"
#include "pleader/processes.hpp"

using namespace pleader;

namespace {

double variance(const std::vector<double>& x) {
  double m = 0.0, s = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

}  // namespace

TEST_CASE("spec validation") {
  ProcessSpec s;
  s.length = 1000;
  CHECK_THROWS_AS(s.validate(), ParameterError);
  s.length = 1024;
  s.hurst = 1.0;
  CHECK_THROWS_AS(s.validate(), ParameterError);
  s.hurst = 0.5;
  s.kind = ProcessKind::levy;
  s.alpha = 2.5;
  CHECK_THROWS_AS(s.validate(), ParameterError);
  s.kind = ProcessKind::mrw;
  s.lambda = -0.1;
  CHECK_THROWS_AS(s.validate(), ParameterError);
  CHECK_THROWS_AS(process_kind_from_string("bm"), ParameterError);
  CHECK(process_kind_from_string("levy") == ProcessKind::levy);
}

TEST_CASE("fGn autocovariance") {
  for (std::size_t k = 0; k < 5; ++k) CHECK(fgn_covariance(0.5, k) == doctest::Approx(k == 0 ? 1.0 : 0.0).scale(1.0));
  CHECK(fgn_covariance(0.7, 1) == doctest::Approx(std::pow(2.0, 1.4) / 2.0 - 1.0));
  CHECK(fgn_covariance(0.3, 1) < 0.0);
}

TEST_CASE("circulant embedding reproduces the covariance") {
  const double h = 0.7;
  const std::size_t n = 1024;
  const int reps = 200;
  std::vector<double> acc(11, 0.0);
  for (int r = 0; r < reps; ++r) {
    Rng rng(11, static_cast<std::uint64_t>(r));
    const auto x = synth_fgn(h, n, rng);
    for (std::size_t lag = 0; lag <= 10; ++lag) {
      double s = 0.0;
      for (std::size_t i = 0; i + lag < n; ++i) s += x[i] * x[i + lag];
      acc[lag] += s / static_cast<double>(n - lag);
    }
  }
  for (std::size_t lag = 0; lag <= 10; ++lag) {
    CAPTURE(lag);
    CHECK(std::abs(acc[lag] / reps - fgn_covariance(h, lag)) < 4.0 / std::sqrt(static_cast<double>(reps)) * 0.25);
  }
}

TEST_CASE("synthesis is a function of seed and realization") {
  ProcessSpec s;
  s.kind = ProcessKind::mrw;
  s.hurst = 0.84;
  s.lambda = std::sqrt(0.08);
  s.length = 4096;
  s.seed = 5;
  CHECK(synthesize(s, 2).values == synthesize(s, 2).values);
  CHECK(synthesize(s, 2).values != synthesize(s, 3).values);
  s.seed = 6;
  const auto other = synthesize(s, 2).values;
  s.seed = 5;
  CHECK(synthesize(s, 2).values != other);
}

TEST_CASE("MRW increments") {
  SUBCASE("lambda = 0 is fBm") {
    const auto a = synth_mrw(0.7, 0.0, 2048, 3, 1);
    const auto b = synth_fbm(0.7, 2048, 3, 1);
    CHECK(a.values == b.values);
  }
  SUBCASE("unit variance") {
    double v = 0.0;
    const int reps = 20;
    for (int r = 0; r < reps; ++r) {
      const auto x = synth_mrw(0.84, std::sqrt(0.08), 1 << 14, 8, static_cast<std::uint64_t>(r));
      v += variance(increments(x.values));
    }
    CHECK(v / reps == doctest::Approx(1.0).epsilon(0.1));
  }
  SUBCASE("fatter tails than fBm") {
    auto kurt = [](const std::vector<double>& x) {
      double m2 = 0, m4 = 0;
      for (double v : x) { m2 += v * v; m4 += v * v * v * v; }
      const double n = static_cast<double>(x.size());
      return (m4 / n) / ((m2 / n) * (m2 / n));
    };
    const auto m = increments(synth_mrw(0.5, 0.4, 1 << 15, 2).values);
    const auto f = increments(synth_fbm(0.5, 1 << 15, 2).values);
    CHECK(kurt(f) == doctest::Approx(3.0).epsilon(0.1));
    CHECK(kurt(m) > 3.5);
  }
}

TEST_CASE("stable increments") {
  SUBCASE("alpha = 2 is Gaussian with variance 2") {
    Rng rng(1);
    const auto x = stable_increments(2.0, 1 << 16, rng);
    double m2 = 0, m4 = 0;
    for (double v : x) { m2 += v * v; m4 += v * v * v * v; }
    m2 /= x.size();
    m4 /= x.size();
    CHECK(m2 == doctest::Approx(2.0).epsilon(0.03));
    CHECK(m4 / (m2 * m2) == doctest::Approx(3.0).epsilon(0.05));
  }
  SUBCASE("alpha = 1 is standard Cauchy") {
    Rng rng(2);
    auto x = stable_increments(1.0, 1 << 16, rng);
    for (double& v : x) v = std::abs(v);
    std::nth_element(x.begin(), x.begin() + x.size() / 2, x.end());
    CHECK(x[x.size() / 2] == doctest::Approx(1.0).epsilon(0.03));
  }
  SUBCASE("Hill estimator recovers the tail index") {
    for (double alpha : {0.8, 1.2, 1.6}) {
      Rng rng(3);
      auto x = stable_increments(alpha, 1 << 17, rng);
      for (double& v : x) v = std::abs(v);
      std::sort(x.begin(), x.end(), std::greater<>());
      const std::size_t k = 500;
      double s = 0.0;
      for (std::size_t i = 0; i < k; ++i) s += std::log(x[i] / x[k]);
      CAPTURE(alpha);
      CHECK(static_cast<double>(k) / s == doctest::Approx(alpha).epsilon(0.12));
    }
  }
}

TEST_CASE("fractional integration") {
  const std::size_t n = 1024;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(2.0 * std::numbers::pi * 8.0 * i / n) + 0.3;
  const auto sig = Signal::make_1d(v);
  CHECK(fractional_integrate(sig, 0.0).values == v);
  const double s = 0.6;
  const auto out = fractional_integrate(sig, s);
  const double gain = std::pow(2.0 * std::numbers::pi * 8.0 / n, -s);
  for (std::size_t i = 0; i < n; i += 37)
    CHECK(out.values[i] == doctest::Approx(gain * (v[i] - 0.3) + 0.3).epsilon(1e-10));
  Rng rng(4);
  std::vector<double> w(n);
  for (double& x : w) x = rng.normal();
  const auto back = fractional_integrate(fractional_integrate(Signal::make_1d(w), 0.4), -0.4);
  for (std::size_t i = 0; i < n; ++i) CHECK(back.values[i] == doctest::Approx(w[i]).epsilon(1e-9));
  CHECK_THROWS_AS(fractional_integrate(Signal::make_2d(std::vector<double>(16), 4, 4), 0.5),
                  ParameterError);
}

TEST_CASE("increments and cumulative sums are inverse") {
  const std::vector<double> x = {1.0, -2.0, 0.5, 4.0};
  const auto c = cumulative_sum(x);
  CHECK(c == std::vector<double>{1.0, -1.0, -0.5, 3.5});
  CHECK(increments(c) == x);
}

TEST_CASE("fractional order for a target critical exponent") {
  // Base eta(p) = 0.2 p - 0.1 p^2 crosses zero at p = 2; shifting by s p moves it.
  std::vector<EtaSample> eta;
  for (double p = 0.5; p <= 8.0; p += 0.5) eta.push_back({p, 0.2 * p - 0.1 * p * p, 0.0});
  for (double p0 : {1.0, 3.0, 6.0}) {
    const double s = fractional_order_for_p0(eta, p0);
    CHECK(0.2 * p0 - 0.1 * p0 * p0 + s * p0 == doctest::Approx(0.0).scale(1.0));
  }
  // Between grid points the interpolated eta is used.
  const double s = fractional_order_for_p0(eta, 1.25);
  const double interp = 0.5 * ((0.2 - 0.1) + (0.3 - 0.225));
  CHECK(s == doctest::Approx(-interp / 1.25));
  CHECK(fractional_order_for_p0(eta, kInf) == 0.0);
  CHECK_THROWS_AS(fractional_order_for_p0(eta, 20.0), ParameterError);
  CHECK_THROWS_AS(fractional_order_for_p0(eta, -1.0), ParameterError);
  CHECK_THROWS_AS(fractional_order_for_p0(std::span<const EtaSample>(eta.data(), 1), 1.0), ParameterError);
}

TEST_CASE("analytic log-cumulants") {
  ProcessSpec s;
  s.kind = ProcessKind::mrw;
  s.hurst = 0.84;
  s.lambda = std::sqrt(0.08);
  auto t = analytic_log_cumulants(s);
  CHECK(t.c1 == doctest::Approx(0.88));
  CHECK(t.c2 == doctest::Approx(-0.08));
  s.frac_order = -0.5;
  CHECK(analytic_log_cumulants(s).c1 == doctest::Approx(0.38));
  s = ProcessSpec{};
  s.kind = ProcessKind::levy;
  s.alpha = 0.8;
  t = analytic_log_cumulants(s);
  CHECK(t.c1 == doctest::Approx(1.25));
  CHECK(t.c2 == 0.0);
}

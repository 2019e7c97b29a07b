#include "pleader/fft.hpp"

#include <mutex>

#include <fftw3.h>

namespace pleader::fft {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex planner_mutex;

void transform(std::vector<std::complex<double>>& data, int sign) {
  if (data.empty()) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex);
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex);
  fftw_destroy_plan(plan);
}

}  // namespace

void forward(std::vector<std::complex<double>>& data) { transform(data, FFTW_FORWARD); }
void backward(std::vector<std::complex<double>>& data) { transform(data, FFTW_BACKWARD); }

}  // namespace pleader::fft

#pragma once

#include <complex>
#include <vector>

namespace pleader::fft {

// In-place unnormalized complex DFT (forward: exp(-2 pi i jk/n)).
void forward(std::vector<std::complex<double>>& data);
// In-place unnormalized inverse DFT (no 1/n factor).
void backward(std::vector<std::complex<double>>& data);

}  // namespace pleader::fft

#pragma once

#include <complex>
#include <vector>

namespace oamsim::detail {

enum class FftDirection { forward, inverse };

/// In-place unnormalized 2D DFT of an n x n row-major array (FFTW).
/// forward uses exp(-2 pi i k j / n); inverse uses exp(+...) without the 1/n^2.
void fft2(std::vector<std::complex<double>>& data, int n, FftDirection dir);

} // namespace oamsim::detail

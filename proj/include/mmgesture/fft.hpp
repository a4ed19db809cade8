#pragma once

#include <span>

#include "mmgesture/common.hpp"

namespace mmg {

/// In-place forward DFT, X[k] = sum_n x[n] exp(-j 2 pi k n / size), backed
/// by a cached FFTW plan. Safe to call from several threads at once.
void fft_forward(std::span<Complex> data);

/// Moves the zero-frequency bin to index size/2.
void fft_shift(std::span<Complex> data);

/// Hann taper of the given length (symmetric form).
std::vector<double> hann_window(std::size_t length);

}  // namespace mmg

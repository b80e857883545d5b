#pragma once

// Thin wrapper over FFTW. Plans are created once per (size, direction) under
// a lock and executed with the new-array interface, which is thread-safe.

#include <complex>
#include <cstddef>
#include <span>

namespace subplanck::detail {

enum class FftDirection { forward, backward };

/// Unnormalised in-place DFT.
///   forward:  X_k = sum_j x_j exp(-2 pi i jk/n)
///   backward: x_j = sum_k X_k exp(+2 pi i jk/n)
void fft_inplace(std::span<std::complex<double>> data, FftDirection dir);

}  // namespace subplanck::detail

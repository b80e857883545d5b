#pragma once

// Grid-aware spectral helpers shared by the core modules.

#include <complex>
#include <span>
#include <vector>

#include "subplanck/grid.hpp"

namespace subplanck::detail {

/// Centred unitary forward transform (see to_momentum).
std::vector<cplx> forward_centered(const GridSpec& grid, std::span<const cplx> psi);

/// Inverse of forward_centered.
std::vector<cplx> inverse_centered(const GridSpec& grid, std::span<const cplx> phi);

/// Physical momentum of raw FFT bin k (Nyquist bin maps to p_min).
double bin_momentum(const GridSpec& grid, std::size_t k);

enum class Nyquist { unitary, symmetric };

/// Returns f(x_i - shift) for the band-limited periodic interpolant of f.
/// Nyquist::unitary keeps the transform unitary; Nyquist::symmetric replaces
/// the Nyquist phase by its real part so that shifting commutes with complex
/// conjugation (used for interpolation).
std::vector<cplx> shift_spectral(const GridSpec& grid, std::span<const cplx> f, double shift,
                                 Nyquist mode = Nyquist::unitary);

}  // namespace subplanck::detail

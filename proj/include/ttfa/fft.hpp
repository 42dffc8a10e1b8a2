// fft.hpp - discrete Fourier machinery on centered grids.
//
// fourier_transform realizes fhat(w) = (2pi)^{-d/2} Int f(x) e^{sign*i x.w} dx
// (sign = -1 forward, +1 inverse) on the dual grid, by FFT with the phase
// corrections for grids starting at -L. fractional_shift is the band-limited
// (periodic) shift via an FFT phase ramp. ft_on_grid evaluates the same
// continuous-FT quadrature on an arbitrary uniform target grid by direct
// per-axis contraction; it is exact to quadrature (no interpolation) and is
// what the scaled Fourier operator U_lambda uses.
#pragma once

#include <vector>

#include "ttfa/grid.hpp"

namespace ttfa {

// Raw unnormalized multi-dim DFT, all axes; sign -1 maps to FFTW_FORWARD.
void dft_inplace(std::vector<cplx>& data, const std::vector<int>& shape, int sign);

// DFT along the last axis only (contiguous), unnormalized.
void dft_last_axis(std::vector<cplx>& data, std::size_t howmany, int n, int sign);

SampledField fourier_transform(const SampledField& f, int sign);

SampledField fractional_shift(const SampledField& f, std::span<const double> shift);

// Continuous-FT quadrature of f evaluated at the points of `target`
// (uniform, centered), with the same (2pi)^{-d/2} convention.
// Target points beyond the Nyquist band of f's grid alias; callers are
// expected to keep targets in-band (see u_lambda_apply's coverage check).
SampledField ft_on_grid(const SampledField& f, const BoxGrid& target, int sign);

}  // namespace ttfa

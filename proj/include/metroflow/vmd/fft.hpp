#pragma once

#include <complex>
#include <span>
#include <vector>

namespace metroflow::fft {

using Complex = std::complex<double>;

/// Non-negative half of the DFT of a real signal: n / 2 + 1 bins, unnormalized.
std::vector<Complex> forward_half(std::span<const double> signal);

/// Inverse of forward_half for a length-n signal. The half spectrum is
/// completed by Hermitian symmetry; the result is divided by n.
std::vector<double> inverse_half(std::span<const Complex> half, std::size_t n);

} // namespace metroflow::fft

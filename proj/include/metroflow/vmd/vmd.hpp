#pragma once

#include "metroflow/vmd/fft.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace metroflow {

enum class OmegaInit { uniform, zero, random };

std::string to_string(OmegaInit init);
OmegaInit omega_init_from_string(const std::string& text);

struct VmdConfig {
    int k = 3;
    /// Bandwidth penalty.
    double alpha = 2000.0;
    /// Dual-ascent step; 0 freezes the multiplier.
    double tau = 0.0;
    double tol = 1e-7;
    int max_iter = 500;
    OmegaInit init_omega = OmegaInit::uniform;
    std::uint64_t seed = 0;
    /// Keep the first center frequency at zero.
    bool pin_dc = false;
    /// Reflect half the signal at each end before transforming.
    bool mirror_extend = true;

    void validate() const;
    bool operator==(const VmdConfig&) const = default;
};

/// Band-limited modes sorted by center frequency (cycles/sample, ascending).
struct ModeSet {
    std::vector<std::vector<double>> modes;
    std::vector<double> center_freqs;
    std::vector<double> residual;
    int iterations_used = 0;
    bool converged = false;

    std::size_t k() const { return modes.size(); }
    std::size_t length() const { return residual.size(); }
};

/// ADMM iterate state over the non-negative half-spectrum.
struct VmdSolverState {
    std::vector<std::vector<fft::Complex>> mode_spectra;
    std::vector<fft::Complex> multiplier;
    std::vector<double> omega;
    int iteration = 0;
};

/**
 * Variational mode decomposition.
 *
 * Each sweep applies, for every mode in turn, the Wiener-filter update
 *   u_k(w) = (f(w) - sum_{i != k} u_i(w) + lambda(w) / 2) / (1 + 2 alpha (w - w_k)^2),
 * then moves w_k to the power-weighted centroid of |u_k(w)|^2 over w in [0, 0.5],
 * and finally ascends the multiplier: lambda += tau (f - sum_k u_k).
 * Iteration stops once sum_k |u_k^{n+1} - u_k^n|^2 / |u_k^n|^2 < tol.
 *
 * Throws DataError when the signal is shorter than 4k or not finite.
 */
ModeSet vmd_decompose(std::span<const double> signal, const VmdConfig& config);

/// Sum of modes (ascending index) plus residual.
std::vector<double> reconstruct(const ModeSet& modes);

/**
 * Squared L2 norm of d/dt [analytic(mode) * exp(-j 2 pi omega t)], evaluated
 * in the frequency domain with Parseval's identity. `omega` is in cycles/sample.
 */
double mode_bandwidth(std::span<const double> mode, double omega);

} // namespace metroflow

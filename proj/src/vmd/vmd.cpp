#include "metroflow/vmd/vmd.hpp"

#include "metroflow/core/error.hpp"
#include "metroflow/core/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace metroflow {

namespace {

constexpr double kNormFloor = 1e-14;

std::vector<double> initial_omega(const VmdConfig& config) {
    const auto k = static_cast<std::size_t>(config.k);
    std::vector<double> omega(k, 0.0);
    switch (config.init_omega) {
    case OmegaInit::uniform:
        for (std::size_t i = 0; i < k; ++i) {
            omega[i] = static_cast<double>(i) / (2.0 * static_cast<double>(k));
        }
        break;
    case OmegaInit::zero:
        break;
    case OmegaInit::random: {
        Rng rng(config.seed);
        std::uniform_real_distribution<double> u(0.0, 0.5);
        for (auto& w : omega) w = u(rng);
        std::sort(omega.begin(), omega.end());
        break;
    }
    }
    if (config.pin_dc) omega[0] = 0.0;
    return omega;
}

double squared_norm(const std::vector<fft::Complex>& v) {
    double acc = 0.0;
    for (const auto& c : v) acc += std::norm(c);
    return acc;
}

} // namespace

std::string to_string(OmegaInit init) {
    switch (init) {
    case OmegaInit::uniform: return "uniform";
    case OmegaInit::zero: return "zero";
    case OmegaInit::random: return "random";
    }
    return "uniform";
}

OmegaInit omega_init_from_string(const std::string& text) {
    if (text == "uniform") return OmegaInit::uniform;
    if (text == "zero") return OmegaInit::zero;
    if (text == "random") return OmegaInit::random;
    throw ConfigError("unknown omega initialization '" + text + "'");
}

void VmdConfig::validate() const {
    if (k < 1) throw ConfigError("vmd: k must be at least 1");
    if (!(alpha > 0.0)) throw ConfigError("vmd: alpha must be positive");
    if (!(tau >= 0.0)) throw ConfigError("vmd: tau must be nonnegative");
    if (!(tol > 0.0)) throw ConfigError("vmd: tol must be positive");
    if (max_iter < 1) throw ConfigError("vmd: max_iter must be positive");
}

ModeSet vmd_decompose(std::span<const double> signal, const VmdConfig& config) {
    config.validate();
    const std::size_t n = signal.size();
    const auto k = static_cast<std::size_t>(config.k);
    if (n < 4 * k) throw DataError("vmd: signal too short for " + std::to_string(k) + " modes");
    for (const double v : signal) {
        if (!std::isfinite(v)) throw DataError("vmd: signal contains non-finite values");
    }

    std::size_t left = 0;
    std::vector<double> extended;
    if (config.mirror_extend) {
        left = n / 2;
        const std::size_t right = n - left;
        extended.reserve(2 * n);
        for (std::size_t i = 0; i < left; ++i) extended.push_back(signal[left - 1 - i]);
        extended.insert(extended.end(), signal.begin(), signal.end());
        for (std::size_t i = 0; i < right; ++i) extended.push_back(signal[n - 1 - i]);
    } else {
        extended.assign(signal.begin(), signal.end());
    }
    const std::size_t m = extended.size();

    const std::vector<fft::Complex> f_hat = fft::forward_half(extended);
    const std::size_t bins = f_hat.size();
    std::vector<double> freqs(bins);
    for (std::size_t j = 0; j < bins; ++j) freqs[j] = static_cast<double>(j) / static_cast<double>(m);

    VmdSolverState state;
    state.mode_spectra.assign(k, std::vector<fft::Complex>(bins));
    state.multiplier.assign(bins, fft::Complex{});
    state.omega = initial_omega(config);

    std::vector<fft::Complex> total(bins);
    std::vector<fft::Complex> updated(bins);
    bool converged = false;
    while (state.iteration < config.max_iter) {
        ++state.iteration;
        double change = 0.0;
        for (std::size_t mode = 0; mode < k; ++mode) {
            auto& u = state.mode_spectra[mode];
            const double w_k = state.omega[mode];
            double diff2 = 0.0;
            double power = 0.0;
            double weighted = 0.0;
            for (std::size_t j = 0; j < bins; ++j) {
                const fft::Complex others = total[j] - u[j];
                const double dw = freqs[j] - w_k;
                updated[j] = (f_hat[j] - others + 0.5 * state.multiplier[j]) / (1.0 + 2.0 * config.alpha * dw * dw);
                diff2 += std::norm(updated[j] - u[j]);
                const double p = std::norm(updated[j]);
                power += p;
                weighted += freqs[j] * p;
            }
            change += diff2 / std::max(squared_norm(u), kNormFloor);
            for (std::size_t j = 0; j < bins; ++j) {
                total[j] += updated[j] - u[j];
                u[j] = updated[j];
            }
            if (!(config.pin_dc && mode == 0) && power > 0.0) state.omega[mode] = weighted / power;
        }
        if (config.tau > 0.0) {
            for (std::size_t j = 0; j < bins; ++j) state.multiplier[j] += config.tau * (f_hat[j] - total[j]);
        }
        if (change < config.tol) {
            converged = true;
            break;
        }
    }

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return state.omega[a] < state.omega[b]; });

    ModeSet out;
    out.iterations_used = state.iteration;
    out.converged = converged;
    out.residual.assign(signal.begin(), signal.end());
    std::vector<double> sum(n, 0.0);
    for (const std::size_t idx : order) {
        const std::vector<double> full = fft::inverse_half(state.mode_spectra[idx], m);
        std::vector<double> mode(full.begin() + static_cast<std::ptrdiff_t>(left),
                                 full.begin() + static_cast<std::ptrdiff_t>(left + n));
        for (std::size_t t = 0; t < n; ++t) sum[t] += mode[t];
        out.modes.push_back(std::move(mode));
        out.center_freqs.push_back(std::clamp(state.omega[idx], 0.0, std::nextafter(0.5, 0.0)));
    }
    for (std::size_t t = 0; t < n; ++t) out.residual[t] = signal[t] - sum[t];
    return out;
}

std::vector<double> reconstruct(const ModeSet& modes) {
    std::vector<double> out(modes.length(), 0.0);
    for (const auto& mode : modes.modes) {
        for (std::size_t t = 0; t < out.size(); ++t) out[t] += mode[t];
    }
    for (std::size_t t = 0; t < out.size(); ++t) out[t] += modes.residual[t];
    return out;
}

double mode_bandwidth(std::span<const double> mode, double omega) {
    const std::size_t n = mode.size();
    if (n == 0) throw DataError("mode_bandwidth: empty mode");
    const std::vector<fft::Complex> half = fft::forward_half(mode);
    double acc = 0.0;
    for (std::size_t j = 0; j < half.size(); ++j) {
        // One-sided analytic spectrum: interior bins doubled, DC and Nyquist kept.
        const bool edge = j == 0 || (n % 2 == 0 && j == n / 2);
        const double gain = edge ? 1.0 : 2.0;
        const double w = 2.0 * std::numbers::pi * (static_cast<double>(j) / static_cast<double>(n) - omega);
        acc += w * w * gain * gain * std::norm(half[j]);
    }
    return acc / static_cast<double>(n);
}

} // namespace metroflow

#include "metroflow/ensemble/components.hpp"

#include "metroflow/core/error.hpp"

#include <algorithm>
#include <numeric>

namespace metroflow {

namespace {

std::vector<double> last(const std::vector<double>& v, std::size_t n) {
    return {v.end() - static_cast<std::ptrdiff_t>(std::min(n, v.size())), v.end()};
}

std::vector<double> first(const std::vector<double>& v, std::size_t n) {
    return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(std::min(n, v.size()))};
}

/// Lag-1 autocorrelation of the seasonal differences, uncentered.
double seasonal_difference_carry(std::span<const double> x, std::size_t season) {
    double num = 0.0, den = 0.0;
    for (std::size_t t = season + 1; t < x.size(); ++t) {
        const double w = x[t] - x[t - season], w1 = x[t - 1] - x[t - 1 - season];
        num += w * w1;
        den += w1 * w1;
    }
    return den > 0.0 ? std::clamp(num / den, 0.0, 0.99) : 0.0;
}

} // namespace

std::string to_string(BoundaryExtension mode) {
    return mode == BoundaryExtension::seasonal_naive ? "seasonal_naive" : "seasonal_ar";
}

BoundaryExtension boundary_extension_from_string(const std::string& text) {
    if (text == "seasonal_naive") return BoundaryExtension::seasonal_naive;
    if (text == "seasonal_ar") return BoundaryExtension::seasonal_ar;
    throw ConfigError("unknown boundary extension '" + text + "' (expected seasonal_naive or seasonal_ar)");
}

ComponentTriple ComponentTriple::tail(std::size_t n) const {
    return {last(periodic, n), last(deterministic, n), last(volatility, n)};
}

ComponentTriple ComponentTriple::prefix(std::size_t n) const {
    return {first(periodic, n), first(deterministic, n), first(volatility, n)};
}

AssignedComponents assign_components(const ModeSet& modes) {
    if (modes.k() != 3) {
        throw DataError("component assignment needs exactly 3 modes, got " + std::to_string(modes.k()));
    }
    if (modes.center_freqs.size() != 3) throw DataError("component assignment: missing center frequencies");
    std::array<std::size_t, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return modes.center_freqs[a] < modes.center_freqs[b]; });
    AssignedComponents out;
    out.assignment.mode_index = order;
    for (std::size_t r = 0; r < 3; ++r) out.assignment.omega[r] = modes.center_freqs[order[r]];
    out.components.periodic = modes.modes[order[0]];
    out.components.deterministic = modes.modes[order[1]];
    out.components.volatility = modes.modes[order[2]];
    for (std::size_t t = 0; t < modes.residual.size(); ++t) out.components.volatility[t] += modes.residual[t];
    return out;
}

ModeSet decompose_level_adjusted(std::span<const double> signal, const VmdConfig& config) {
    if (signal.empty()) throw DataError("cannot decompose an empty series");
    const double level = std::accumulate(signal.begin(), signal.end(), 0.0) / static_cast<double>(signal.size());
    std::vector<double> centered(signal.begin(), signal.end());
    for (auto& v : centered) v -= level;
    ModeSet modes = vmd_decompose(centered, config);
    const auto lowest = static_cast<std::size_t>(
        std::min_element(modes.center_freqs.begin(), modes.center_freqs.end()) - modes.center_freqs.begin());
    for (auto& v : modes.modes[lowest]) v += level;
    // Re-derive the residual against the original input so the identity is exact.
    for (std::size_t t = 0; t < signal.size(); ++t) {
        double sum = 0.0;
        for (const auto& m : modes.modes) sum += m[t];
        modes.residual[t] = signal[t] - sum;
    }
    return modes;
}

std::vector<double> extend_series(std::span<const double> signal, const DecompositionSetup& setup) {
    const std::size_t S = setup.season, n = signal.size();
    if (setup.extension > 0 && (S == 0 || n < S)) throw DataError("seasonal extension needs at least one season of data");
    std::vector<double> out(signal.begin(), signal.end());
    double carry = 0.0, rho = 0.0;
    if (setup.mode == BoundaryExtension::seasonal_ar && n > S) {
        carry = signal[n - 1] - signal[n - 1 - S];
        rho = seasonal_difference_carry(signal, S);
    }
    for (std::size_t i = 0; i < setup.extension; ++i) {
        carry *= rho;
        out.push_back(out[out.size() - S] + carry);
    }
    return out;
}

ModeSet decompose_for_forecasting(std::span<const double> signal, const DecompositionSetup& setup) {
    if (setup.extension == 0) return decompose_level_adjusted(signal, setup.vmd);
    const std::vector<double> extended = extend_series(signal, setup);
    ModeSet modes = decompose_level_adjusted(extended, setup.vmd);
    const std::size_t n = signal.size();
    for (auto& m : modes.modes) m.resize(n);
    modes.residual.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        double sum = 0.0;
        for (const auto& m : modes.modes) sum += m[t];
        modes.residual[t] = signal[t] - sum;
    }
    return modes;
}

ModeSet DecompositionCache::decompose(std::span<const double> window, const DecompositionSetup& setup) {
    std::lock_guard lock(mutex_);
    if (setup_ && *setup_ == setup && std::equal(window.begin(), window.end(), window_.begin(), window_.end())) {
        return modes_;
    }
    modes_ = decompose_for_forecasting(window, setup);
    window_.assign(window.begin(), window.end());
    setup_ = setup;
    return modes_;
}

} // namespace metroflow

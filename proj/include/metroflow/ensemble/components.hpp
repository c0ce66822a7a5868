#pragma once

#include "metroflow/vmd/vmd.hpp"

#include <array>
#include <cstddef>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace metroflow {

/// Periodic, deterministic and volatility parts; they add up to the decomposed series.
struct ComponentTriple {
    std::vector<double> periodic;
    std::vector<double> deterministic;
    std::vector<double> volatility;

    std::size_t size() const { return periodic.size(); }
    /// Last `n` values of each part (all of them when shorter).
    ComponentTriple tail(std::size_t n) const;
    ComponentTriple prefix(std::size_t n) const;
};

/// Which mode feeds which role, with the mode's center frequency (cycles/sample).
struct Assignment {
    std::array<std::size_t, 3> mode_index{0, 1, 2};
    std::array<double, 3> omega{0.0, 0.0, 0.0};
};

struct AssignedComponents {
    ComponentTriple components;
    Assignment assignment;
};

/**
 * Lowest center frequency -> periodic, middle -> deterministic, highest ->
 * volatility (which also absorbs the decomposition residual). Equal
 * frequencies keep the original mode order. Throws DataError unless k = 3.
 */
AssignedComponents assign_components(const ModeSet& modes);

/// How the values appended past the end of a series are generated.
enum class BoundaryExtension {
    seasonal_naive, ///< x[t] = x[t - season]
    /// x[t] = x[t - season] + w, where the last seasonal difference w decays by
    /// its lag-1 autocorrelation (clamped to [0, 0.99]) at every step, so the
    /// extension starts from the last observed value instead of jumping.
    seasonal_ar,
};

std::string to_string(BoundaryExtension mode);
BoundaryExtension boundary_extension_from_string(const std::string& text);

/// How the forecasting pipelines decompose a series.
struct DecompositionSetup {
    VmdConfig vmd;
    /// Number of values appended before decomposing and dropped afterwards,
    /// so that the last observed values are not at the transform boundary.
    /// 0 disables the extension.
    std::size_t extension = 0;
    std::size_t season = 0;
    BoundaryExtension mode = BoundaryExtension::seasonal_ar;

    bool operator==(const DecompositionSetup&) const = default;
};

/**
 * Decomposition used by the forecasting pipelines: the series mean is removed
 * before the transform (so no mode is spent on the constant level) and added
 * back to the lowest-frequency mode. Modes plus residual reproduce the input.
 */
ModeSet decompose_level_adjusted(std::span<const double> signal, const VmdConfig& config);

/// The input followed by setup.extension values generated per setup.mode.
std::vector<double> extend_series(std::span<const double> signal, const DecompositionSetup& setup);

/// extend_series, then decompose_level_adjusted, cut back to the input length.
ModeSet decompose_for_forecasting(std::span<const double> signal, const DecompositionSetup& setup);

/**
 * Memo of the most recent decomposition, so that several forecasters scoring
 * the same rolling origin decompose its trailing window only once.
 */
class DecompositionCache {
public:
    ModeSet decompose(std::span<const double> window, const DecompositionSetup& setup);

private:
    std::mutex mutex_;
    std::vector<double> window_;
    std::optional<DecompositionSetup> setup_;
    ModeSet modes_;
};

} // namespace metroflow

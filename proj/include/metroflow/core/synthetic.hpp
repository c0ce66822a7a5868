#pragma once

#include "metroflow/core/time_series.hpp"

#include <cstdint>
#include <vector>

namespace metroflow {

struct Harmonic {
    double amplitude = 0.0;
    double phase = 0.0;
};

/**
 * Ground-truth generator: base level plus daily harmonics (the i-th entry
 * oscillates i times per day), a stationary AR process and white noise.
 * Weekend days scale the level and harmonics by `weekend_scale`.
 */
struct SyntheticConfig {
    int days = 20;
    int points_per_day = 71;
    int interval_minutes = 15;
    int day_start_minute = 390;
    Date start_date = Date{std::chrono::year{2013} / std::chrono::October / 14};
    double base_level = 0.0;
    std::vector<Harmonic> harmonics;
    std::vector<double> ar_coeffs;
    double ar_innovation_std = 0.0;
    double noise_std = 0.0;
    double weekend_scale = 1.0;
    std::uint64_t seed = 0;
};

struct SyntheticSeries {
    TimeSeries series;
    std::vector<double> periodic;
    std::vector<double> autoregressive;
    std::vector<double> noise;
};

/// Throws DataError for invalid configs, including non-stationary AR coefficients.
SyntheticSeries generate_synthetic(const SyntheticConfig& config);

/// Largest modulus among the roots of z^p - a1 z^(p-1) - ... - ap.
double ar_spectral_radius(const std::vector<double>& coeffs);

} // namespace metroflow

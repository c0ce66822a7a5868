#pragma once

#include "metroflow/core/time_series.hpp"
#include "metroflow/ensemble/components.hpp"
#include "metroflow/nn/lstm.hpp"
#include "metroflow/nn/mlp.hpp"
#include "metroflow/sarima/sarima.hpp"
#include "metroflow/vmd/vmd.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace metroflow {

/// Which data the decomposition sees: only the training block, or the whole series (leaks the future).
enum class DecompositionScope { train_only, full_series };

std::string to_string(DecompositionScope scope);
DecompositionScope decomposition_scope_from_string(const std::string& text);

/// Training setup for one network role.
struct NetworkOptions {
    nn::TrainConfig train;
    std::vector<int> hidden_sizes;
    /// Upper bound for the lag window; the effective cap is also limited to one day.
    std::size_t lag_cap = 24;
    double tie_tolerance = 0.0;
};

NetworkOptions default_mlp_options();        ///< hidden sizes 4..15
NetworkOptions default_lstm_options();       ///< hidden sizes 4..25, clipping at 5
NetworkOptions default_recombiner_options(); ///< hidden sizes 2..8

struct EnsembleConfig {
    VmdConfig vmd;
    OrderSearchOptions sarima;
    NetworkOptions lstm = default_lstm_options();
    NetworkOptions mlp = default_mlp_options();
    NetworkOptions recombiner = default_recombiner_options();
    DecompositionScope scope = DecompositionScope::train_only;
    /// Length (in days) of the extension applied before every decomposition; 0 disables it.
    double boundary_extension_days = 1.0;
    BoundaryExtension boundary_extension = BoundaryExtension::seasonal_ar;
    std::uint64_t seed = 0;

    void validate() const;
};

DecompositionSetup decomposition_setup(const EnsembleConfig& config, std::size_t points_per_day);

struct EnsembleModel {
    DecompositionSetup decomposition;
    DecompositionScope scope = DecompositionScope::train_only;
    std::size_t points_per_day = 0;
    /// Length of the trailing window that is decomposed at forecast time.
    std::size_t window_length = 0;
    Assignment assignment;
    SarimaModel periodic_model;
    nn::LstmModel deterministic_model;
    nn::MlpModel volatility_model;
    /// Maps (periodic, deterministic, volatility) forecasts to the series; all scaled with the series scaler.
    nn::MlpModel recombiner;
    /// Components at the end of the training block (long enough for every sub-model).
    ComponentTriple tails;
    /// Full-series components, kept only for DecompositionScope::full_series.
    ComponentTriple stored;
};

struct EnsembleForecast {
    std::vector<double> combined;
    ComponentTriple components;
};

/**
 * Fits the decomposition ensemble. `full_series` is required for
 * DecompositionScope::full_series (and must start with the training values);
 * it is ignored otherwise. Sub-fit errors keep their type and gain a stage label.
 */
EnsembleModel fit_adaensemble(const TimeSeries& train, const EnsembleConfig& config,
                              std::span<const double> full_series = {});

/// Recombiner output for one component triple, in series units.
double recombine(const nn::MlpModel& recombiner, double periodic, double deterministic, double volatility);

/// Forecasts from the end of the training block.
EnsembleForecast forecast_adaensemble(const EnsembleModel& model, int h);

/// Forecasts following `history` (the series up to the forecast origin).
EnsembleForecast forecast_adaensemble_from(const EnsembleModel& model, std::span<const double> history, int h,
                                           DecompositionCache* cache = nullptr);

/// Components of `history` as the model sees them at a forecast origin.
ComponentTriple components_at(const EnsembleModel& model, std::span<const double> history,
                              DecompositionCache* cache = nullptr);

/// One-step in-sample predictions starting at index `first`.
struct OneStepSeries {
    std::size_t first = 0;
    std::vector<double> values;
};

OneStepSeries one_step_mlp(const nn::MlpModel& model, std::span<const double> series);
OneStepSeries one_step_lstm(const nn::LstmModel& model, std::span<const double> series);

/// Lag window for a role: autocorrelation-based, capped at min(lag_cap, points_per_day).
std::size_t lag_window_for(std::span<const double> series, std::size_t lag_cap, std::size_t points_per_day);

void save_ensemble(const std::filesystem::path& dir, const EnsembleModel& model);
EnsembleModel load_ensemble(const std::filesystem::path& dir);

} // namespace metroflow

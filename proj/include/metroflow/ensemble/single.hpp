#pragma once

#include "metroflow/ensemble/ensemble.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace metroflow {

enum class ModelKind { sarima, mlp, lstm, vmd_mlp, vmd_lstm, adaensemble };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& text);
/// The six kinds in report order: the five benchmarks, then the ensemble.
const std::vector<ModelKind>& all_model_kinds();

/**
 * Benchmark model: a plain SARIMA, MLP or LSTM on the raw series, or one
 * network per decomposition mode whose forecasts are summed (the
 * decomposition residual is forecast as zero).
 */
struct SingleModel {
    ModelKind kind = ModelKind::sarima;
    std::size_t points_per_day = 0;
    SarimaModel sarima;
    nn::MlpModel mlp;
    nn::LstmModel lstm;

    // Per-mode variants only.
    DecompositionSetup decomposition;
    DecompositionScope scope = DecompositionScope::train_only;
    std::size_t window_length = 0;
    std::vector<nn::MlpModel> mode_mlps;
    std::vector<nn::LstmModel> mode_lstms;
    /// Full-series modes, kept only for DecompositionScope::full_series.
    std::vector<std::vector<double>> stored_modes;

    std::size_t mode_count() const { return kind == ModelKind::vmd_mlp ? mode_mlps.size() : mode_lstms.size(); }
};

/// Fits a benchmark model; ModelKind::adaensemble is rejected (use fit_adaensemble).
SingleModel fit_single(ModelKind kind, const TimeSeries& train, const EnsembleConfig& config,
                       std::span<const double> full_series = {});

/// Forecasts the `h` values following `history`.
std::vector<double> forecast_single(const SingleModel& model, std::span<const double> history, int h,
                                    DecompositionCache* cache = nullptr);

/// Per-mode forecasts of a vmd_mlp / vmd_lstm model (rows = modes).
std::vector<std::vector<double>> forecast_modes(const SingleModel& model, std::span<const double> history, int h,
                                                DecompositionCache* cache = nullptr);

void save_single(const std::filesystem::path& dir, const SingleModel& model);
SingleModel load_single(const std::filesystem::path& dir);

} // namespace metroflow

#pragma once

#include "metroflow/core/time_series.hpp"
#include "metroflow/ensemble/ensemble.hpp"
#include "metroflow/ensemble/single.hpp"
#include "metroflow/eval/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace metroflow {

/// Forecasts the values following `history` for steps 1..h.
using ForecastFn = std::function<std::vector<double>(std::span<const double> history, int h)>;

struct NamedForecaster {
    std::string name;
    ForecastFn forecast;
};

struct BenchmarkCell {
    std::string model;
    int horizon = 0;
    MetricPair metrics;
    std::size_t origins = 0;
};

/// First line of every output file: tool version, config digest and seed.
struct Provenance {
    std::string tool_version;
    std::string config_digest;
    std::uint64_t seed = 0;

    std::string header_line() const;
};

struct BenchmarkReport {
    std::vector<std::string> models;
    std::vector<int> horizons;
    /// Model-major: cells[m * horizons.size() + j].
    std::vector<BenchmarkCell> cells;
    std::string dataset_id;
    Provenance provenance;
    std::vector<std::string> notes;

    const BenchmarkCell& at(const std::string& model, int horizon) const;
};

/**
 * Rolling-origin scoring. Every origin o from the last training index up to
 * the last one with room for the longest horizon forecasts from the series up
 * to o; each (model, h) cell aggregates the h-step errors over all origins.
 * Throws DataError when the test block is shorter than the longest horizon + 1.
 */
BenchmarkReport evaluate_forecasters(std::span<const double> train, std::span<const double> test,
                                     const std::vector<NamedForecaster>& forecasters, const std::vector<int>& horizons);

/// Fits each requested kind once on `train` (seeded by `seed`) and scores it on `test`.
BenchmarkReport run_benchmark(const TimeSeries& train, const TimeSeries& test, const std::vector<ModelKind>& kinds,
                              const std::vector<int>& horizons, const EnsembleConfig& config, std::uint64_t seed);

/// `model,horizon,rmse,mape` rows.
void write_report_csv(std::ostream& out, const BenchmarkReport& report);
/// Aligned table: one row per model, RMSE and MAPE columns per horizon.
void write_report_table(std::ostream& out, const BenchmarkReport& report);
/// Horizon-by-model matrix of one metric ("rmse" or "mape"), tab separated.
void write_report_tsv(std::ostream& out, const BenchmarkReport& report, const std::string& metric);

} // namespace metroflow

#pragma once

#include "metroflow/core/scaler.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace metroflow::nn {

/// Row-major (input, target) pairs.
struct Dataset {
    std::size_t input_size = 0;
    std::vector<double> inputs;
    std::vector<double> targets;

    std::size_t size() const { return targets.size(); }
    std::span<const double> row(std::size_t i) const { return {inputs.data() + i * input_size, input_size}; }
    void add(std::span<const double> input, double target);
    /// Rows [begin, end).
    Dataset slice(std::size_t begin, std::size_t end) const;
};

/// Sliding windows of `window` consecutive values predicting the next value.
Dataset make_windows(std::span<const double> series, std::size_t window);

/**
 * Contiguous lag window for autoregressive networks: the largest lag in
 * 1..cap whose |autocorrelation| exceeds 1.96 / sqrt(n), at least 1.
 */
std::size_t select_lag_window(std::span<const double> series, std::size_t cap);

struct TrainConfig {
    double learning_rate = 0.05;
    int epochs = 500;
    std::size_t batch_size = 32;
    double momentum = 0.0;
    /// Global gradient-norm clip; 0 disables clipping.
    double clip_norm = 0.0;
};

/// Candidate hidden sizes [lo, hi].
std::vector<int> size_range(int lo, int hi);

/// Per-candidate validation scores from a hidden-size search.
struct HiddenSizeScore {
    int hidden_size = 0;
    double validation_rmse = 0.0;
};

/// Index of the winning candidate: the smallest size within (1 + tie_tolerance) of the best score.
std::size_t pick_hidden_size(const std::vector<HiddenSizeScore>& scores, double tie_tolerance);

/// Training seed used for candidate `hidden_size` of a search seeded with `seed`.
std::uint64_t candidate_seed(std::uint64_t seed, int hidden_size);

/// Splits [0, n) chronologically; returns the first index of the validation block.
std::size_t validation_start(std::size_t n, double train_share = 0.8);

} // namespace metroflow::nn

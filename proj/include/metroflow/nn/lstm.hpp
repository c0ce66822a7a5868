#pragma once

#include "metroflow/core/scaler.hpp"
#include "metroflow/nn/dataset.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace metroflow::nn {

/// Affine pre-activation of one gate: from_input (n_h x n_in), from_hidden (n_h x n_h),
/// diagonal peephole on the cell state (n_h, unused by the cell-input block) and bias.
struct GateWeights {
    std::vector<double> from_input;
    std::vector<double> from_hidden;
    std::vector<double> peephole;
    std::vector<double> bias;
};

/**
 * Single-layer peephole LSTM:
 *   i = sigma(Wix x + Wim m' + wic o c' + bi)
 *   f = sigma(Wfx x + Wfm m' + wfc o c' + bf)
 *   c = f o c' + i o g(Wcx x + Wcm m' + bc)
 *   o = sigma(Wox x + Wom m' + woc o c + bo)
 *   m = o o h(c)
 *   y = Wym m + by
 * where primes denote the previous step and o between vectors is the elementwise product.
 */
struct LstmModel {
    std::size_t input_size = 1;
    std::size_t hidden_size = 0;
    GateWeights input_gate;
    GateWeights forget_gate;
    GateWeights cell_input;
    GateWeights output_gate;
    std::vector<double> readout;
    double readout_bias = 0.0;

    MinMaxScaler scaler;
    std::size_t lag_window = 0;
    std::uint64_t seed = 0;
    TrainConfig train_config;
    double train_mse = 0.0;

    std::size_t parameter_count() const;
    /// Flat layout: input, forget, cell-input (no peephole), output gate blocks
    /// (from_input, from_hidden, peephole, bias each), then readout and readout bias.
    std::vector<double> parameters() const;
    void set_parameters(std::span<const double> flat);
};

struct LstmState {
    std::vector<double> m; ///< hidden activation
    std::vector<double> c; ///< cell state

    static LstmState zeros(std::size_t n) { return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)}; }
};

struct LstmStepResult {
    double y = 0.0;
    LstmState next;
};

/// All-zero model of the given shape.
LstmModel lstm_zero(std::size_t input_size, std::size_t hidden_size);

/// Uniform [-1/sqrt(n_h), 1/sqrt(n_h)] weights, zero biases except the forget bias (+1).
LstmModel lstm_init(std::size_t input_size, std::size_t hidden_size, std::uint64_t seed);

LstmStepResult lstm_step(const LstmModel& model, std::span<const double> x, const LstmState& prev);

/// Unrolls from the zero state over a window of scalar inputs; returns the last output.
double lstm_forward(const LstmModel& model, std::span<const double> window);

/// BPTT gradient of the batch mean squared error, in the layout of LstmModel::parameters().
std::vector<double> lstm_gradient(const LstmModel& model, const Dataset& batch);

double lstm_mse(const LstmModel& model, const Dataset& data);

/// Mini-batch SGD with optional global-norm clipping. Throws NumericalError on divergence.
LstmModel lstm_train_fixed(const Dataset& data, std::size_t hidden_size, const TrainConfig& config,
                           std::uint64_t seed);

struct LstmSelection {
    LstmModel model;
    int hidden_size = 0;
    double validation_rmse = 0.0;
    std::vector<HiddenSizeScore> scores;
};

/// Hidden-size search (chronological 80/20 split) followed by a retrain on all rows.
LstmSelection lstm_train(const Dataset& data, const std::vector<int>& candidates, const TrainConfig& config,
                         std::uint64_t seed, double tie_tolerance = 0.0);

LstmModel fit_lstm_series(std::span<const double> series, std::size_t lag_window, const std::vector<int>& candidates,
                          const TrainConfig& config, std::uint64_t seed, double tie_tolerance = 0.0);

std::vector<double> lstm_forecast_recursive(const LstmModel& model, std::span<const double> history, int h);

void save_lstm(std::ostream& out, const LstmModel& model);
LstmModel load_lstm(std::istream& in);

} // namespace metroflow::nn

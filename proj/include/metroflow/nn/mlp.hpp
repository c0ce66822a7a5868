#pragma once

#include "metroflow/core/scaler.hpp"
#include "metroflow/nn/dataset.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace metroflow::nn {

/**
 * One-hidden-layer perceptron with logistic hidden units and a linear output:
 *   y = output_bias + sum_j output_weights[j] * sigma(hidden_bias[j] + sum_i hidden_weights[j][i] x[i])
 */
struct MlpModel {
    std::size_t input_size = 0;
    std::size_t hidden_size = 0;
    std::vector<double> hidden_weights; ///< hidden_size x input_size, row-major
    std::vector<double> hidden_bias;
    std::vector<double> output_weights;
    double output_bias = 0.0;

    MinMaxScaler scaler;
    std::size_t lag_window = 0;
    std::uint64_t seed = 0;
    TrainConfig train_config;
    double train_mse = 0.0;

    std::size_t parameter_count() const { return hidden_size * (input_size + 2) + 1; }
    /// Flat layout: hidden weights, hidden biases, output weights, output bias.
    std::vector<double> parameters() const;
    void set_parameters(std::span<const double> flat);
};

/// Uniform [-1/sqrt(input_size), 1/sqrt(input_size)] initialization of every weight and bias.
MlpModel mlp_init(std::size_t input_size, std::size_t hidden_size, std::uint64_t seed);

double mlp_forward(const MlpModel& model, std::span<const double> input);

/// Gradient of the batch mean squared error, in the layout of MlpModel::parameters().
std::vector<double> mlp_gradient(const MlpModel& model, const Dataset& batch);

/// Mean squared error over the dataset.
double mlp_mse(const MlpModel& model, const Dataset& data);

/// Mini-batch SGD on MSE. Throws NumericalError("diverged ...") on a non-finite loss.
MlpModel mlp_train(const Dataset& data, std::size_t hidden_size, const TrainConfig& config, std::uint64_t seed);

struct MlpSelection {
    MlpModel model; ///< retrained on all rows with the chosen size
    int hidden_size = 0;
    double validation_rmse = 0.0;
    std::vector<HiddenSizeScore> scores;
};

/// Chronological 80/20 search over `candidates`; ties go to the smallest size.
MlpSelection select_hidden_size(const Dataset& data, const std::vector<int>& candidates, const TrainConfig& config,
                                std::uint64_t seed, double tie_tolerance = 0.0);

/// Scales `series` (scaler fit on it), builds lag windows and runs the hidden-size search.
MlpModel fit_mlp_series(std::span<const double> series, std::size_t lag_window, const std::vector<int>& candidates,
                        const TrainConfig& config, std::uint64_t seed, double tie_tolerance = 0.0);

/// Iterated forecasts in original units; predictions are fed back into the lag window.
std::vector<double> mlp_forecast_recursive(const MlpModel& model, std::span<const double> history, int h);

void save_mlp(std::ostream& out, const MlpModel& model);
MlpModel load_mlp(std::istream& in);

} // namespace metroflow::nn

#pragma once

#include "metroflow/core/error.hpp"
#include "metroflow/core/rng.hpp"
#include "metroflow/nn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace metroflow::nn::detail {

/**
 * Shared mini-batch loop. `step(indices, grad)` must fill `grad` with the
 * gradient of the batch MSE at the current parameters and return that MSE;
 * `apply(params)` installs updated parameters.
 */
template <class Step, class Apply>
void run_sgd(std::vector<double>& params, std::size_t n, const TrainConfig& config, std::uint64_t seed, Step&& step,
             Apply&& apply) {
    if (config.epochs <= 0 || n == 0) return;
    if (!(config.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
    const std::size_t batch = std::max<std::size_t>(1, config.batch_size);
    Rng rng(derive_seed(seed, 0x5ad));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> grad(params.size()), velocity(params.size(), 0.0);
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double loss_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t end = std::min(n, start + batch);
            const double loss = step(std::span<const std::size_t>(order.data() + start, end - start), grad);
            loss_sum += loss;
            ++batches;
            if (config.clip_norm > 0.0) {
                double norm2 = 0.0;
                for (const double g : grad) norm2 += g * g;
                const double norm = std::sqrt(norm2);
                if (norm > config.clip_norm) {
                    const double s = config.clip_norm / norm;
                    for (auto& g : grad) g *= s;
                }
            }
            for (std::size_t i = 0; i < params.size(); ++i) {
                velocity[i] = config.momentum * velocity[i] - config.learning_rate * grad[i];
                params[i] += velocity[i];
            }
            apply(params);
        }
        if (!std::isfinite(loss_sum / static_cast<double>(batches))) {
            throw NumericalError("diverged at epoch " + std::to_string(epoch));
        }
    }
    for (const double p : params) {
        if (!std::isfinite(p)) throw NumericalError("diverged: non-finite weights after training");
    }
}

} // namespace metroflow::nn::detail

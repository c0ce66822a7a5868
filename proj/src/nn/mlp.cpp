#include "metroflow/nn/mlp.hpp"

#include "metroflow/core/error.hpp"
#include "metroflow/core/rng.hpp"
#include "metroflow/nn/activations.hpp"
#include "sgd.hpp"
#include "text_io.hpp"

#include <cmath>
#include <numeric>

namespace metroflow::nn {

namespace {

/// Adds the gradient of the mean squared error over `rows` into `grad`; returns that error.
double accumulate_gradient(const MlpModel& m, const Dataset& data, std::span<const std::size_t> rows,
                           std::vector<double>& grad) {
    const std::size_t p = m.input_size, q = m.hidden_size;
    std::fill(grad.begin(), grad.end(), 0.0);
    double* g_hw = grad.data();
    double* g_hb = g_hw + q * p;
    double* g_ow = g_hb + q;
    double& g_ob = grad[q * (p + 2)];
    std::vector<double> act(q);
    const double scale = 2.0 / static_cast<double>(rows.size());
    double loss = 0.0;
    for (const std::size_t r : rows) {
        const auto x = data.row(r);
        double y = m.output_bias;
        for (std::size_t j = 0; j < q; ++j) {
            double z = m.hidden_bias[j];
            const double* w = &m.hidden_weights[j * p];
            for (std::size_t i = 0; i < p; ++i) z += w[i] * x[i];
            act[j] = sigma(z);
            y += m.output_weights[j] * act[j];
        }
        const double err = y - data.targets[r];
        loss += err * err;
        const double dy = scale * err;
        g_ob += dy;
        for (std::size_t j = 0; j < q; ++j) {
            g_ow[j] += dy * act[j];
            const double dz = dy * m.output_weights[j] * act[j] * (1.0 - act[j]);
            g_hb[j] += dz;
            double* gw = g_hw + j * p;
            for (std::size_t i = 0; i < p; ++i) gw[i] += dz * x[i];
        }
    }
    return loss / static_cast<double>(rows.size());
}

void check_shape(const MlpModel& m, const Dataset& data) {
    if (data.input_size != m.input_size) throw DataError("mlp: input size mismatch");
}

} // namespace

std::vector<double> MlpModel::parameters() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    flat.insert(flat.end(), hidden_weights.begin(), hidden_weights.end());
    flat.insert(flat.end(), hidden_bias.begin(), hidden_bias.end());
    flat.insert(flat.end(), output_weights.begin(), output_weights.end());
    flat.push_back(output_bias);
    return flat;
}

void MlpModel::set_parameters(std::span<const double> flat) {
    if (flat.size() != parameter_count()) throw DataError("mlp: parameter count mismatch");
    auto it = flat.begin();
    std::copy(it, it + static_cast<std::ptrdiff_t>(hidden_weights.size()), hidden_weights.begin());
    it += static_cast<std::ptrdiff_t>(hidden_weights.size());
    std::copy(it, it + static_cast<std::ptrdiff_t>(hidden_size), hidden_bias.begin());
    it += static_cast<std::ptrdiff_t>(hidden_size);
    std::copy(it, it + static_cast<std::ptrdiff_t>(hidden_size), output_weights.begin());
    it += static_cast<std::ptrdiff_t>(hidden_size);
    output_bias = *it;
}

MlpModel mlp_init(std::size_t input_size, std::size_t hidden_size, std::uint64_t seed) {
    if (input_size == 0 || hidden_size == 0) throw DataError("mlp: sizes must be positive");
    MlpModel m;
    m.input_size = input_size;
    m.hidden_size = hidden_size;
    m.lag_window = input_size;
    m.seed = seed;
    m.hidden_weights.resize(hidden_size * input_size);
    m.hidden_bias.resize(hidden_size);
    m.output_weights.resize(hidden_size);
    const double bound = 1.0 / std::sqrt(static_cast<double>(input_size));
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-bound, bound);
    for (auto& w : m.hidden_weights) w = u(rng);
    for (auto& b : m.hidden_bias) b = u(rng);
    for (auto& w : m.output_weights) w = u(rng);
    m.output_bias = u(rng);
    return m;
}

double mlp_forward(const MlpModel& m, std::span<const double> input) {
    if (input.size() != m.input_size) throw DataError("mlp: input size mismatch");
    double y = m.output_bias;
    for (std::size_t j = 0; j < m.hidden_size; ++j) {
        double z = m.hidden_bias[j];
        const double* w = &m.hidden_weights[j * m.input_size];
        for (std::size_t i = 0; i < m.input_size; ++i) z += w[i] * input[i];
        y += m.output_weights[j] * sigma(z);
    }
    return y;
}

std::vector<double> mlp_gradient(const MlpModel& model, const Dataset& batch) {
    check_shape(model, batch);
    if (batch.size() == 0) throw DataError("mlp: empty batch");
    std::vector<std::size_t> rows(batch.size());
    std::iota(rows.begin(), rows.end(), 0);
    std::vector<double> grad(model.parameter_count());
    accumulate_gradient(model, batch, rows, grad);
    return grad;
}

double mlp_mse(const MlpModel& model, const Dataset& data) {
    check_shape(model, data);
    double acc = 0.0;
    for (std::size_t r = 0; r < data.size(); ++r) {
        const double e = mlp_forward(model, data.row(r)) - data.targets[r];
        acc += e * e;
    }
    return data.size() ? acc / static_cast<double>(data.size()) : 0.0;
}

MlpModel mlp_train(const Dataset& data, std::size_t hidden_size, const TrainConfig& config, std::uint64_t seed) {
    MlpModel model = mlp_init(data.input_size, hidden_size, seed);
    model.train_config = config;
    std::vector<double> params = model.parameters();
    detail::run_sgd(
        params, data.size(), config, seed,
        [&](std::span<const std::size_t> rows, std::vector<double>& grad) {
            return accumulate_gradient(model, data, rows, grad);
        },
        [&](const std::vector<double>& p) { model.set_parameters(p); });
    model.train_mse = mlp_mse(model, data);
    return model;
}

MlpSelection select_hidden_size(const Dataset& data, const std::vector<int>& candidates, const TrainConfig& config,
                                std::uint64_t seed, double tie_tolerance) {
    if (candidates.empty()) throw DataError("mlp: empty candidate set");
    const std::size_t cut = validation_start(data.size());
    const Dataset fit_part = data.slice(0, cut);
    const Dataset val_part = data.slice(cut, data.size());
    MlpSelection out;
    for (const int q : candidates) {
        if (q < 1) throw DataError("mlp: hidden sizes must be positive");
        const MlpModel m = mlp_train(fit_part, static_cast<std::size_t>(q), config, candidate_seed(seed, q));
        out.scores.push_back({q, std::sqrt(mlp_mse(m, val_part))});
    }
    const auto& chosen = out.scores[pick_hidden_size(out.scores, tie_tolerance)];
    out.hidden_size = chosen.hidden_size;
    out.validation_rmse = chosen.validation_rmse;
    out.model = mlp_train(data, static_cast<std::size_t>(chosen.hidden_size), config,
                          candidate_seed(seed, chosen.hidden_size));
    return out;
}

MlpModel fit_mlp_series(std::span<const double> series, std::size_t lag_window, const std::vector<int>& candidates,
                        const TrainConfig& config, std::uint64_t seed, double tie_tolerance) {
    const MinMaxScaler scaler = MinMaxScaler::fit(series);
    const std::vector<double> scaled = scaler.apply(series);
    const Dataset data = make_windows(scaled, lag_window);
    MlpModel model = select_hidden_size(data, candidates, config, seed, tie_tolerance).model;
    model.scaler = scaler;
    model.lag_window = lag_window;
    return model;
}

std::vector<double> mlp_forecast_recursive(const MlpModel& model, std::span<const double> history, int h) {
    if (h < 1) throw DataError("mlp: horizon must be at least 1");
    const std::size_t L = model.lag_window;
    if (L != model.input_size) throw DataError("mlp: lag window does not match input size");
    if (history.size() < L) throw DataError("mlp: history shorter than lag window");
    std::vector<double> window = model.scaler.apply(history.subspan(history.size() - L));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(h));
    for (int step = 0; step < h; ++step) {
        const double y = mlp_forward(model, window);
        out.push_back(model.scaler.invert(y));
        window.erase(window.begin());
        window.push_back(y);
    }
    return out;
}

void save_mlp(std::ostream& out, const MlpModel& m) {
    text_io::write_header(out, "mlp");
    text_io::write_field(out, "input_size", std::to_string(m.input_size));
    text_io::write_field(out, "hidden_size", std::to_string(m.hidden_size));
    text_io::write_field(out, "lag_window", std::to_string(m.lag_window));
    text_io::write_field(out, "seed", std::to_string(m.seed));
    text_io::write_field(out, "train_mse", text_io::fmt(m.train_mse));
    text_io::write_scaler(out, m.scaler);
    text_io::write_train_config(out, m.train_config);
    text_io::write_block(out, "hidden_weights", m.hidden_size, m.input_size, m.hidden_weights);
    text_io::write_block(out, "hidden_bias", m.hidden_size, 1, m.hidden_bias);
    text_io::write_block(out, "output_weights", 1, m.hidden_size, m.output_weights);
    text_io::write_block(out, "output_bias", 1, 1, {m.output_bias});
}

MlpModel load_mlp(std::istream& in) {
    const auto doc = text_io::read_document(in, "mlp");
    MlpModel m;
    m.input_size = doc.count("input_size");
    m.hidden_size = doc.count("hidden_size");
    m.lag_window = doc.count("lag_window");
    m.seed = doc.count("seed");
    m.train_mse = doc.number("train_mse");
    m.scaler = text_io::read_scaler(doc);
    m.train_config = text_io::read_train_config(doc);
    m.hidden_weights = doc.block("hidden_weights", m.hidden_size, m.input_size).values;
    m.hidden_bias = doc.block("hidden_bias", m.hidden_size, 1).values;
    m.output_weights = doc.block("output_weights", 1, m.hidden_size).values;
    m.output_bias = doc.block("output_bias", 1, 1).values[0];
    return m;
}

} // namespace metroflow::nn

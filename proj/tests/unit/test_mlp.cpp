#include "metroflow/core/error.hpp"
#include "metroflow/core/rng.hpp"
#include "metroflow/nn/activations.hpp"
#include "metroflow/nn/dataset.hpp"
#include "metroflow/nn/mlp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

using namespace metroflow;
using namespace metroflow::nn;

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Term-by-term evaluation written independently of the library's loops.
double hand_forward(const MlpModel& m, std::span<const double> x) {
    double y = m.output_bias;
    for (std::size_t j = 0; j < m.hidden_size; ++j) {
        double a = m.hidden_bias[j];
        for (std::size_t i = 0; i < m.input_size; ++i) a += m.hidden_weights[j * m.input_size + i] * x[i];
        y += m.output_weights[j] * logistic(a);
    }
    return y;
}

Dataset random_dataset(std::size_t rows, std::size_t inputs, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> z;
    Dataset d;
    d.input_size = inputs;
    for (std::size_t r = 0; r < rows; ++r) {
        std::vector<double> x(inputs);
        for (double& v : x) v = z(rng);
        d.add(x, z(rng));
    }
    return d;
}

double mse_of(const MlpModel& m, const Dataset& d) {
    double s = 0.0;
    for (std::size_t r = 0; r < d.size(); ++r) s += std::pow(hand_forward(m, d.row(r)) - d.targets[r], 2);
    return s / static_cast<double>(d.size());
}

std::vector<double> sine(std::size_t n, double period) {
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) x[t] = 50.0 + 20.0 * std::sin(2.0 * std::numbers::pi * t / period);
    return x;
}

} // namespace

TEST(MlpForward, HandCases) {
    MlpModel zero = mlp_init(3, 2, 1);
    zero.set_parameters(std::vector<double>(zero.parameter_count(), 0.0));
    zero.output_bias = 0.7;
    EXPECT_DOUBLE_EQ(mlp_forward(zero, std::vector<double>{1, -2, 5}), 0.7);

    MlpModel one = mlp_init(1, 1, 1);
    one.hidden_weights = {1.0};
    one.hidden_bias = {0.0};
    one.output_weights = {2.0};
    one.output_bias = 0.0;
    EXPECT_DOUBLE_EQ(mlp_forward(one, std::vector<double>{0.0}), 1.0);
}

TEST(MlpForward, MatchesHandEvaluation) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const MlpModel m = mlp_init(5, 7, seed);
        const Dataset d = random_dataset(4, 5, seed + 100);
        for (std::size_t r = 0; r < d.size(); ++r) EXPECT_NEAR(mlp_forward(m, d.row(r)), hand_forward(m, d.row(r)), 1e-12);
    }
}

TEST(MlpParameters, RoundTripAndInitRange) {
    const MlpModel m = mlp_init(4, 6, 3);
    EXPECT_EQ(m.parameters().size(), m.parameter_count());
    const double bound = 1.0 / std::sqrt(4.0); // fan-in of the hidden layer
    for (double p : m.parameters()) EXPECT_LE(std::abs(p), bound);
    MlpModel copy = mlp_init(4, 6, 99);
    copy.set_parameters(m.parameters());
    EXPECT_EQ(copy.parameters(), m.parameters());
}

TEST(MlpGradient, ZeroErrorGivesZeroGradient) {
    const MlpModel m = mlp_init(3, 4, 5);
    Dataset d = random_dataset(6, 3, 7);
    for (std::size_t r = 0; r < d.size(); ++r) d.targets[r] = mlp_forward(m, d.row(r));
    for (double g : mlp_gradient(m, d)) EXPECT_EQ(g, 0.0);
}

TEST(MlpGradient, MatchesCentralDifferences) {
    const double step = 1e-5;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const MlpModel m = mlp_init(2 + seed % 4, 3 + seed % 5, seed);
        const Dataset d = random_dataset(8, m.input_size, seed + 50);
        const std::vector<double> grad = mlp_gradient(m, d);
        std::vector<double> p = m.parameters();
        double worst = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            MlpModel plus = m, minus = m;
            std::vector<double> pp = p, pm = p;
            pp[k] += step;
            pm[k] -= step;
            plus.set_parameters(pp);
            minus.set_parameters(pm);
            const double fd = (mse_of(plus, d) - mse_of(minus, d)) / (2.0 * step);
            worst = std::max(worst, std::abs(fd - grad[k]) / std::max(std::abs(fd) + std::abs(grad[k]), 1e-6));
        }
        EXPECT_LT(worst, 1e-4) << "seed " << seed;
    }
}

TEST(MlpGradient, DuplicatedBatchHasSameGradient) {
    const MlpModel m = mlp_init(3, 4, 2);
    const Dataset d = random_dataset(5, 3, 3);
    Dataset twice = d;
    for (std::size_t r = 0; r < d.size(); ++r) twice.add(d.row(r), d.targets[r]);
    const auto a = mlp_gradient(m, d), b = mlp_gradient(m, twice);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-14);
}

TEST(MlpTrain, ZeroEpochsKeepsInitialization) {
    TrainConfig c;
    c.epochs = 0;
    const Dataset d = random_dataset(10, 2, 1);
    EXPECT_EQ(mlp_train(d, 3, c, 17).parameters(), mlp_init(2, 3, 17).parameters());
}

TEST(MlpTrain, LearnsXor) {
    Dataset d;
    d.input_size = 2;
    for (auto [a, b] : {std::pair{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}}) {
        d.add(std::vector<double>{a, b}, a != b ? 1.0 : 0.0);
    }
    TrainConfig c;
    c.epochs = 5000;
    c.batch_size = 4;
    c.learning_rate = 0.5;
    c.momentum = 0.9;
    EXPECT_LT(mlp_mse(mlp_train(d, 4, c, 1), d), 0.05);
}

TEST(MlpTrain, MoreEpochsDoNotHurt) {
    const Dataset d = make_windows(MinMaxScaler::fit(sine(300, 24)).apply(sine(300, 24)), 4);
    TrainConfig c;
    c.epochs = 1;
    const double one = mlp_mse(mlp_train(d, 5, c, 3), d);
    c.epochs = 100;
    const double hundred = mlp_mse(mlp_train(d, 5, c, 3), d);
    EXPECT_LE(hundred, one);
}

TEST(MlpTrain, DivergenceIsNumericalError) {
    const Dataset d = random_dataset(50, 3, 4);
    TrainConfig c;
    c.learning_rate = 1e6;
    c.epochs = 50;
    EXPECT_THROW(mlp_train(d, 4, c, 1), NumericalError);
}

TEST(HiddenSearch, SingleCandidate) {
    const Dataset d = random_dataset(40, 2, 1);
    TrainConfig c;
    c.epochs = 5;
    EXPECT_EQ(select_hidden_size(d, {5}, c, 1).hidden_size, 5);
}

TEST(HiddenSearch, TiesGoToSmallestSize) {
    std::vector<HiddenSizeScore> scores{{4, 1.00}, {5, 0.99}, {6, 1.01}};
    EXPECT_EQ(pick_hidden_size(scores, 0.05), 0u);
    EXPECT_EQ(pick_hidden_size(scores, 0.0), 1u);
    // Linear data: every size fits it equally well within a generous tolerance.
    Dataset d;
    d.input_size = 1;
    for (int i = 0; i < 100; ++i) d.add(std::vector<double>{i / 100.0}, 0.2 + 0.5 * i / 100.0);
    TrainConfig c;
    c.epochs = 200;
    c.momentum = 0.9;
    EXPECT_EQ(select_hidden_size(d, {4, 5, 6, 7}, c, 2, 10.0).hidden_size, 4);
}

TEST(HiddenSearch, WinnerIsBestOnExhaustiveRerun) {
    const auto series = sine(400, 24);
    const Dataset d = make_windows(MinMaxScaler::fit(series).apply(series), 6);
    TrainConfig c;
    c.epochs = 40;
    const std::vector<int> candidates{4, 6, 9};
    const MlpSelection sel = select_hidden_size(d, candidates, c, 8);
    // Re-run every candidate on the same chronological split and seed.
    const std::size_t cut = validation_start(d.size());
    const Dataset train = d.slice(0, cut), valid = d.slice(cut, d.size());
    double best = std::numeric_limits<double>::infinity();
    for (int q : candidates) {
        const MlpModel m = mlp_train(train, q, c, candidate_seed(8, q));
        const double rmse = std::sqrt(mse_of(m, valid));
        best = std::min(best, rmse);
        if (q == sel.hidden_size) {
            EXPECT_NEAR(rmse, sel.validation_rmse, 1e-12);
        }
    }
    EXPECT_NEAR(sel.validation_rmse, best, 1e-12);
    EXPECT_EQ(sel.model.hidden_size, static_cast<std::size_t>(sel.hidden_size));
}

TEST(MlpForecast, RecursiveChaining) {
    const auto series = sine(300, 24);
    TrainConfig c;
    c.epochs = 20;
    const MlpModel m = fit_mlp_series(series, 5, {4}, c, 3);
    const auto f = mlp_forecast_recursive(m, series, 3);
    std::vector<double> window = m.scaler.apply(std::span(series).last(5));
    for (int h = 0; h < 3; ++h) {
        const double y = hand_forward(m, window);
        EXPECT_NEAR(f[h], m.scaler.invert(y), 1e-10);
        window.erase(window.begin());
        window.push_back(y);
    }
    MlpModel constant = m;
    std::fill(constant.output_weights.begin(), constant.output_weights.end(), 0.0);
    constant.output_bias = m.scaler.apply(42.0);
    for (double v : mlp_forecast_recursive(constant, series, 6)) EXPECT_NEAR(v, 42.0, 1e-9);
}

TEST(MlpSerialization, RoundTripIsExact) {
    const auto series = sine(200, 24);
    TrainConfig c;
    c.epochs = 10;
    const MlpModel m = fit_mlp_series(series, 4, {4, 5}, c, 9);
    std::stringstream buf;
    save_mlp(buf, m);
    const MlpModel r = load_mlp(buf);
    EXPECT_EQ(r.parameters(), m.parameters());
    EXPECT_EQ(r.scaler, m.scaler);
    EXPECT_EQ(mlp_forecast_recursive(r, series, 5), mlp_forecast_recursive(m, series, 5));
}

TEST(Dataset, WindowsAndLagSelection) {
    const std::vector<double> x{1, 2, 3, 4, 5};
    const Dataset d = make_windows(x, 2);
    ASSERT_EQ(d.size(), 3u);
    EXPECT_EQ(d.row(1)[0], 2.0);
    EXPECT_EQ(d.row(1)[1], 3.0);
    EXPECT_EQ(d.targets[1], 4.0);
    EXPECT_EQ(validation_start(100), 80u);
    // Seasonal signal: its period lies within the cap, so the window reaches it.
    EXPECT_GE(select_lag_window(sine(480, 12), 24), 12u);
}

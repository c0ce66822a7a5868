#include "metroflow/core/error.hpp"
#include "metroflow/core/rng.hpp"
#include "metroflow/nn/activations.hpp"
#include "metroflow/nn/lstm.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace metroflow;
using namespace metroflow::nn;

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Dataset random_windows(std::size_t rows, std::size_t window, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Dataset d;
    d.input_size = window;
    for (std::size_t r = 0; r < rows; ++r) {
        std::vector<double> x(window);
        for (double& v : x) v = u(rng);
        d.add(x, u(rng));
    }
    return d;
}

LstmModel perturbed(const LstmModel& m, double scale, std::uint64_t seed) {
    // Non-zero biases and peepholes so every gradient path is exercised.
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> p = m.parameters();
    for (double& v : p) v += u(rng);
    LstmModel out = m;
    out.set_parameters(p);
    return out;
}

double loss(const LstmModel& m, const Dataset& d) {
    double s = 0.0;
    for (std::size_t r = 0; r < d.size(); ++r) s += std::pow(lstm_forward(m, d.row(r)) - d.targets[r], 2);
    return s / static_cast<double>(d.size());
}

std::vector<double> ar_one(std::size_t n, double phi, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> z;
    std::vector<double> x(n + 200, 0.0);
    for (std::size_t t = 1; t < x.size(); ++t) x[t] = phi * x[t - 1] + z(rng);
    return {x.begin() + 200, x.end()};
}

} // namespace

TEST(Activations, Identities) {
    EXPECT_EQ(sigma(0.0), 0.5);
    EXPECT_EQ(g_centered(0.0), 0.0);
    EXPECT_EQ(h_centered(0.0), 0.0);
    Rng rng(1);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 100; ++i) {
        const double x = u(rng);
        EXPECT_NEAR(g_centered(x), 4.0 * sigma(x) - 2.0, 1e-15);
        EXPECT_NEAR(h_centered(x), 2.0 * sigma(x) - 1.0, 1e-15);
    }
    EXPECT_NEAR(g_centered(20.0), 2.0, 1e-8);
    EXPECT_NEAR(h_centered(-20.0), -1.0, 1e-8);
}

TEST(LstmStep, ZeroModelFromZeroState) {
    const LstmModel m = lstm_zero(1, 3);
    const auto r = lstm_step(m, std::vector<double>{0.7}, LstmState::zeros(3));
    for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_EQ(r.next.c[j], 0.0);
        EXPECT_EQ(r.next.m[j], 0.0);
    }
    EXPECT_EQ(r.y, 0.0);
}

TEST(LstmStep, ZeroModelHalvesCellState) {
    const LstmModel m = lstm_zero(1, 2);
    LstmState prev = LstmState::zeros(2);
    prev.c = {1.0, 1.0};
    const auto r = lstm_step(m, std::vector<double>{0.0}, prev);
    const double h = 2.0 * logistic(0.5) - 1.0;
    for (std::size_t j = 0; j < 2; ++j) {
        EXPECT_DOUBLE_EQ(r.next.c[j], 0.5);
        EXPECT_DOUBLE_EQ(r.next.m[j], 0.5 * h);
    }
}

TEST(LstmStep, SaturatedForgetGateKeepsCell) {
    LstmModel m = lstm_zero(1, 2);
    m.forget_gate.bias = {20.0, 20.0};
    LstmState prev = LstmState::zeros(2);
    prev.c = {0.8, -0.3};
    const auto r = lstm_step(m, std::vector<double>{0.0}, prev);
    EXPECT_NEAR(r.next.c[0], 0.8, 1e-6);
    EXPECT_NEAR(r.next.c[1], -0.3, 1e-6);
}

TEST(LstmStep, MatchesHandEvaluationOfOneUnit) {
    LstmModel m = perturbed(lstm_zero(1, 1), 0.8, 4);
    const double x = 0.35, mp = -0.2, cp = 0.6;
    const auto& I = m.input_gate;
    const auto& F = m.forget_gate;
    const auto& C = m.cell_input;
    const auto& O = m.output_gate;
    const double i = logistic(I.from_input[0] * x + I.from_hidden[0] * mp + I.peephole[0] * cp + I.bias[0]);
    const double f = logistic(F.from_input[0] * x + F.from_hidden[0] * mp + F.peephole[0] * cp + F.bias[0]);
    const double c = f * cp + i * (4.0 * logistic(C.from_input[0] * x + C.from_hidden[0] * mp + C.bias[0]) - 2.0);
    const double o = logistic(O.from_input[0] * x + O.from_hidden[0] * mp + O.peephole[0] * c + O.bias[0]);
    const double out = o * (2.0 * logistic(c) - 1.0);
    const auto r = lstm_step(m, std::vector<double>{x}, LstmState{{mp}, {cp}});
    EXPECT_NEAR(r.next.c[0], c, 1e-14);
    EXPECT_NEAR(r.next.m[0], out, 1e-14);
    EXPECT_NEAR(r.y, m.readout[0] * out + m.readout_bias, 1e-14);
}

TEST(LstmForward, ZeroModelAndChaining) {
    LstmModel zero = lstm_zero(1, 4);
    zero.readout_bias = 0.0;
    EXPECT_EQ(lstm_forward(zero, std::vector<double>{0.1, 0.2}), 0.0);

    const LstmModel m = perturbed(lstm_init(1, 5, 2), 0.3, 9);
    EXPECT_EQ(lstm_forward(m, std::vector<double>{0.4}),
              lstm_step(m, std::vector<double>{0.4}, LstmState::zeros(5)).y);
    const std::vector<double> window{0.1, 0.9, 0.4, 0.3, 0.7};
    LstmState s = LstmState::zeros(5);
    double y = 0.0;
    for (double v : window) {
        const auto r = lstm_step(m, std::vector<double>{v}, s);
        s = r.next;
        y = r.y;
    }
    EXPECT_NEAR(lstm_forward(m, window), y, 1e-15);
}

TEST(LstmGradient, MatchesCentralDifferences) {
    const double step = 1e-5;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const LstmModel m = perturbed(lstm_init(1, 2 + seed % 4, seed), 0.5, seed + 30);
        const Dataset d = random_windows(4, 3, seed + 60);
        const std::vector<double> grad = lstm_gradient(m, d);
        const std::vector<double> p = m.parameters();
        ASSERT_EQ(grad.size(), p.size());
        double worst = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            LstmModel plus = m, minus = m;
            std::vector<double> pp = p, pm = p;
            pp[k] += step;
            pm[k] -= step;
            plus.set_parameters(pp);
            minus.set_parameters(pm);
            const double fd = (loss(plus, d) - loss(minus, d)) / (2.0 * step);
            worst = std::max(worst, std::abs(fd - grad[k]) / std::max(std::abs(fd) + std::abs(grad[k]), 1e-6));
        }
        EXPECT_LT(worst, 1e-4) << "seed " << seed;
    }
}

TEST(LstmTrain, ZeroEpochsKeepsInitialization) {
    TrainConfig c;
    c.epochs = 0;
    const Dataset d = random_windows(10, 3, 1);
    EXPECT_EQ(lstm_train_fixed(d, 3, c, 5).parameters(), lstm_init(1, 3, 5).parameters());
}

TEST(LstmTrain, LearnsArOneNearBayesError) {
    const auto x = ar_one(1500, 0.9, 7);
    TrainConfig c;
    c.epochs = 60;
    c.momentum = 0.9;
    c.clip_norm = 5.0;
    const std::size_t cut = 1200;
    const LstmModel m = fit_lstm_series(std::span(x).first(cut), 2, {4}, c, 3);
    double se = 0.0;
    std::size_t count = 0;
    for (std::size_t t = cut; t < x.size(); ++t) {
        const double f = lstm_forecast_recursive(m, std::span(x).first(t), 1)[0];
        se += (f - x[t]) * (f - x[t]);
        ++count;
    }
    // The innovation standard deviation (1) is the best achievable RMSE.
    EXPECT_LT(std::sqrt(se / count), 1.5);
}

TEST(LstmForecast, RecursionAndZeroModel) {
    const auto x = ar_one(300, 0.8, 2);
    TrainConfig c;
    c.epochs = 5;
    const LstmModel m = fit_lstm_series(x, 3, {4}, c, 1);
    const auto f = lstm_forecast_recursive(m, x, 2);
    std::vector<double> window = m.scaler.apply(std::span(x).last(3));
    const double y1 = lstm_forward(m, window);
    EXPECT_NEAR(f[0], m.scaler.invert(y1), 1e-12);
    window.erase(window.begin());
    window.push_back(y1);
    EXPECT_NEAR(f[1], m.scaler.invert(lstm_forward(m, window)), 1e-12);

    LstmModel zero = m;
    zero.set_parameters(std::vector<double>(m.parameter_count(), 0.0));
    zero.readout_bias = 0.25;
    for (double v : lstm_forecast_recursive(zero, x, 4)) EXPECT_NEAR(v, m.scaler.invert(0.25), 1e-12);
}

TEST(LstmSerialization, RoundTripIsExact) {
    const auto x = ar_one(300, 0.8, 2);
    TrainConfig c;
    c.epochs = 5;
    const LstmModel m = fit_lstm_series(x, 3, {4, 5}, c, 1);
    std::stringstream buf;
    save_lstm(buf, m);
    const LstmModel r = load_lstm(buf);
    EXPECT_EQ(r.parameters(), m.parameters());
    EXPECT_EQ(lstm_forecast_recursive(r, x, 4), lstm_forecast_recursive(m, x, 4));
    std::stringstream bad("# metroflow mlp\n");
    EXPECT_THROW(load_lstm(bad), DataError);
}

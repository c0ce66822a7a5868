#include "metroflow/core/error.hpp"
#include "metroflow/core/rng.hpp"
#include "metroflow/vmd/fft.hpp"
#include "metroflow/vmd/vmd.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

using namespace metroflow;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::vector<double> tone(std::size_t n, double freq, double amplitude = 1.0) {
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) x[t] = amplitude * std::cos(two_pi * freq * static_cast<double>(t));
    return x;
}

std::vector<double> add(std::vector<double> a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) ma += a[i] / n, mb += b[i] / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

/// Frequency (cycles/sample) of the largest direct-DFT magnitude, excluding DC.
double dft_peak(const std::vector<double>& x) {
    const std::size_t n = x.size();
    double best = -1.0, at = 0.0;
    for (std::size_t j = 1; j <= n / 2; ++j) {
        double re = 0, im = 0;
        for (std::size_t t = 0; t < n; ++t) {
            re += x[t] * std::cos(two_pi * j * t / n);
            im -= x[t] * std::sin(two_pi * j * t / n);
        }
        if (re * re + im * im > best) best = re * re + im * im, at = static_cast<double>(j) / n;
    }
    return at;
}

void expect_identity(std::span<const double> signal, const ModeSet& modes) {
    const std::vector<double> back = reconstruct(modes);
    ASSERT_EQ(back.size(), signal.size());
    for (std::size_t i = 0; i < signal.size(); ++i) EXPECT_NEAR(back[i], signal[i], 1e-10);
}

} // namespace

TEST(Fft, HalfSpectrumRoundTripAndDirectDft) {
    Rng rng(5);
    std::normal_distribution<double> z;
    for (std::size_t n : {7u, 16u, 33u}) {
        std::vector<double> x(n);
        for (double& v : x) v = z(rng);
        const auto half = fft::forward_half(x);
        ASSERT_EQ(half.size(), n / 2 + 1);
        for (std::size_t j = 0; j < half.size(); ++j) {
            std::complex<double> direct = 0.0;
            for (std::size_t t = 0; t < n; ++t) direct += x[t] * std::polar(1.0, -two_pi * j * t / n);
            EXPECT_NEAR(std::abs(half[j] - direct), 0.0, 1e-10);
        }
        const auto back = fft::inverse_half(half, n);
        for (std::size_t t = 0; t < n; ++t) EXPECT_NEAR(back[t], x[t], 1e-12);
    }
}

TEST(Vmd, SingleToneFrequency) {
    const auto x = tone(1000, 0.05);
    VmdConfig c;
    c.k = 1;
    const ModeSet m = vmd_decompose(x, c);
    EXPECT_NEAR(m.center_freqs[0], dft_peak(x), 1e-3);
    expect_identity(x, m);
}

TEST(Vmd, TwoToneRecovery) {
    const auto a = tone(1000, 0.03), b = tone(1000, 0.20);
    const auto x = add(a, b);
    VmdConfig c;
    c.k = 2;
    const auto t0 = std::chrono::steady_clock::now();
    const ModeSet m = vmd_decompose(x, c);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_LT(seconds, 5.0);
    ASSERT_EQ(m.k(), 2u);
    EXPECT_NEAR(m.center_freqs[0], 0.03, 0.02 * 0.03);
    EXPECT_NEAR(m.center_freqs[1], 0.20, 0.02 * 0.20);
    EXPECT_GT(correlation(m.modes[0], a), 0.99);
    EXPECT_GT(correlation(m.modes[1], b), 0.99);
    EXPECT_TRUE(m.converged);
    expect_identity(x, m);
    double energy = 0;
    for (const auto& mode : m.modes) {
        for (double v : mode) energy += v * v;
    }
    double signal_energy = 0;
    for (double v : x) signal_energy += v * v;
    EXPECT_LE(energy, 1.05 * signal_energy);
}

namespace {

double residual_ratio(const std::vector<double>& x, const ModeSet& m, std::size_t trim) {
    double rr = 0, rx = 0;
    for (std::size_t i = trim; i + trim < x.size(); ++i) rr += m.residual[i] * m.residual[i], rx += x[i] * x[i];
    return std::sqrt(rr / rx);
}

} // namespace

TEST(Vmd, TwoToneResidualIsSmall) {
    const auto x = add(tone(1000, 0.03), tone(1000, 0.20));
    VmdConfig c;
    c.k = 2;
    // The reflected padding leaves a kink at each end whose broadband content
    // no narrow mode absorbs, so with mirroring the check excludes the outer 10%.
    EXPECT_LT(residual_ratio(x, vmd_decompose(x, c), 100), 0.01);
    c.mirror_extend = false;
    EXPECT_LT(residual_ratio(x, vmd_decompose(x, c), 0), 0.01);
}

TEST(Vmd, Deterministic) {
    const auto x = add(tone(600, 0.05), tone(600, 0.3, 0.5));
    VmdConfig c;
    c.init_omega = OmegaInit::random;
    c.seed = 42;
    const ModeSet a = vmd_decompose(x, c), b = vmd_decompose(x, c);
    EXPECT_EQ(a.modes, b.modes);
    EXPECT_EQ(a.center_freqs, b.center_freqs);
}

TEST(Vmd, ConstantSignalWithPinnedDc) {
    const std::vector<double> x(200, 3.5);
    VmdConfig c;
    c.k = 1;
    c.pin_dc = true;
    const ModeSet m = vmd_decompose(x, c);
    EXPECT_EQ(m.center_freqs[0], 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(m.modes[0][i], 3.5, 1e-6);
    expect_identity(x, m);
}

TEST(Vmd, IdentityHoldsForEveryInitAndNoise) {
    Rng rng(8);
    std::normal_distribution<double> z;
    std::vector<double> x(500);
    for (double& v : x) v = z(rng) * 10 + 3;
    for (OmegaInit init : {OmegaInit::uniform, OmegaInit::zero, OmegaInit::random}) {
        for (double tau : {0.0, 0.1}) {
            VmdConfig c;
            c.init_omega = init;
            c.tau = tau;
            c.k = 4;
            c.seed = 3;
            c.max_iter = 60;
            const ModeSet m = vmd_decompose(x, c);
            expect_identity(x, m);
            for (std::size_t k = 1; k < m.k(); ++k) EXPECT_LE(m.center_freqs[k - 1], m.center_freqs[k]);
        }
    }
}

TEST(Vmd, ManualPartitionHasZeroResidual) {
    ModeSet m;
    m.modes = {{1, 2, 3}, {0.5, -1, 2}};
    m.residual = {0, 0, 0};
    const auto back = reconstruct(m);
    EXPECT_EQ(back, (std::vector<double>{1.5, 1, 5}));
}

TEST(Vmd, RejectsBadInput) {
    VmdConfig c;
    EXPECT_THROW(vmd_decompose(std::vector<double>(8, 1.0), c), DataError);
    std::vector<double> x(100, 1.0);
    x[3] = std::nan("");
    EXPECT_THROW(vmd_decompose(x, c), DataError);
    c.alpha = -1;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Bandwidth, DemodulatedToneAndOffsets) {
    const auto x = tone(1000, 0.1);
    double energy = 0;
    for (double v : x) energy += v * v;
    EXPECT_LT(mode_bandwidth(x, 0.1), 1e-6 * energy);
    const double b1 = mode_bandwidth(x, 0.11), b2 = mode_bandwidth(x, 0.12), b3 = mode_bandwidth(x, 0.14);
    EXPECT_LT(b1, b2);
    EXPECT_LT(b2, b3);
    // Quadratic growth in the offset.
    EXPECT_NEAR(b2 / b1, 4.0, 0.01);
    EXPECT_NEAR(b3 / b1, 16.0, 0.05);
}

TEST(Bandwidth, WhiteNoiseMatchesFlatSpectrumExpectation) {
    // For unit-variance white noise every DFT bin has E|X_j|^2 = n, so the
    // expectation is sum_j gain_j^2 (2 pi (j/n - w))^2 with gain 2 on interior bins.
    const std::size_t n = 256;
    const double w = 0.15;
    double expected = 0.0;
    for (std::size_t j = 0; j <= n / 2; ++j) {
        const double gain = (j == 0 || j == n / 2) ? 1.0 : 2.0;
        const double d = two_pi * (static_cast<double>(j) / n - w);
        expected += gain * gain * d * d;
    }
    Rng rng(77);
    std::normal_distribution<double> z;
    double mean_bw = 0.0;
    const int trials = 200;
    for (int r = 0; r < trials; ++r) {
        std::vector<double> x(n);
        for (double& v : x) v = z(rng);
        mean_bw += mode_bandwidth(x, w) / trials;
    }
    EXPECT_NEAR(mean_bw, expected, 0.1 * expected);
}

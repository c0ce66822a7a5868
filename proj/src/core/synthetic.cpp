#include "metroflow/core/synthetic.hpp"

#include "metroflow/core/error.hpp"
#include "metroflow/core/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace metroflow {

double ar_spectral_radius(const std::vector<double>& coeffs) {
    const auto p = static_cast<Eigen::Index>(coeffs.size());
    if (p == 0) return 0.0;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) companion(0, i) = coeffs[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

SyntheticSeries generate_synthetic(const SyntheticConfig& config) {
    if (config.days <= 0) throw DataError("synthetic: days must be positive");
    if (config.points_per_day <= 0) throw DataError("synthetic: points_per_day must be positive");
    if (config.interval_minutes <= 0) throw DataError("synthetic: interval_minutes must be positive");
    if (config.noise_std < 0.0 || config.ar_innovation_std < 0.0) {
        throw DataError("synthetic: noise levels must be nonnegative");
    }
    if (!(config.weekend_scale > 0.0)) throw DataError("synthetic: weekend_scale must be positive");
    if (ar_spectral_radius(config.ar_coeffs) >= 1.0) {
        throw DataError("synthetic: AR coefficients are not stationary");
    }

    const auto ppd = static_cast<std::size_t>(config.points_per_day);
    const std::size_t n = ppd * static_cast<std::size_t>(config.days);

    SyntheticSeries out;
    out.periodic.assign(n, 0.0);
    out.autoregressive.assign(n, 0.0);
    out.noise.assign(n, 0.0);

    TimeSeries& ts = out.series;
    ts.interval_minutes = config.interval_minutes;
    ts.points_per_day = config.points_per_day;
    ts.day_start_minute = config.day_start_minute;
    for (int d = 0; d < config.days; ++d) ts.days.push_back(config.start_date + std::chrono::days{d});
    ts.start = ts.timestamp_at(0);

    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t day = t / ppd;
        const auto j = static_cast<double>(t % ppd);
        double v = config.base_level;
        for (std::size_t h = 0; h < config.harmonics.size(); ++h) {
            const auto& hm = config.harmonics[h];
            v += hm.amplitude *
                 std::cos(2.0 * std::numbers::pi * static_cast<double>(h + 1) * j / static_cast<double>(ppd) + hm.phase);
        }
        if (is_weekend(ts.days[day])) v *= config.weekend_scale;
        out.periodic[t] = v;
    }

    if (!config.ar_coeffs.empty() && config.ar_innovation_std > 0.0) {
        Rng rng(derive_seed(config.seed, 1));
        std::normal_distribution<double> innov(0.0, 1.0);
        const std::size_t p = config.ar_coeffs.size();
        constexpr std::size_t burn_in = 500;
        std::vector<double> state(burn_in + n, 0.0);
        for (std::size_t t = 0; t < state.size(); ++t) {
            double v = config.ar_innovation_std * innov(rng);
            for (std::size_t i = 0; i < p && i < t; ++i) v += config.ar_coeffs[i] * state[t - 1 - i];
            state[t] = v;
        }
        std::copy(state.begin() + burn_in, state.end(), out.autoregressive.begin());
    }

    if (config.noise_std > 0.0) {
        Rng rng(derive_seed(config.seed, 2));
        std::normal_distribution<double> white(0.0, 1.0);
        for (auto& e : out.noise) e = config.noise_std * white(rng);
    }

    ts.values.resize(n);
    for (std::size_t t = 0; t < n; ++t) ts.values[t] = out.periodic[t] + out.autoregressive[t] + out.noise[t];
    bool any_weekday = false, any_weekend = false;
    for (const auto d : ts.days) (is_weekend(d) ? any_weekend : any_weekday) = true;
    ts.day_type = any_weekday && any_weekend ? DayType::mixed
                  : any_weekend             ? DayType::weekend
                                            : DayType::weekday;
    return out;
}

} // namespace metroflow

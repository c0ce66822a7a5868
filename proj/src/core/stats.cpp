#include "metroflow/core/stats.hpp"

#include "metroflow/core/error.hpp"

#include <cmath>
#include <numeric>

namespace metroflow {

double mean(std::span<const double> values) {
    if (values.empty()) throw DataError("mean of empty sequence");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double variance(std::span<const double> values) {
    const double m = mean(values);
    double acc = 0.0;
    for (const double v : values) acc += (v - m) * (v - m);
    return acc / static_cast<double>(values.size());
}

double covariance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DataError("covariance: length mismatch");
    const double ma = mean(a);
    const double mb = mean(b);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - ma) * (b[i] - mb);
    return acc / static_cast<double>(a.size());
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const double va = variance(a);
    const double vb = variance(b);
    if (va <= 0.0 || vb <= 0.0) throw DataError("correlation of a constant sequence");
    return covariance(a, b) / std::sqrt(va * vb);
}

double autocorrelation(std::span<const double> values, std::size_t lag) {
    const std::size_t n = values.size();
    if (lag >= n) return 0.0;
    const double m = mean(values);
    double denom = 0.0;
    for (const double v : values) denom += (v - m) * (v - m);
    if (denom <= 0.0) return 0.0;
    double num = 0.0;
    for (std::size_t t = lag; t < n; ++t) num += (values[t] - m) * (values[t - lag] - m);
    // Each sum is averaged over its own number of terms, so an exactly periodic
    // series scores 1 at its period however few periods it spans.
    return (num / static_cast<double>(n - lag)) / (denom / static_cast<double>(n));
}

DescriptiveStats descriptive_stats(std::span<const double> values) {
    if (values.size() < 2) throw DataError("descriptive statistics need at least two values");
    const double m = mean(values);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (const double v : values) {
        const double d = v - m;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const auto n = static_cast<double>(values.size());
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 <= 0.0) throw DataError("constant series: skewness undefined");
    DescriptiveStats s;
    s.mean = m;
    s.std = std::sqrt(m2);
    s.skewness = m3 / (m2 * s.std);
    s.kurtosis = m4 / (m2 * m2);
    return s;
}

} // namespace metroflow

#pragma once

#include <span>
#include <vector>

namespace metroflow {

/// Population moments; kurtosis is the non-excess fourth standardized moment.
struct DescriptiveStats {
    double mean = 0.0;
    double std = 0.0;
    double skewness = 0.0;
    double kurtosis = 0.0;
};

DescriptiveStats descriptive_stats(std::span<const double> values);

double mean(std::span<const double> values);
/// Population variance (denominator N).
double variance(std::span<const double> values);
double covariance(std::span<const double> a, std::span<const double> b);
double pearson(std::span<const double> a, std::span<const double> b);

/// Sample autocorrelation at `lag`: the lagged cross-product mean over its N - lag
/// terms divided by the population variance. 0 when lag >= N or the input is constant.
double autocorrelation(std::span<const double> values, std::size_t lag);

} // namespace metroflow

#include "metroflow/eval/metrics.hpp"

#include "metroflow/core/error.hpp"
#include "metroflow/core/stats.hpp"

#include <cmath>

namespace metroflow {

namespace {

void check_pair(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.size() != predicted.size()) throw DataError("length mismatch between actual and predicted values");
    if (actual.empty()) throw DataError("no values to score");
}

} // namespace

double mape(std::span<const double> actual, std::span<const double> predicted) {
    check_pair(actual, predicted);
    double acc = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (actual[i] == 0.0) throw DataError("zero actual");
        acc += std::abs((actual[i] - predicted[i]) / actual[i]);
    }
    return acc / static_cast<double>(actual.size()) * 100.0;
}

double rmse(std::span<const double> actual, std::span<const double> predicted) {
    check_pair(actual, predicted);
    double acc = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double e = actual[i] - predicted[i];
        acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(actual.size()));
}

MetricPair metric_pair(std::span<const double> actual, std::span<const double> predicted) {
    return {rmse(actual, predicted), mape(actual, predicted)};
}

double mean_period(std::span<const double> x) {
    std::size_t peaks = 0;
    const std::size_t n = x.size();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(x[i] > x[i - 1])) continue;
        std::size_t j = i;
        while (j + 1 < n && x[j + 1] == x[i]) ++j;
        if (j + 1 < n && x[j + 1] < x[i]) ++peaks;
        i = j;
    }
    if (peaks == 0) throw DataError("aperiodic");
    return static_cast<double>(n) / static_cast<double>(peaks);
}

ComponentMeasures component_measures(std::span<const double> component, std::span<const double> original) {
    if (component.size() != original.size()) throw DataError("component and original differ in length");
    if (component.size() < 2) throw DataError("component measures need at least 2 values");
    const double vc = variance(component), vo = variance(original);
    if (vc == 0.0 || vo == 0.0) throw DataError("constant input");
    ComponentMeasures m;
    m.mean_period = mean_period(component);
    m.correlation = pearson(component, original);
    m.variance_share = 100.0 * vc / vo;
    return m;
}

} // namespace metroflow

#pragma once

#include <span>

namespace metroflow {

struct MetricPair {
    double rmse = 0.0;
    double mape = 0.0; ///< percent
};

/// Mean absolute percentage error in percent. Throws DataError("zero actual") if any actual is 0.
double mape(std::span<const double> actual, std::span<const double> predicted);

/// Root mean squared error.
double rmse(std::span<const double> actual, std::span<const double> predicted);

MetricPair metric_pair(std::span<const double> actual, std::span<const double> predicted);

/**
 * Length divided by the number of strict local maxima (a plateau counts once,
 * at its left edge; end points never count). Throws DataError("aperiodic")
 * when there is no peak.
 */
double mean_period(std::span<const double> component);

struct ComponentMeasures {
    double mean_period = 0.0;
    double correlation = 0.0;
    double variance_share = 0.0; ///< percent of the original's variance
};

ComponentMeasures component_measures(std::span<const double> component, std::span<const double> original);

} // namespace metroflow

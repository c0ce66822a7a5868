#include "metroflow/core/scaler.hpp"

#include "metroflow/core/error.hpp"

#include <algorithm>
#include <cmath>

namespace metroflow {

MinMaxScaler::MinMaxScaler(double low, double high, double target_lo, double target_hi)
    : low_(low), high_(high), target_lo_(target_lo), target_hi_(target_hi) {
    if (!(high > low)) throw DataError("degenerate range");
    if (!(target_hi > target_lo)) throw DataError("degenerate target range");
    slope_ = (target_hi_ - target_lo_) / (high_ - low_);
}

MinMaxScaler MinMaxScaler::fit(std::span<const double> values, double target_lo, double target_hi) {
    if (values.empty()) throw DataError("cannot fit scaler on empty data");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return MinMaxScaler(*lo, *hi, target_lo, target_hi);
}

std::vector<double> MinMaxScaler::apply(std::span<const double> xs) const {
    std::vector<double> out(xs.size());
    std::transform(xs.begin(), xs.end(), out.begin(), [this](double x) { return apply(x); });
    return out;
}

std::vector<double> MinMaxScaler::invert(std::span<const double> ys) const {
    std::vector<double> out(ys.size());
    std::transform(ys.begin(), ys.end(), out.begin(), [this](double y) { return invert(y); });
    return out;
}

} // namespace metroflow

#pragma once

#include <span>
#include <string>
#include <vector>

namespace metroflow {

/// Affine map of [low, high] onto [target_lo, target_hi]; values outside the
/// fitted range are extrapolated, never clipped.
class MinMaxScaler {
public:
    MinMaxScaler() = default;
    MinMaxScaler(double low, double high, double target_lo = 0.1, double target_hi = 0.9);

    /// Fit on training values only. Throws DataError("degenerate range") for constant data.
    static MinMaxScaler fit(std::span<const double> values, double target_lo = 0.1,
                            double target_hi = 0.9);

    double apply(double x) const { return target_lo_ + (x - low_) * slope_; }
    double invert(double y) const { return low_ + (y - target_lo_) / slope_; }
    std::vector<double> apply(std::span<const double> xs) const;
    std::vector<double> invert(std::span<const double> ys) const;

    double low() const { return low_; }
    double high() const { return high_; }
    double target_lo() const { return target_lo_; }
    double target_hi() const { return target_hi_; }

    bool operator==(const MinMaxScaler&) const = default;

private:
    double low_ = 0.0;
    double high_ = 1.0;
    double target_lo_ = 0.1;
    double target_hi_ = 0.9;
    double slope_ = 0.8;
};

} // namespace metroflow

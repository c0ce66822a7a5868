#pragma once

#include <cmath>

namespace metroflow::nn {

/// Logistic sigmoid, range (0, 1).
inline double sigma(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Centered logistic with range (-2, 2); used for the cell input.
inline double g_centered(double x) { return 4.0 / (1.0 + std::exp(-x)) - 2.0; }

/// Centered logistic with range (-1, 1); used on the cell state.
inline double h_centered(double x) { return 2.0 / (1.0 + std::exp(-x)) - 1.0; }

inline double sigma_prime(double x) {
    const double s = sigma(x);
    return s * (1.0 - s);
}
inline double g_centered_prime(double x) { return 4.0 * sigma_prime(x); }
inline double h_centered_prime(double x) { return 2.0 * sigma_prime(x); }

} // namespace metroflow::nn

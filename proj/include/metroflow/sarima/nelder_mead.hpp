#pragma once

#include <functional>
#include <span>
#include <vector>

namespace metroflow::optim {

struct NelderMeadOptions {
    double initial_step = 0.1;
    /// Stop when f_worst - f_best <= reltol * (|f_best| + reltol).
    double reltol = 1e-10;
    int max_evals = 5000;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Derivative-free simplex minimization (standard reflection/expansion/contraction/shrink).
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& options = {});

} // namespace metroflow::optim

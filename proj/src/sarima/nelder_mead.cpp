#include "metroflow/sarima/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace metroflow::optim {

namespace {

double safe_eval(const Objective& f, std::span<const double> x) {
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
}

} // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& options) {
    constexpr double reflect = 1.0, expand = 2.0, contract = 0.5, shrink = 0.5;
    const std::size_t n = x0.size();
    NelderMeadResult result;
    if (n == 0) {
        result.value = safe_eval(f, x0);
        result.evaluations = 1;
        result.converged = true;
        result.x = std::move(x0);
        return result;
    }

    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += options.initial_step;
    int evals = 0;
    for (std::size_t i = 0; i <= n; ++i) {
        values[i] = safe_eval(f, simplex[i]);
        ++evals;
    }

    std::vector<std::size_t> idx(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);
    bool converged = false;
    while (evals < options.max_evals) {
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = idx.front(), worst = idx.back(), second = idx[n - 1];
        if (values[worst] - values[best] <= options.reltol * (std::abs(values[best]) + options.reltol)) {
            converged = true;
            break;
        }
        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[idx[k]][j];
        }
        for (auto& c : centroid) c /= static_cast<double>(n);

        for (std::size_t j = 0; j < n; ++j) trial[j] = centroid[j] + reflect * (centroid[j] - simplex[worst][j]);
        const double f_reflect = safe_eval(f, trial);
        ++evals;
        if (f_reflect < values[best]) {
            for (std::size_t j = 0; j < n; ++j) trial2[j] = centroid[j] + expand * (trial[j] - centroid[j]);
            const double f_expand = safe_eval(f, trial2);
            ++evals;
            if (f_expand < f_reflect) {
                simplex[worst] = trial2;
                values[worst] = f_expand;
            } else {
                simplex[worst] = trial;
                values[worst] = f_reflect;
            }
            continue;
        }
        if (f_reflect < values[second]) {
            simplex[worst] = trial;
            values[worst] = f_reflect;
            continue;
        }
        const bool outside = f_reflect < values[worst];
        for (std::size_t j = 0; j < n; ++j) {
            trial2[j] = outside ? centroid[j] + contract * (trial[j] - centroid[j])
                                : centroid[j] + contract * (simplex[worst][j] - centroid[j]);
        }
        const double f_contract = safe_eval(f, trial2);
        ++evals;
        if (f_contract < (outside ? f_reflect : values[worst])) {
            simplex[worst] = trial2;
            values[worst] = f_contract;
            continue;
        }
        for (std::size_t k = 1; k <= n; ++k) {
            auto& v = simplex[idx[k]];
            for (std::size_t j = 0; j < n; ++j) v[j] = simplex[best][j] + shrink * (v[j] - simplex[best][j]);
            values[idx[k]] = safe_eval(f, v);
            ++evals;
        }
    }

    const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    result.x = simplex[best];
    result.value = values[best];
    result.evaluations = evals;
    result.converged = converged;
    return result;
}

} // namespace metroflow::optim

#include "metroflow/nn/dataset.hpp"

#include "metroflow/core/error.hpp"
#include "metroflow/core/rng.hpp"
#include "metroflow/core/stats.hpp"

#include <cmath>

namespace metroflow::nn {

void Dataset::add(std::span<const double> input, double target) {
    if (input_size == 0) input_size = input.size();
    if (input.size() != input_size) throw DataError("dataset: inconsistent input size");
    inputs.insert(inputs.end(), input.begin(), input.end());
    targets.push_back(target);
}

Dataset Dataset::slice(std::size_t begin, std::size_t end) const {
    Dataset out;
    out.input_size = input_size;
    out.inputs.assign(inputs.begin() + static_cast<std::ptrdiff_t>(begin * input_size),
                      inputs.begin() + static_cast<std::ptrdiff_t>(end * input_size));
    out.targets.assign(targets.begin() + static_cast<std::ptrdiff_t>(begin),
                       targets.begin() + static_cast<std::ptrdiff_t>(end));
    return out;
}

Dataset make_windows(std::span<const double> series, std::size_t window) {
    if (window == 0) throw DataError("lag window must be positive");
    if (series.size() <= window) throw DataError("series shorter than lag window");
    Dataset out;
    out.input_size = window;
    for (std::size_t t = window; t < series.size(); ++t) out.add(series.subspan(t - window, window), series[t]);
    return out;
}

std::size_t select_lag_window(std::span<const double> series, std::size_t cap) {
    if (cap == 0) throw DataError("lag cap must be positive");
    const double bound = 1.96 / std::sqrt(static_cast<double>(series.size()));
    std::size_t best = 1;
    for (std::size_t lag = 1; lag <= cap && lag < series.size(); ++lag) {
        if (std::abs(autocorrelation(series, lag)) > bound) best = lag;
    }
    return best;
}

std::vector<int> size_range(int lo, int hi) {
    std::vector<int> out;
    for (int q = lo; q <= hi; ++q) out.push_back(q);
    return out;
}

std::size_t pick_hidden_size(const std::vector<HiddenSizeScore>& scores, double tie_tolerance) {
    if (scores.empty()) throw DataError("empty candidate set");
    double best = scores.front().validation_rmse;
    for (const auto& s : scores) best = std::min(best, s.validation_rmse);
    std::size_t pick = 0;
    bool found = false;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i].validation_rmse <= best * (1.0 + tie_tolerance) &&
            (!found || scores[i].hidden_size < scores[pick].hidden_size)) {
            pick = i;
            found = true;
        }
    }
    return pick;
}

std::uint64_t candidate_seed(std::uint64_t seed, int hidden_size) {
    return derive_seed(seed, static_cast<std::uint64_t>(hidden_size));
}

std::size_t validation_start(std::size_t n, double train_share) {
    const auto cut = static_cast<std::size_t>(std::floor(train_share * static_cast<double>(n)));
    if (cut == 0 || cut >= n) throw DataError("too few samples for a validation split");
    return cut;
}

} // namespace metroflow::nn

#include "metroflow/ensemble/single.hpp"

#include "metroflow/core/error.hpp"
#include "metroflow/core/rng.hpp"
#include "model_io.hpp"
#include "staged.hpp"

#include <algorithm>

namespace metroflow {

namespace {

using namespace nn::text_io;

enum SeedStream : std::uint64_t { sarima_stream = 21, mlp_stream = 22, lstm_stream = 23, mode_mlp_stream = 30,
                                  mode_lstm_stream = 40 };

bool per_mode(ModelKind kind) { return kind == ModelKind::vmd_mlp || kind == ModelKind::vmd_lstm; }

std::vector<std::vector<double>> modes_at(const SingleModel& model, std::span<const double> history,
                                          DecompositionCache* cache) {
    if (model.scope == DecompositionScope::full_series) {
        if (model.stored_modes.empty() || history.size() > model.stored_modes.front().size()) {
            throw DataError("history extends past the stored full-series decomposition");
        }
        std::vector<std::vector<double>> out;
        for (const auto& m : model.stored_modes) out.emplace_back(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(history.size()));
        return out;
    }
    const auto window = history.subspan(history.size() - std::min(history.size(), model.window_length));
    ModeSet modes = cache ? cache->decompose(window, model.decomposition) : decompose_for_forecasting(window, model.decomposition);
    return std::move(modes.modes);
}

} // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::sarima: return "sarima";
    case ModelKind::mlp: return "mlp";
    case ModelKind::lstm: return "lstm";
    case ModelKind::vmd_mlp: return "vmd_mlp";
    case ModelKind::vmd_lstm: return "vmd_lstm";
    case ModelKind::adaensemble: return "adaensemble";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& text) {
    for (const ModelKind k : all_model_kinds()) {
        if (to_string(k) == text) return k;
    }
    throw ConfigError("unknown model kind '" + text + "' (expected sarima, mlp, lstm, vmd_mlp, vmd_lstm or adaensemble)");
}

const std::vector<ModelKind>& all_model_kinds() {
    static const std::vector<ModelKind> kinds{ModelKind::sarima,  ModelKind::mlp,      ModelKind::lstm,
                                              ModelKind::vmd_mlp, ModelKind::vmd_lstm, ModelKind::adaensemble};
    return kinds;
}

SingleModel fit_single(ModelKind kind, const TimeSeries& train, const EnsembleConfig& config,
                       std::span<const double> full_series) {
    if (kind == ModelKind::adaensemble) throw ConfigError("fit_single does not build the ensemble");
    const std::size_t ppd = train.points_per_day;
    if (ppd == 0) throw DataError("points per day must be positive");
    const std::span<const double> x = train.values;
    SingleModel model;
    model.kind = kind;
    model.points_per_day = ppd;
    const std::string label = to_string(kind);

    switch (kind) {
    case ModelKind::sarima:
        model.sarima = staged(label, [&] {
            OrderSearchOptions opts = config.sarima;
            opts.seed = derive_seed(config.seed, sarima_stream);
            return select_order(x, static_cast<int>(ppd), opts).model;
        });
        break;
    case ModelKind::mlp:
        model.mlp = staged(label, [&] {
            const auto& o = config.mlp;
            return nn::fit_mlp_series(x, lag_window_for(x, o.lag_cap, ppd), o.hidden_sizes, o.train,
                                      derive_seed(config.seed, mlp_stream), o.tie_tolerance);
        });
        break;
    case ModelKind::lstm:
        model.lstm = staged(label, [&] {
            const auto& o = config.lstm;
            return nn::fit_lstm_series(x, lag_window_for(x, o.lag_cap, ppd), o.hidden_sizes, o.train,
                                       derive_seed(config.seed, lstm_stream), o.tie_tolerance);
        });
        break;
    case ModelKind::vmd_mlp:
    case ModelKind::vmd_lstm: {
        config.vmd.validate();
        model.decomposition = decomposition_setup(config, ppd);
        model.scope = config.scope;
        model.window_length = x.size();
        std::vector<std::vector<double>> modes;
        if (config.scope == DecompositionScope::full_series) {
            if (full_series.size() < x.size() || !std::equal(x.begin(), x.end(), full_series.begin())) {
                throw ConfigError("full_series decomposition needs the full series, starting with the training block");
            }
            model.stored_modes = staged("decomposition", [&] { return decompose_for_forecasting(full_series, model.decomposition).modes; });
            for (const auto& m : model.stored_modes) modes.emplace_back(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(x.size()));
        } else {
            modes = staged("decomposition", [&] { return decompose_for_forecasting(x, model.decomposition).modes; });
        }
        for (std::size_t i = 0; i < modes.size(); ++i) {
            const std::string mode_label = label + " mode " + std::to_string(i);
            const auto& m = modes[i];
            if (kind == ModelKind::vmd_mlp) {
                const auto& o = config.mlp;
                model.mode_mlps.push_back(staged(mode_label, [&] {
                    return nn::fit_mlp_series(m, lag_window_for(m, o.lag_cap, ppd), o.hidden_sizes, o.train,
                                              derive_seed(config.seed, mode_mlp_stream + i), o.tie_tolerance);
                }));
            } else {
                const auto& o = config.lstm;
                model.mode_lstms.push_back(staged(mode_label, [&] {
                    return nn::fit_lstm_series(m, lag_window_for(m, o.lag_cap, ppd), o.hidden_sizes, o.train,
                                               derive_seed(config.seed, mode_lstm_stream + i), o.tie_tolerance);
                }));
            }
        }
        break;
    }
    case ModelKind::adaensemble: break;
    }
    return model;
}

std::vector<std::vector<double>> forecast_modes(const SingleModel& model, std::span<const double> history, int h,
                                                DecompositionCache* cache) {
    if (!per_mode(model.kind)) throw DataError("not a per-mode model");
    if (h < 1) throw DataError("horizon must be at least 1");
    const auto modes = modes_at(model, history, cache);
    if (modes.size() != model.mode_count()) throw DataError("decomposition produced an unexpected number of modes");
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        out.push_back(model.kind == ModelKind::vmd_mlp ? nn::mlp_forecast_recursive(model.mode_mlps[i], modes[i], h)
                                                       : nn::lstm_forecast_recursive(model.mode_lstms[i], modes[i], h));
    }
    return out;
}

std::vector<double> forecast_single(const SingleModel& model, std::span<const double> history, int h,
                                    DecompositionCache* cache) {
    if (h < 1) throw DataError("horizon must be at least 1");
    if (static_cast<std::size_t>(h) > 10 * model.points_per_day) throw DataError("horizon too long");
    switch (model.kind) {
    case ModelKind::sarima: return forecast_sarima_from(model.sarima, history, h);
    case ModelKind::mlp: return nn::mlp_forecast_recursive(model.mlp, history, h);
    case ModelKind::lstm: return nn::lstm_forecast_recursive(model.lstm, history, h);
    case ModelKind::vmd_mlp:
    case ModelKind::vmd_lstm: {
        std::vector<double> sum(static_cast<std::size_t>(h), 0.0);
        for (const auto& f : forecast_modes(model, history, h, cache)) {
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += f[i];
        }
        return sum;
    }
    case ModelKind::adaensemble: break;
    }
    throw DataError("not a benchmark model");
}

void save_single(const std::filesystem::path& dir, const SingleModel& model) {
    std::filesystem::create_directories(dir);
    {
        auto out = model_io::open_out(dir / "model.meta");
        write_header(out, "model");
        write_field(out, "kind", to_string(model.kind));
        write_field(out, "points_per_day", std::to_string(model.points_per_day));
        if (per_mode(model.kind)) {
            model_io::write_setup(out, model.decomposition);
            write_field(out, "scope", to_string(model.scope));
            write_field(out, "window_length", std::to_string(model.window_length));
            write_field(out, "modes", std::to_string(model.mode_count()));
            for (std::size_t i = 0; i < model.stored_modes.size(); ++i) {
                model_io::write_series(out, "stored.mode" + std::to_string(i), model.stored_modes[i]);
            }
        }
    }
    switch (model.kind) {
    case ModelKind::sarima: model_io::save_file(dir / "model.sarima", model.sarima, save_sarima); break;
    case ModelKind::mlp: model_io::save_file(dir / "model.mlp", model.mlp, nn::save_mlp); break;
    case ModelKind::lstm: model_io::save_file(dir / "model.lstm", model.lstm, nn::save_lstm); break;
    case ModelKind::vmd_mlp:
        for (std::size_t i = 0; i < model.mode_mlps.size(); ++i) {
            model_io::save_file(dir / ("mode" + std::to_string(i) + ".mlp"), model.mode_mlps[i], nn::save_mlp);
        }
        break;
    case ModelKind::vmd_lstm:
        for (std::size_t i = 0; i < model.mode_lstms.size(); ++i) {
            model_io::save_file(dir / ("mode" + std::to_string(i) + ".lstm"), model.mode_lstms[i], nn::save_lstm);
        }
        break;
    case ModelKind::adaensemble: throw DataError("not a benchmark model");
    }
}

SingleModel load_single(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw DataError("model directory not found: " + dir.string());
    SingleModel model;
    auto meta_in = model_io::open_in(dir / "model.meta");
    const Document meta = read_document(meta_in, "model");
    model.kind = model_kind_from_string(meta.field("kind").front());
    model.points_per_day = meta.count("points_per_day");
    std::size_t modes = 0;
    if (per_mode(model.kind)) {
        model.decomposition = model_io::read_setup(meta);
        model.scope = decomposition_scope_from_string(meta.field("scope").front());
        model.window_length = meta.count("window_length");
        modes = meta.count("modes");
        if (model.scope == DecompositionScope::full_series) {
            for (std::size_t i = 0; i < modes; ++i) {
                model.stored_modes.push_back(model_io::read_series(meta, "stored.mode" + std::to_string(i)));
            }
        }
    }
    switch (model.kind) {
    case ModelKind::sarima: {
        auto in = model_io::open_in(dir / "model.sarima");
        model.sarima = load_sarima(in);
        break;
    }
    case ModelKind::mlp: {
        auto in = model_io::open_in(dir / "model.mlp");
        model.mlp = nn::load_mlp(in);
        break;
    }
    case ModelKind::lstm: {
        auto in = model_io::open_in(dir / "model.lstm");
        model.lstm = nn::load_lstm(in);
        break;
    }
    case ModelKind::vmd_mlp:
        for (std::size_t i = 0; i < modes; ++i) {
            auto in = model_io::open_in(dir / ("mode" + std::to_string(i) + ".mlp"));
            model.mode_mlps.push_back(nn::load_mlp(in));
        }
        break;
    case ModelKind::vmd_lstm:
        for (std::size_t i = 0; i < modes; ++i) {
            auto in = model_io::open_in(dir / ("mode" + std::to_string(i) + ".lstm"));
            model.mode_lstms.push_back(nn::load_lstm(in));
        }
        break;
    case ModelKind::adaensemble: throw DataError("model directory holds an ensemble, not a benchmark model");
    }
    return model;
}

} // namespace metroflow

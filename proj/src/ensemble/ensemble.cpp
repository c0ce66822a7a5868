#include "metroflow/ensemble/ensemble.hpp"

#include "metroflow/core/error.hpp"
#include "metroflow/core/rng.hpp"
#include "model_io.hpp"
#include "staged.hpp"

#include <algorithm>
#include <cmath>

namespace metroflow {

namespace {

using namespace nn::text_io;

enum SeedStream : std::uint64_t { periodic_stream = 11, deterministic_stream = 12, volatility_stream = 13,
                                  recombiner_stream = 14 };

const char* const role_names[3] = {"periodic", "deterministic", "volatility"};

void check_horizon(std::size_t points_per_day, int h) {
    if (h < 1) throw DataError("horizon must be at least 1");
    if (static_cast<std::size_t>(h) > 10 * points_per_day) throw DataError("horizon too long");
}

EnsembleForecast combine(const EnsembleModel& model, ComponentTriple parts) {
    EnsembleForecast out;
    out.combined.reserve(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out.combined.push_back(
            recombine(model.recombiner, parts.periodic[i], parts.deterministic[i], parts.volatility[i]));
    }
    out.components = std::move(parts);
    return out;
}

} // namespace

std::string to_string(DecompositionScope scope) {
    return scope == DecompositionScope::train_only ? "train_only" : "full_series";
}

DecompositionScope decomposition_scope_from_string(const std::string& text) {
    if (text == "train_only") return DecompositionScope::train_only;
    if (text == "full_series") return DecompositionScope::full_series;
    throw ConfigError("unknown decomposition scope '" + text + "' (expected train_only or full_series)");
}

NetworkOptions default_mlp_options() {
    NetworkOptions o;
    o.hidden_sizes = nn::size_range(4, 15);
    return o;
}

NetworkOptions default_lstm_options() {
    NetworkOptions o;
    o.hidden_sizes = nn::size_range(4, 25);
    o.train.clip_norm = 5.0;
    return o;
}

NetworkOptions default_recombiner_options() {
    NetworkOptions o;
    o.hidden_sizes = nn::size_range(2, 8);
    return o;
}

void EnsembleConfig::validate() const {
    vmd.validate();
    if (vmd.k != 3) throw ConfigError("the ensemble needs exactly 3 modes (vmd k = 3)");
    for (const NetworkOptions* o : {&lstm, &mlp, &recombiner}) {
        if (o->hidden_sizes.empty()) throw ConfigError("empty hidden-size candidate set");
        if (o->lag_cap == 0) throw ConfigError("lag cap must be positive");
        if (o->train.epochs < 0 || !(o->train.learning_rate > 0.0)) throw ConfigError("invalid training settings");
    }
    if (!(boundary_extension_days >= 0.0) || boundary_extension_days > 10.0) {
        throw ConfigError("boundary extension must be between 0 and 10 days");
    }
}

DecompositionSetup decomposition_setup(const EnsembleConfig& config, std::size_t points_per_day) {
    DecompositionSetup setup;
    setup.vmd = config.vmd;
    setup.season = points_per_day;
    setup.mode = config.boundary_extension;
    setup.extension = static_cast<std::size_t>(std::lround(config.boundary_extension_days * static_cast<double>(points_per_day)));
    return setup;
}

std::size_t lag_window_for(std::span<const double> series, std::size_t lag_cap, std::size_t points_per_day) {
    const std::size_t cap = std::max<std::size_t>(1, std::min(lag_cap, points_per_day));
    return nn::select_lag_window(series, cap);
}

OneStepSeries one_step_mlp(const nn::MlpModel& model, std::span<const double> series) {
    const std::size_t L = model.lag_window;
    OneStepSeries out;
    out.first = L;
    const std::vector<double> scaled = model.scaler.apply(series);
    for (std::size_t t = L; t < series.size(); ++t) {
        out.values.push_back(model.scaler.invert(nn::mlp_forward(model, {scaled.data() + t - L, L})));
    }
    return out;
}

OneStepSeries one_step_lstm(const nn::LstmModel& model, std::span<const double> series) {
    const std::size_t L = model.lag_window;
    OneStepSeries out;
    out.first = L;
    const std::vector<double> scaled = model.scaler.apply(series);
    for (std::size_t t = L; t < series.size(); ++t) {
        out.values.push_back(model.scaler.invert(nn::lstm_forward(model, {scaled.data() + t - L, L})));
    }
    return out;
}

double recombine(const nn::MlpModel& recombiner, double periodic, double deterministic, double volatility) {
    const MinMaxScaler& s = recombiner.scaler;
    const double in[3] = {s.apply(periodic), s.apply(deterministic), s.apply(volatility)};
    return s.invert(nn::mlp_forward(recombiner, in));
}

EnsembleModel fit_adaensemble(const TimeSeries& train, const EnsembleConfig& config,
                              std::span<const double> full_series) {
    config.validate();
    const std::size_t ppd = train.points_per_day;
    const std::span<const double> x = train.values;
    if (ppd == 0) throw DataError("points per day must be positive");
    if (x.size() < 10 * ppd) throw DataError("insufficient data: the ensemble needs at least 10 days of training data");

    EnsembleModel model;
    model.decomposition = decomposition_setup(config, ppd);
    model.scope = config.scope;
    model.points_per_day = ppd;
    model.window_length = x.size();

    AssignedComponents assigned;
    if (config.scope == DecompositionScope::full_series) {
        if (full_series.size() < x.size() || !std::equal(x.begin(), x.end(), full_series.begin())) {
            throw ConfigError("full_series decomposition needs the full series, starting with the training block");
        }
        assigned = staged("decomposition", [&] { return assign_components(decompose_for_forecasting(full_series, model.decomposition)); });
        model.stored = assigned.components;
        assigned.components = assigned.components.prefix(x.size());
    } else {
        assigned = staged("decomposition", [&] { return assign_components(decompose_for_forecasting(x, model.decomposition)); });
    }
    model.assignment = assigned.assignment;
    const ComponentTriple& comp = assigned.components;

    model.periodic_model = staged("periodic model (sarima)", [&] {
        OrderSearchOptions opts = config.sarima;
        opts.seed = derive_seed(config.seed, periodic_stream);
        return select_order(comp.periodic, static_cast<int>(ppd), opts).model;
    });
    model.deterministic_model = staged("deterministic model (lstm)", [&] {
        const auto& o = config.lstm;
        return nn::fit_lstm_series(comp.deterministic, lag_window_for(comp.deterministic, o.lag_cap, ppd),
                                   o.hidden_sizes, o.train, derive_seed(config.seed, deterministic_stream),
                                   o.tie_tolerance);
    });
    model.volatility_model = staged("volatility model (mlp)", [&] {
        const auto& o = config.mlp;
        return nn::fit_mlp_series(comp.volatility, lag_window_for(comp.volatility, o.lag_cap, ppd), o.hidden_sizes,
                                  o.train, derive_seed(config.seed, volatility_stream), o.tie_tolerance);
    });

    model.recombiner = staged("recombiner (mlp)", [&] {
        const MinMaxScaler scaler = MinMaxScaler::fit(x);
        nn::Dataset data;
        data.input_size = 3;
        const auto add_row = [&](double p, double d, double v, double target) {
            const double in[3] = {scaler.apply(p), scaler.apply(d), scaler.apply(v)};
            data.add(in, scaler.apply(target));
        };
        const OneStepPredictions p = sarima_one_step(model.periodic_model, comp.periodic);
        const OneStepSeries d = one_step_lstm(model.deterministic_model, comp.deterministic);
        const OneStepSeries v = one_step_mlp(model.volatility_model, comp.volatility);
        const std::size_t start = std::max({p.first, d.first, v.first});
        if (start + 10 >= x.size()) throw DataError("too little overlap between sub-model predictions");
        for (std::size_t t = start; t < x.size(); ++t) {
            add_row(p.values[t - p.first], d.values[t - d.first], v.values[t - v.first], x[t]);
        }
        const auto& o = config.recombiner;
        nn::MlpModel rec =
            nn::select_hidden_size(data, o.hidden_sizes, o.train, derive_seed(config.seed, recombiner_stream),
                                   o.tie_tolerance)
                .model;
        rec.scaler = scaler;
        return rec;
    });

    model.tails = comp.tail(std::max(model.deterministic_model.lag_window, model.volatility_model.lag_window));
    return model;
}

ComponentTriple components_at(const EnsembleModel& model, std::span<const double> history, DecompositionCache* cache) {
    if (model.scope == DecompositionScope::full_series) {
        if (history.size() > model.stored.size()) {
            throw DataError("history extends past the stored full-series decomposition");
        }
        return model.stored.prefix(history.size());
    }
    const auto window = history.subspan(history.size() - std::min(history.size(), model.window_length));
    const ModeSet modes = cache ? cache->decompose(window, model.decomposition) : decompose_for_forecasting(window, model.decomposition);
    return assign_components(modes).components;
}

EnsembleForecast forecast_adaensemble(const EnsembleModel& model, int h) {
    check_horizon(model.points_per_day, h);
    ComponentTriple parts;
    parts.periodic = forecast_sarima(model.periodic_model, h);
    parts.deterministic = nn::lstm_forecast_recursive(model.deterministic_model, model.tails.deterministic, h);
    parts.volatility = nn::mlp_forecast_recursive(model.volatility_model, model.tails.volatility, h);
    return combine(model, std::move(parts));
}

EnsembleForecast forecast_adaensemble_from(const EnsembleModel& model, std::span<const double> history, int h,
                                           DecompositionCache* cache) {
    check_horizon(model.points_per_day, h);
    const ComponentTriple hist = components_at(model, history, cache);
    ComponentTriple parts;
    parts.periodic = forecast_sarima_from(model.periodic_model, hist.periodic, h);
    parts.deterministic = nn::lstm_forecast_recursive(model.deterministic_model, hist.deterministic, h);
    parts.volatility = nn::mlp_forecast_recursive(model.volatility_model, hist.volatility, h);
    return combine(model, std::move(parts));
}

void save_ensemble(const std::filesystem::path& dir, const EnsembleModel& model) {
    std::filesystem::create_directories(dir);
    {
        auto out = model_io::open_out(dir / "vmd.meta");
        write_header(out, "vmd");
        model_io::write_setup(out, model.decomposition);
        write_field(out, "scope", to_string(model.scope));
        write_field(out, "points_per_day", std::to_string(model.points_per_day));
        write_field(out, "window_length", std::to_string(model.window_length));
    }
    {
        auto out = model_io::open_out(dir / "assignment.txt");
        write_header(out, "assignment");
        for (std::size_t r = 0; r < 3; ++r) {
            write_field(out, role_names[r],
                        "mode " + std::to_string(model.assignment.mode_index[r]) + " omega " +
                            fmt(model.assignment.omega[r]));
        }
        model_io::write_triple(out, "tail", model.tails);
        if (model.scope == DecompositionScope::full_series) model_io::write_triple(out, "stored", model.stored);
    }
    model_io::save_file(dir / "periodic.sarima", model.periodic_model, save_sarima);
    model_io::save_file(dir / "deterministic.lstm", model.deterministic_model, nn::save_lstm);
    model_io::save_file(dir / "volatility.mlp", model.volatility_model, nn::save_mlp);
    model_io::save_file(dir / "recombiner.mlp", model.recombiner, nn::save_mlp);
}

EnsembleModel load_ensemble(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw DataError("model directory not found: " + dir.string());
    EnsembleModel model;
    {
        auto in = model_io::open_in(dir / "vmd.meta");
        const Document doc = read_document(in, "vmd");
        model.decomposition = model_io::read_setup(doc);
        model.scope = decomposition_scope_from_string(doc.field("scope").front());
        model.points_per_day = doc.count("points_per_day");
        model.window_length = doc.count("window_length");
    }
    {
        auto in = model_io::open_in(dir / "assignment.txt");
        const Document doc = read_document(in, "assignment");
        for (std::size_t r = 0; r < 3; ++r) {
            const auto& f = doc.field(role_names[r]);
            if (f.size() != 4 || f[0] != "mode" || f[2] != "omega") throw DataError("assignment file: malformed role line");
            model.assignment.mode_index[r] = std::stoull(f[1]);
            model.assignment.omega[r] = std::stod(f[3]);
        }
        model.tails = model_io::read_triple(doc, "tail");
        if (model.scope == DecompositionScope::full_series) model.stored = model_io::read_triple(doc, "stored");
    }
    auto p = model_io::open_in(dir / "periodic.sarima");
    model.periodic_model = load_sarima(p);
    auto d = model_io::open_in(dir / "deterministic.lstm");
    model.deterministic_model = nn::load_lstm(d);
    auto v = model_io::open_in(dir / "volatility.mlp");
    model.volatility_model = nn::load_mlp(v);
    auto r = model_io::open_in(dir / "recombiner.mlp");
    model.recombiner = nn::load_mlp(r);
    if (model.recombiner.input_size != 3) throw DataError("recombiner must take 3 inputs");
    return model;
}

} // namespace metroflow

#include "metroflow/cli/app.hpp"

#include "metroflow/cli/config.hpp"
#include "metroflow/core/csv.hpp"
#include "metroflow/core/error.hpp"
#include "metroflow/core/stats.hpp"
#include "metroflow/eval/benchmark.hpp"
#include "metroflow/eval/metrics.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace metroflow::cli {

namespace fs = std::filesystem;

namespace {

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    bool quiet = false;
};

/// Effective configuration plus the provenance stamped into every output.
struct Context {
    RunConfig config;
    Provenance provenance;
    fs::path out;
    bool quiet = false;

    void log(const std::string& message) const {
        if (!quiet) std::cerr << "metroflow: " << message << '\n';
    }
    std::vector<std::string> comments() const {
        return {provenance.header_line().substr(2)};
    }
};

std::string num(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

void write_series(const Context& ctx, const fs::path& path, const TimeSeries& series) {
    write_series_csv(path.string(), series, ctx.comments());
}

/// Prepends the provenance line to a file written by a library serializer.
void stamp_file(const Context& ctx, const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream body;
    body << in.rdbuf();
    in.close();
    auto out = open_output(path);
    out << ctx.provenance.header_line() << '\n' << body.str();
}

void stamp_directory(const Context& ctx, const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) stamp_file(ctx, f);
}

TimeSeries read_input(const std::string& path) {
    if (path.empty()) throw ConfigError("missing --input file");
    if (!fs::exists(path)) throw DataError("input file not found: " + path);
    return read_series_csv(path);
}

void cmd_synth(const Context& ctx) {
    const SyntheticSeries s = generate_synthetic(ctx.config.synth);
    write_series(ctx, ctx.out / "series.csv", s.series);
    auto out = open_output(ctx.out / "components.csv");
    out << ctx.provenance.header_line() << '\n' << "timestamp,periodic,autoregressive,noise\n";
    for (std::size_t i = 0; i < s.series.size(); ++i) {
        out << format_timestamp(s.series.timestamp_at(i)) << ',' << num("%.6f", s.periodic[i]) << ','
            << num("%.6f", s.autoregressive[i]) << ',' << num("%.6f", s.noise[i]) << '\n';
    }
    auto cfg = open_output(ctx.out / "config.ini");
    cfg << ctx.provenance.header_line() << '\n' << render_config(ctx.config);
    ctx.log("wrote " + std::to_string(s.series.size()) + " samples to " + (ctx.out / "series.csv").string());
}

void cmd_ingest(const Context& ctx, const std::string& events_path) {
    if (events_path.empty()) throw ConfigError("missing --events file");
    if (!fs::exists(events_path)) throw DataError("events file not found: " + events_path);
    const auto& g = ctx.config.ingest;
    if (g.station.empty()) throw ConfigError("no station given (use --station or [ingest] station)");
    const auto events = read_events_csv(events_path);
    const TimeSeries series = aggregate_events(events, g.station, g.interval_minutes, g.window, g.direction);
    write_series(ctx, ctx.out / "series.csv", series);
    const CalendarSplit parts = split_calendar(series);
    if (!parts.weekday.empty()) write_series(ctx, ctx.out / "weekday.csv", parts.weekday);
    if (!parts.weekend.empty()) write_series(ctx, ctx.out / "weekend.csv", parts.weekend);
    const TimeSeries& chosen = g.day_type == DayType::weekend ? parts.weekend : parts.weekday;
    if (chosen.empty()) throw DataError("no " + to_string(g.day_type) + " days in the events");
    const TrainTestSplit split = split_train_test(chosen, g.train_fraction);
    write_series(ctx, ctx.out / "train.csv", split.train);
    write_series(ctx, ctx.out / "test.csv", split.test);
    ctx.log("aggregated " + std::to_string(series.num_days()) + " days; " + std::to_string(split.train.num_days()) +
            " training and " + std::to_string(split.test.num_days()) + " test " + to_string(g.day_type) + " days");
}

void cmd_decompose(const Context& ctx, const std::string& input) {
    const TimeSeries series = read_input(input);
    const ModeSet modes = vmd_decompose(series.values, ctx.config.ensemble.vmd);
    for (std::size_t k = 0; k < modes.k(); ++k) {
        write_series(ctx, ctx.out / ("mode_" + std::to_string(k) + ".csv"), with_values(series, modes.modes[k]));
    }
    write_series(ctx, ctx.out / "residual.csv", with_values(series, modes.residual));
    {
        auto out = open_output(ctx.out / "modes.meta");
        out << ctx.provenance.header_line() << '\n';
        out << "k " << modes.k() << "\niterations " << modes.iterations_used << "\nconverged "
            << (modes.converged ? 1 : 0) << '\n';
        for (std::size_t k = 0; k < modes.k(); ++k) {
            out << "omega_" << k << ' ' << num("%.17g", modes.center_freqs[k]) << '\n';
        }
    }
    auto out = open_output(ctx.out / "measures.txt");
    out << ctx.provenance.header_line() << '\n';
    out << "component,omega,mean_period,correlation,variance_share\n";
    for (std::size_t k = 0; k < modes.k(); ++k) {
        std::string period = "aperiodic", corr = "nan", share = "nan";
        try {
            period = num("%.4f", mean_period(modes.modes[k]));
        } catch (const DataError&) {
        }
        try {
            const ComponentMeasures m = component_measures(modes.modes[k], series.values);
            corr = num("%.6f", m.correlation);
            share = num("%.4f", m.variance_share);
        } catch (const DataError&) {
        }
        out << "mode_" << k << ',' << num("%.8f", modes.center_freqs[k]) << ',' << period << ',' << corr << ','
            << share << '\n';
    }
    ctx.log("decomposed " + std::to_string(series.size()) + " samples into " + std::to_string(modes.k()) +
            " modes in " + std::to_string(modes.iterations_used) + " iterations");
}

void cmd_fit(const Context& ctx, const std::string& input, const std::string& full_path) {
    const TimeSeries train = read_input(input);
    std::vector<double> full;
    if (ctx.config.ensemble.scope == DecompositionScope::full_series) {
        if (full_path.empty()) throw ConfigError("scope full_series needs --full with the complete series");
        full = read_input(full_path).values;
    }
    const fs::path dir = ctx.out;
    if (ctx.config.model == ModelKind::adaensemble) {
        ctx.log("fitting adaensemble on " + std::to_string(train.size()) + " samples");
        save_ensemble(dir, fit_adaensemble(train, ctx.config.ensemble, full));
    } else {
        ctx.log("fitting " + to_string(ctx.config.model) + " on " + std::to_string(train.size()) + " samples");
        save_single(dir, fit_single(ctx.config.model, train, ctx.config.ensemble, full));
    }
    stamp_directory(ctx, dir);
    ctx.log("model written to " + dir.string());
}

void cmd_forecast(const Context& ctx, const std::string& model_dir, const std::string& input, int horizon) {
    if (model_dir.empty()) throw ConfigError("missing --model-dir");
    if (horizon < 1) throw ConfigError("--horizon must be at least 1");
    if (!fs::is_directory(model_dir)) throw DataError("model directory not found: " + model_dir);
    std::vector<double> forecast;
    if (fs::exists(fs::path(model_dir) / "assignment.txt")) {
        const EnsembleModel model = load_ensemble(model_dir);
        forecast = input.empty() ? forecast_adaensemble(model, horizon).combined
                                 : forecast_adaensemble_from(model, read_input(input).values, horizon).combined;
    } else {
        const SingleModel model = load_single(model_dir);
        if (input.empty()) throw ConfigError("forecasting a benchmark model needs --input with the history");
        forecast = forecast_single(model, read_input(input).values, horizon);
    }
    auto out = open_output(ctx.out / "forecast.csv");
    out << ctx.provenance.header_line() << '\n' << "step,forecast\n";
    for (std::size_t i = 0; i < forecast.size(); ++i) out << i + 1 << ',' << num("%.17g", forecast[i]) << '\n';
    ctx.log("wrote " + std::to_string(forecast.size()) + " forecasts");
}

void cmd_benchmark(const Context& ctx, const std::string& input, const std::string& train_path,
                   const std::string& test_path) {
    const auto& b = ctx.config.benchmark;
    TimeSeries train, test;
    std::string dataset;
    if (!train_path.empty() || !test_path.empty()) {
        if (train_path.empty() || test_path.empty()) throw ConfigError("--train and --test must be given together");
        train = read_input(train_path);
        test = read_input(test_path);
        dataset = fs::path(train_path).filename().string() + "+" + fs::path(test_path).filename().string();
    } else if (!input.empty()) {
        const TrainTestSplit split = split_train_test(read_input(input), b.train_fraction);
        train = split.train;
        test = split.test;
        dataset = fs::path(input).filename().string();
    } else {
        const TrainTestSplit split = split_train_test(generate_synthetic(ctx.config.synth).series, b.train_fraction);
        train = split.train;
        test = split.test;
        dataset = "synthetic (generated from [synth])";
    }
    if (b.max_horizon < 1) throw ConfigError("benchmark.max_horizon must be at least 1");
    std::vector<int> horizons;
    for (int h = 1; h <= b.max_horizon; ++h) horizons.push_back(h);
    ctx.log("benchmarking " + std::to_string(b.models.size()) + " models on " + std::to_string(train.size()) +
            " training and " + std::to_string(test.size()) + " test samples");
    BenchmarkReport report = run_benchmark(train, test, b.models, horizons, ctx.config.ensemble, ctx.config.ensemble.seed);
    report.dataset_id = dataset;
    report.provenance = ctx.provenance;
    {
        auto out = open_output(ctx.out / "report.csv");
        write_report_csv(out, report);
    }
    {
        auto out = open_output(ctx.out / "report.txt");
        write_report_table(out, report);
    }
    for (const std::string metric : {"rmse", "mape"}) {
        auto out = open_output(ctx.out / (metric + ".tsv"));
        write_report_tsv(out, report, metric);
    }
    ctx.log("report written to " + (ctx.out / "report.csv").string());
}

void cmd_stats(const Context& ctx, const std::string& input) {
    const TimeSeries series = read_input(input);
    auto out = open_output(ctx.out / "stats.txt");
    out << ctx.provenance.header_line() << '\n' << "subset,n,mean,std,skewness,kurtosis\n";
    const auto row = [&](const std::string& name, const TimeSeries& s) {
        if (s.size() < 2) return;
        const DescriptiveStats d = descriptive_stats(s.values);
        out << name << ',' << s.size() << ',' << num("%.6f", d.mean) << ',' << num("%.6f", d.std) << ','
            << num("%.6f", d.skewness) << ',' << num("%.6f", d.kurtosis) << '\n';
    };
    row("all", series);
    if (series.has_calendar()) {
        const CalendarSplit parts = split_calendar(series);
        row("weekday", parts.weekday);
        row("weekend", parts.weekend);
    }
    ctx.log("wrote " + (ctx.out / "stats.txt").string());
}

} // namespace

int run(int argc, char** argv) {
    CLI::App app{"Decomposition-ensemble forecasting of metro passenger flow", "metroflow"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", tool_version);

    Globals g;
    app.add_option("--config", g.config_path, "INI configuration file");
    app.add_option("--seed", g.seed, "Master seed (overrides [general] seed)");
    app.add_option("--out", g.out_dir, "Output directory")->capture_default_str();
    app.add_flag("--quiet", g.quiet, "Suppress progress messages");

    std::vector<std::pair<std::string, std::string>> overrides;
    const auto override_opt = [&](CLI::App* sub, const std::string& flag, const std::string& section,
                                  const std::string& key, const std::string& help) {
        sub->add_option_function<std::string>(
            flag, [&overrides, section, key](const std::string& v) { overrides.emplace_back(section + "." + key, v); },
            help);
    };

    std::string input, events, full, model_dir, train_path, test_path;
    int horizon = 0;

    auto* synth = app.add_subcommand("synth", "Generate a synthetic series with ground-truth components");
    override_opt(synth, "--days", "synth", "days", "Number of days");

    auto* ingest = app.add_subcommand("ingest", "Aggregate tap events into interval counts and split them");
    ingest->add_option("--events", events, "CSV of timestamp,station_id,direction")->required();
    override_opt(ingest, "--station", "ingest", "station", "Station identifier");
    override_opt(ingest, "--day-type", "ingest", "day_type", "weekday or weekend");

    auto* decompose = app.add_subcommand("decompose", "Variational mode decomposition of a series");
    decompose->add_option("--input", input, "Series CSV")->required();
    override_opt(decompose, "--k", "vmd", "k", "Number of modes");
    override_opt(decompose, "--alpha", "vmd", "alpha", "Bandwidth penalty");

    auto* fit = app.add_subcommand("fit", "Fit the ensemble or a benchmark model");
    fit->add_option("--input", input, "Training series CSV")->required();
    fit->add_option("--full", full, "Complete series CSV (needed for scope full_series)");
    override_opt(fit, "--model", "general", "model", "adaensemble, sarima, mlp, lstm, vmd_mlp or vmd_lstm");
    override_opt(fit, "--scope", "ensemble", "scope", "train_only or full_series");

    auto* forecast = app.add_subcommand("forecast", "Forecast with a fitted model");
    forecast->add_option("--model-dir", model_dir, "Directory written by fit")->required();
    forecast->add_option("--input", input, "History CSV (default: end of the training data)");
    forecast->add_option("--horizon", horizon, "Number of steps ahead")->required();

    auto* benchmark = app.add_subcommand("benchmark", "Rolling-origin benchmark of the six model kinds");
    benchmark->add_option("--input", input, "Series CSV, split by benchmark.train_fraction");
    benchmark->add_option("--train", train_path, "Training series CSV");
    benchmark->add_option("--test", test_path, "Test series CSV");
    override_opt(benchmark, "--models", "benchmark", "models", "Comma-separated model kinds");
    override_opt(benchmark, "--max-horizon", "benchmark", "max_horizon", "Longest horizon");
    override_opt(benchmark, "--scope", "ensemble", "scope", "train_only or full_series");

    auto* stats = app.add_subcommand("stats", "Descriptive statistics of a series");
    stats->add_option("--input", input, "Series CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        RunConfig config = g.config_path.empty() ? default_run_config() : load_config(g.config_path);
        for (const auto& [name, value] : overrides) {
            const auto dot = name.find('.');
            set_option(config, name.substr(0, dot), name.substr(dot + 1), value);
        }
        config = with_master_seed(config, g.seed.value_or(config.seed));
        config.ensemble.validate();

        Context ctx;
        ctx.config = config;
        ctx.provenance = {tool_version, config_digest(config), config.seed};
        ctx.out = g.out_dir;
        ctx.quiet = g.quiet;
        fs::create_directories(ctx.out);

        if (synth->parsed()) cmd_synth(ctx);
        else if (ingest->parsed()) cmd_ingest(ctx, events);
        else if (decompose->parsed()) cmd_decompose(ctx, input);
        else if (fit->parsed()) cmd_fit(ctx, input, full);
        else if (forecast->parsed()) cmd_forecast(ctx, model_dir, input, horizon);
        else if (benchmark->parsed()) cmd_benchmark(ctx, input, train_path, test_path);
        else if (stats->parsed()) cmd_stats(ctx, input);
        return exit_ok;
    } catch (const ConfigError& e) {
        std::cerr << "metroflow: configuration error: " << e.what() << '\n';
        return exit_usage;
    } catch (const NumericalError& e) {
        std::cerr << "metroflow: numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const DataError& e) {
        std::cerr << "metroflow: data error: " << e.what() << '\n';
        return exit_data;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "metroflow: file error: " << e.what() << '\n';
        return exit_data;
    }
}

} // namespace metroflow::cli

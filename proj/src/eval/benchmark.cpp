#include "metroflow/eval/benchmark.hpp"

#include "metroflow/core/error.hpp"

#include <algorithm>
#include <cstdio>
#include <memory>
#include <ostream>

namespace metroflow {

namespace {

std::string num(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

void write_preamble(std::ostream& out, const BenchmarkReport& report) {
    out << report.provenance.header_line() << '\n';
    if (!report.dataset_id.empty()) out << "# dataset " << report.dataset_id << '\n';
    for (const auto& note : report.notes) out << "# " << note << '\n';
}

} // namespace

std::string Provenance::header_line() const {
    return "# metroflow " + tool_version + " config_digest=" + config_digest + " seed=" + std::to_string(seed);
}

const BenchmarkCell& BenchmarkReport::at(const std::string& model, int horizon) const {
    for (const auto& c : cells) {
        if (c.model == model && c.horizon == horizon) return c;
    }
    throw DataError("no report cell for " + model + " at horizon " + std::to_string(horizon));
}

BenchmarkReport evaluate_forecasters(std::span<const double> train, std::span<const double> test,
                                     const std::vector<NamedForecaster>& forecasters, const std::vector<int>& horizons) {
    if (horizons.empty()) throw DataError("no horizons to evaluate");
    if (train.empty()) throw DataError("empty training block");
    const int h_max = *std::max_element(horizons.begin(), horizons.end());
    if (*std::min_element(horizons.begin(), horizons.end()) < 1) throw DataError("horizons must be at least 1");
    if (test.size() < static_cast<std::size_t>(h_max) + 1) throw DataError("test shorter than max horizon + 1");

    std::vector<double> full(train.begin(), train.end());
    full.insert(full.end(), test.begin(), test.end());
    const std::size_t first_origin = train.size() - 1;
    const std::size_t last_origin = full.size() - 1 - static_cast<std::size_t>(h_max);

    // errors[m][j] collects (actual, predicted) for horizon j.
    const std::size_t nm = forecasters.size(), nh = horizons.size();
    std::vector<std::vector<double>> actual(nm * nh), predicted(nm * nh);
    for (std::size_t o = first_origin; o <= last_origin; ++o) {
        const std::span<const double> history(full.data(), o + 1);
        for (std::size_t m = 0; m < nm; ++m) {
            const std::vector<double> f = forecasters[m].forecast(history, h_max);
            if (f.size() != static_cast<std::size_t>(h_max)) {
                throw DataError(forecasters[m].name + " returned the wrong number of forecasts");
            }
            for (std::size_t j = 0; j < nh; ++j) {
                const auto h = static_cast<std::size_t>(horizons[j]);
                actual[m * nh + j].push_back(full[o + h]);
                predicted[m * nh + j].push_back(f[h - 1]);
            }
        }
    }

    BenchmarkReport report;
    report.horizons = horizons;
    for (std::size_t m = 0; m < nm; ++m) {
        report.models.push_back(forecasters[m].name);
        for (std::size_t j = 0; j < nh; ++j) {
            BenchmarkCell cell;
            cell.model = forecasters[m].name;
            cell.horizon = horizons[j];
            cell.metrics = metric_pair(actual[m * nh + j], predicted[m * nh + j]);
            cell.origins = actual[m * nh + j].size();
            report.cells.push_back(cell);
        }
    }
    report.notes.push_back("rolling origins " + std::to_string(last_origin - first_origin + 1) +
                           ", models fitted once on the training block (no refit per origin)");
    return report;
}

BenchmarkReport run_benchmark(const TimeSeries& train, const TimeSeries& test, const std::vector<ModelKind>& kinds,
                              const std::vector<int>& horizons, const EnsembleConfig& config, std::uint64_t seed) {
    if (kinds.empty()) throw DataError("no model kinds to benchmark");
    EnsembleConfig cfg = config;
    cfg.seed = seed;
    std::vector<double> full(train.values);
    full.insert(full.end(), test.values.begin(), test.values.end());
    const std::span<const double> full_span =
        cfg.scope == DecompositionScope::full_series ? std::span<const double>(full) : std::span<const double>();

    auto cache = std::make_shared<DecompositionCache>();
    std::vector<NamedForecaster> forecasters;
    for (const ModelKind kind : kinds) {
        if (kind == ModelKind::adaensemble) {
            auto model = std::make_shared<const EnsembleModel>(fit_adaensemble(train, cfg, full_span));
            forecasters.push_back({to_string(kind), [model, cache](std::span<const double> history, int h) {
                                       return forecast_adaensemble_from(*model, history, h, cache.get()).combined;
                                   }});
        } else {
            auto model = std::make_shared<const SingleModel>(fit_single(kind, train, cfg, full_span));
            forecasters.push_back({to_string(kind), [model, cache](std::span<const double> history, int h) {
                                       return forecast_single(*model, history, h, cache.get());
                                   }});
        }
    }
    BenchmarkReport report = evaluate_forecasters(train.values, test.values, forecasters, horizons);
    report.provenance.seed = seed;
    report.notes.push_back("decomposition scope " + to_string(cfg.scope));
    return report;
}

void write_report_csv(std::ostream& out, const BenchmarkReport& report) {
    write_preamble(out, report);
    out << "model,horizon,rmse,mape\n";
    for (const auto& c : report.cells) {
        out << c.model << ',' << c.horizon << ',' << num("%.6f", c.metrics.rmse) << ','
            << num("%.6f", c.metrics.mape) << '\n';
    }
}

void write_report_table(std::ostream& out, const BenchmarkReport& report) {
    write_preamble(out, report);
    std::size_t name_width = 5;
    for (const auto& m : report.models) name_width = std::max(name_width, m.size());
    const auto pad = [](const std::string& s, std::size_t w, bool left) {
        return s.size() >= w ? s : (left ? s + std::string(w - s.size(), ' ') : std::string(w - s.size(), ' ') + s);
    };
    for (const char* metric : {"RMSE", "MAPE(%)"}) {
        out << '\n' << metric << " by number of forecasting steps ahead\n";
        out << pad("model", name_width, true);
        for (const int h : report.horizons) out << ' ' << pad("h=" + std::to_string(h), 10, false);
        out << '\n';
        for (const auto& m : report.models) {
            out << pad(m, name_width, true);
            for (const int h : report.horizons) {
                const auto& c = report.at(m, h).metrics;
                out << ' ' << pad(num("%.3f", metric[0] == 'R' ? c.rmse : c.mape), 10, false);
            }
            out << '\n';
        }
    }
}

void write_report_tsv(std::ostream& out, const BenchmarkReport& report, const std::string& metric) {
    if (metric != "rmse" && metric != "mape") throw DataError("unknown metric '" + metric + "'");
    write_preamble(out, report);
    out << "horizon";
    for (const auto& m : report.models) out << '\t' << m;
    out << '\n';
    for (const int h : report.horizons) {
        out << h;
        for (const auto& m : report.models) {
            const auto& c = report.at(m, h).metrics;
            out << '\t' << num("%.6f", metric == "rmse" ? c.rmse : c.mape);
        }
        out << '\n';
    }
}

} // namespace metroflow

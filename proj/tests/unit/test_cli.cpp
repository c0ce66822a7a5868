#include "metroflow/cli/app.hpp"
#include "metroflow/cli/config.hpp"
#include "metroflow/core/csv.hpp"
#include "metroflow/core/error.hpp"
#include "metroflow/ensemble/ensemble.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace metroflow;
using namespace metroflow::cli;
namespace fs = std::filesystem;

namespace {

int invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "metroflow");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run(static_cast<int>(argv.size()), argv.data());
}

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("metroflow_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string read_all(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

/// Small and fast: 12 days of 24 half-hour points, light training.
const char* small_ini = R"([general]
seed = 3
[synth]
days = 15
points_per_day = 24
interval_minutes = 30
day_start_minute = 360
[sarima]
max_p = 2
max_q = 2
max_P = 1
max_Q = 1
[mlp]
epochs = 10
hidden_sizes = 3,4
lag_cap = 6
[lstm]
epochs = 5
hidden_sizes = 3
lag_cap = 4
[recombiner]
epochs = 10
hidden_sizes = 3
[benchmark]
max_horizon = 3
models = sarima,mlp
)";

} // namespace

TEST(Config, DefaultsRenderAndParseBack) {
    const RunConfig c = default_run_config();
    const std::string text = render_config(c);
    EXPECT_EQ(render_config(parse_config(text)), text);
    EXPECT_EQ(config_digest(c), config_digest(parse_config(text)));
    EXPECT_EQ(config_digest(c).size(), 16u);
}

TEST(Config, DigestIsFnv1aOfTheRendering) {
    const std::string text = render_config(default_run_config());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    EXPECT_EQ(config_digest(default_run_config()), buf);
}

TEST(Config, OverridesAndRejections) {
    RunConfig c = parse_config("[vmd]\nk = 3\nalpha = 500\n[mlp]\nhidden_sizes = 4-6\n[ensemble]\nscope = full_series\n");
    EXPECT_EQ(c.ensemble.vmd.alpha, 500.0);
    EXPECT_EQ(c.ensemble.mlp.hidden_sizes, (std::vector<int>{4, 5, 6}));
    EXPECT_EQ(c.ensemble.scope, DecompositionScope::full_series);
    EXPECT_THROW(parse_config("[vmd]\nbogus = 1\n"), ConfigError);
    EXPECT_THROW(parse_config("[nowhere]\nk = 1\n"), ConfigError);
    EXPECT_THROW(parse_config("[vmd]\nk = three\n"), ConfigError);
    EXPECT_THROW(parse_config("k = 3\n"), ConfigError);
    set_option(c, "benchmark", "models", "sarima,adaensemble");
    EXPECT_EQ(c.benchmark.models.size(), 2u);
    EXPECT_THROW(set_option(c, "benchmark", "models", "sarima,foo"), ConfigError);
    EXPECT_EQ(parse_sizes("4,6,8"), (std::vector<int>{4, 6, 8}));
    EXPECT_THROW(parse_sizes("8-4"), ConfigError);
}

TEST(Config, MasterSeedSplitsPerSubsystem) {
    const RunConfig a = with_master_seed(default_run_config(), 7);
    const RunConfig b = with_master_seed(default_run_config(), 8);
    EXPECT_EQ(a.seed, 7u);
    EXPECT_NE(a.ensemble.seed, a.ensemble.vmd.seed);
    EXPECT_NE(a.ensemble.seed, a.synth.seed);
    EXPECT_NE(a.ensemble.seed, b.ensemble.seed);
    EXPECT_NE(config_digest(a), config_digest(b));
}

TEST(Cli, UsageErrorsExitWithOne) {
    EXPECT_EQ(invoke({}), exit_usage);
    EXPECT_EQ(invoke({"frobnicate"}), exit_usage);
    EXPECT_EQ(invoke({"stats"}), exit_usage); // --input is required
    const fs::path dir = scratch_dir("usage");
    write_file(dir / "bad.ini", "[vmd]\nnot_a_key = 1\n");
    EXPECT_EQ(invoke({"--config", (dir / "bad.ini").string(), "--quiet", "synth", "--out", dir.string()}), exit_usage);
    EXPECT_EQ(invoke({"--config", (dir / "missing.ini").string(), "synth"}), exit_usage);
}

TEST(Cli, DataErrorsExitWithTwo) {
    const fs::path dir = scratch_dir("data");
    EXPECT_EQ(invoke({"--quiet", "stats", "--input", (dir / "nope.csv").string(), "--out", dir.string()}), exit_data);
    write_file(dir / "bad.csv", "timestamp,value\n2013-10-14T06:30:00,abc\n");
    EXPECT_EQ(invoke({"--quiet", "stats", "--input", (dir / "bad.csv").string(), "--out", dir.string()}), exit_data);
}

TEST(Cli, SynthIsDeterministicAndStamped) {
    const fs::path a = scratch_dir("synth_a"), b = scratch_dir("synth_b");
    ASSERT_EQ(invoke({"--seed", "7", "--quiet", "--out", a.string(), "synth"}), exit_ok);
    ASSERT_EQ(invoke({"--seed", "7", "--quiet", "--out", b.string(), "synth"}), exit_ok);
    for (const char* f : {"series.csv", "components.csv", "config.ini"}) {
        EXPECT_EQ(read_all(a / f), read_all(b / f)) << f;
        EXPECT_EQ(first_line(a / f).rfind("# metroflow 0.1.0 config_digest=", 0), 0u) << f;
        EXPECT_NE(first_line(a / f).find("seed=7"), std::string::npos) << f;
    }
    const TimeSeries s = read_series_csv((a / "series.csv").string());
    EXPECT_EQ(s.points_per_day, 71);
    EXPECT_EQ(s.num_days(), 20u);
}

TEST(Cli, DecomposeWritesModeFiles) {
    const fs::path dir = scratch_dir("decompose");
    TimeSeries s;
    s.points_per_day = 50;
    s.interval_minutes = 15;
    s.day_start_minute = 0;
    for (int d = 0; d < 20; ++d) s.days.push_back(Date{std::chrono::year{2013} / 10 / 14} + std::chrono::days{d});
    for (int t = 0; t < 1000; ++t) {
        s.values.push_back(std::cos(2 * std::numbers::pi * 0.03 * t) + std::cos(2 * std::numbers::pi * 0.2 * t));
    }
    s.start = s.timestamp_at(0);
    write_series_csv((dir / "two_tone.csv").string(), s);
    ASSERT_EQ(invoke({"--quiet", "--out", (dir / "out").string(), "decompose", "--input", (dir / "two_tone.csv").string(),
                      "--k", "3"}),
              exit_ok);
    for (const char* f : {"mode_0.csv", "mode_1.csv", "mode_2.csv", "residual.csv", "modes.meta", "measures.txt"}) {
        EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
    }
    EXPECT_FALSE(fs::exists(dir / "out" / "mode_3.csv"));
    const std::string meta = read_all(dir / "out" / "modes.meta");
    EXPECT_NE(meta.find("converged"), std::string::npos);
    EXPECT_NE(meta.find("omega_2"), std::string::npos);
}

TEST(Cli, FitForecastMatchesInMemoryPipeline) {
    const fs::path dir = scratch_dir("fit");
    const fs::path ini = dir / "small.ini";
    write_file(ini, small_ini);
    ASSERT_EQ(invoke({"--config", ini.string(), "--quiet", "--out", dir.string(), "synth"}), exit_ok);
    const fs::path model = dir / "model";
    ASSERT_EQ(invoke({"--config", ini.string(), "--quiet", "--out", model.string(), "fit", "--input",
                      (dir / "series.csv").string()}),
              exit_ok);
    const fs::path fc = dir / "fc";
    ASSERT_EQ(invoke({"--config", ini.string(), "--quiet", "--out", fc.string(), "forecast", "--model-dir", model.string(),
                      "--horizon", "4"}),
              exit_ok);
    EXPECT_EQ(first_line(model / "assignment.txt").rfind("# metroflow 0.1.0", 0), 0u);

    const RunConfig c = with_master_seed(load_config(ini.string()), 3);
    const TimeSeries series = read_series_csv((dir / "series.csv").string());
    const auto expected = forecast_adaensemble(fit_adaensemble(series, c.ensemble), 4).combined;
    std::ifstream in(fc / "forecast.csv");
    std::string line;
    std::vector<double> got;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("step", 0) == 0) continue;
        got.push_back(std::stod(line.substr(line.find(',') + 1)));
    }
    EXPECT_EQ(got, expected);

    EXPECT_EQ(invoke({"--quiet", "--out", fc.string(), "forecast", "--model-dir", model.string(), "--horizon", "0"}),
              exit_usage);
    EXPECT_EQ(invoke({"--quiet", "--out", fc.string(), "forecast", "--model-dir", (dir / "none").string(), "--horizon",
                      "2"}),
              exit_data);
}

TEST(Cli, BenchmarkReportGrid) {
    const fs::path dir = scratch_dir("bench");
    const fs::path ini = dir / "small.ini";
    write_file(ini, small_ini);
    ASSERT_EQ(invoke({"--config", ini.string(), "--quiet", "--out", dir.string(), "benchmark"}), exit_ok);
    std::ifstream in(dir / "report.csv");
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#' && line.rfind("model", 0) != 0) ++rows;
    }
    EXPECT_EQ(rows, 2 * 3);
    for (const char* f : {"report.txt", "rmse.tsv", "mape.tsv"}) EXPECT_TRUE(fs::exists(dir / f)) << f;
}

TEST(Cli, IngestAndStats) {
    const fs::path dir = scratch_dir("ingest");
    std::ostringstream events;
    events << "timestamp,station_id,direction\n";
    const Date monday = Date{std::chrono::year{2013} / 10 / 14};
    for (int d = 0; d < 14; ++d) {
        const Date day = monday + std::chrono::days{d};
        const std::chrono::year_month_day ymd{day};
        for (int k = 0; k < 40 + d; ++k) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:00,S1,%s\n", static_cast<int>(ymd.year()),
                          static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), 7 + k % 16, (k * 7) % 60,
                          k % 3 ? "entry" : "exit");
            events << buf;
        }
    }
    write_file(dir / "events.csv", events.str());
    ASSERT_EQ(invoke({"--quiet", "--out", dir.string(), "ingest", "--events", (dir / "events.csv").string(), "--station",
                      "S1"}),
              exit_ok);
    const TimeSeries weekday = read_series_csv((dir / "weekday.csv").string());
    EXPECT_EQ(weekday.num_days(), 10u);
    EXPECT_EQ(weekday.points_per_day, 70);
    EXPECT_EQ(read_series_csv((dir / "train.csv").string()).num_days(), 6u);
    EXPECT_EQ(read_series_csv((dir / "test.csv").string()).num_days(), 4u);
    EXPECT_EQ(invoke({"--quiet", "--out", dir.string(), "ingest", "--events", (dir / "events.csv").string(), "--station",
                      "S9"}),
              exit_data);
    ASSERT_EQ(invoke({"--quiet", "--out", dir.string(), "stats", "--input", (dir / "series.csv").string()}), exit_ok);
    const std::string stats = read_all(dir / "stats.txt");
    EXPECT_NE(stats.find("\nall,980,"), std::string::npos);
    EXPECT_NE(stats.find("\nweekend,280,"), std::string::npos);
}

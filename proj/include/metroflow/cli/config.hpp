#pragma once

#include "metroflow/core/events.hpp"
#include "metroflow/core/synthetic.hpp"
#include "metroflow/ensemble/ensemble.hpp"
#include "metroflow/ensemble/single.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace metroflow::cli {

inline constexpr const char* tool_version = "0.1.0";

struct IngestOptions {
    std::string station;
    int interval_minutes = 15;
    ServiceWindow window;
    DirectionFilter direction = DirectionFilter::both;
    /// Day type modelled after the calendar split (weekday or weekend).
    DayType day_type = DayType::weekday;
    double train_fraction = 2.0 / 3.0;
};

struct BenchmarkOptions {
    int max_horizon = 10;
    std::vector<ModelKind> models = all_model_kinds();
    double train_fraction = 2.0 / 3.0;
};

/**
 * Everything a run depends on. The INI file has one section per subsystem
 * ([general] [vmd] [sarima] [mlp] [lstm] [recombiner] [ensemble] [benchmark]
 * [synth] [ingest]); unknown sections or keys are rejected.
 */
struct RunConfig {
    std::uint64_t seed = 0;
    EnsembleConfig ensemble;
    ModelKind model = ModelKind::adaensemble;
    SyntheticConfig synth;
    IngestOptions ingest;
    BenchmarkOptions benchmark;
};

/// Defaults match the library defaults, with a synthetic generator resembling one station's weekday flow.
RunConfig default_run_config();

/// Applies `key = value` lines on top of `base`. Throws ConfigError with the offending line.
RunConfig parse_config(const std::string& text, RunConfig base = default_run_config());
RunConfig load_config(const std::string& path, RunConfig base = default_run_config());

/// Sets one `section.key` (as a flag override would); throws ConfigError for unknown keys.
void set_option(RunConfig& config, const std::string& section, const std::string& key, const std::string& value);

/// Canonical INI rendering of every field; parse_config(render_config(c)) reproduces c.
std::string render_config(const RunConfig& config);

/// 16 hex digits of the FNV-1a hash of render_config(config).
std::string config_digest(const RunConfig& config);

/// Hidden-size candidates written as "4-15" or "4,6,8".
std::vector<int> parse_sizes(const std::string& text);

/// Per-subsystem seeds drawn from the master seed: the ensemble seed, VMD seed and generator seed.
RunConfig with_master_seed(RunConfig config, std::uint64_t seed);

} // namespace metroflow::cli

#include "metroflow/cli/config.hpp"

#include "metroflow/core/error.hpp"
#include "metroflow/core/rng.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace metroflow::cli {

namespace {

enum SeedStream : std::uint64_t { ensemble_stream = 1, vmd_stream = 2, synth_stream = 3 };

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string fmt(double v) {
    // shortest text that reads back to the same double
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError(key + ": expected a number, got '" + v + "'");
    return out;
}

long long to_int(const std::string& key, const std::string& v) {
    long long out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

int clock_minutes(const std::string& key, const std::string& v) {
    const auto parts = split(v, ':');
    if (parts.size() != 2) throw ConfigError(key + ": expected HH:MM, got '" + v + "'");
    const auto h = to_int(key, parts[0]), m = to_int(key, parts[1]);
    if (h < 0 || h > 24 || m < 0 || m > 59 || (h == 24 && m != 0)) throw ConfigError(key + ": invalid clock time '" + v + "'");
    return static_cast<int>(h * 60 + m);
}

std::string clock_text(int minutes) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d:%02d", minutes / 60, minutes % 60);
    return buf;
}

std::string join_sizes(const std::vector<int>& sizes) {
    std::string out;
    for (std::size_t i = 0; i < sizes.size(); ++i) out += (i ? "," : "") + std::to_string(sizes[i]);
    return out;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
    return out;
}

std::string search_text(OrderSearch s) { return s == OrderSearch::stepwise ? "stepwise" : "grid"; }

std::string direction_text(DirectionFilter d) {
    switch (d) {
    case DirectionFilter::both: return "both";
    case DirectionFilter::entry: return "entry";
    case DirectionFilter::exit: return "exit";
    }
    return "both";
}

void set_network(NetworkOptions& o, const std::string& name, const std::string& key, const std::string& v) {
    const std::string full = name + "." + key;
    if (key == "learning_rate") o.train.learning_rate = to_double(full, v);
    else if (key == "epochs") o.train.epochs = static_cast<int>(to_int(full, v));
    else if (key == "batch_size") o.train.batch_size = static_cast<std::size_t>(to_u64(full, v));
    else if (key == "momentum") o.train.momentum = to_double(full, v);
    else if (key == "clip_norm") o.train.clip_norm = to_double(full, v);
    else if (key == "hidden_sizes") o.hidden_sizes = parse_sizes(v);
    else if (key == "lag_cap") o.lag_cap = static_cast<std::size_t>(to_u64(full, v));
    else if (key == "tie_tolerance") o.tie_tolerance = to_double(full, v);
    else throw ConfigError("unknown config key '" + full + "'");
}

void render_network(std::ostream& out, const std::string& name, const NetworkOptions& o) {
    out << "\n[" << name << "]\n"
        << "learning_rate = " << fmt(o.train.learning_rate) << '\n'
        << "epochs = " << o.train.epochs << '\n'
        << "batch_size = " << o.train.batch_size << '\n'
        << "momentum = " << fmt(o.train.momentum) << '\n'
        << "clip_norm = " << fmt(o.train.clip_norm) << '\n'
        << "hidden_sizes = " << join_sizes(o.hidden_sizes) << '\n'
        << "lag_cap = " << o.lag_cap << '\n'
        << "tie_tolerance = " << fmt(o.tie_tolerance) << '\n';
}

} // namespace

std::vector<int> parse_sizes(const std::string& text) {
    std::vector<int> out;
    const std::string t = trim(text);
    const auto dash = t.find('-');
    if (dash != std::string::npos && t.find(',') == std::string::npos) {
        const auto lo = to_int("hidden_sizes", trim(t.substr(0, dash)));
        const auto hi = to_int("hidden_sizes", trim(t.substr(dash + 1)));
        if (lo < 1 || hi < lo) throw ConfigError("hidden_sizes: invalid range '" + text + "'");
        for (auto q = lo; q <= hi; ++q) out.push_back(static_cast<int>(q));
        return out;
    }
    for (const auto& item : split(t, ',')) {
        const auto q = to_int("hidden_sizes", item);
        if (q < 1) throw ConfigError("hidden_sizes: sizes must be positive");
        out.push_back(static_cast<int>(q));
    }
    if (out.empty()) throw ConfigError("hidden_sizes: empty candidate set");
    return out;
}

RunConfig default_run_config() {
    RunConfig c;
    c.synth.days = 20;
    c.synth.points_per_day = 71;
    c.synth.base_level = 600.0;
    // Quiet at opening and closing, busy around 08:00 and 17:00.
    c.synth.harmonics = {{200.0, 3.14}, {200.0, -1.1}, {60.0, -1.6}};
    c.synth.ar_coeffs = {0.6, 0.2};
    c.synth.ar_innovation_std = 20.0;
    c.synth.noise_std = 10.0;
    c.synth.weekend_scale = 1.0;
    return c;
}

void set_option(RunConfig& c, const std::string& section, const std::string& key, const std::string& v) {
    const std::string full = section + "." + key;
    auto unknown = [&] { throw ConfigError("unknown config key '" + full + "'"); };
    if (section == "general") {
        if (key == "seed") c.seed = to_u64(full, v);
        else if (key == "model") c.model = model_kind_from_string(v);
        else unknown();
    } else if (section == "vmd") {
        auto& m = c.ensemble.vmd;
        if (key == "k") m.k = static_cast<int>(to_int(full, v));
        else if (key == "alpha") m.alpha = to_double(full, v);
        else if (key == "tau") m.tau = to_double(full, v);
        else if (key == "tol") m.tol = to_double(full, v);
        else if (key == "max_iter") m.max_iter = static_cast<int>(to_int(full, v));
        else if (key == "init_omega") {
            try {
                m.init_omega = omega_init_from_string(v);
            } catch (const std::exception& e) {
                throw ConfigError(full + ": " + e.what());
            }
        } else if (key == "pin_dc") m.pin_dc = to_bool(full, v);
        else if (key == "mirror_extend") m.mirror_extend = to_bool(full, v);
        else unknown();
    } else if (section == "sarima") {
        auto& s = c.ensemble.sarima;
        if (key == "max_p") s.max_p = static_cast<int>(to_int(full, v));
        else if (key == "max_q") s.max_q = static_cast<int>(to_int(full, v));
        else if (key == "max_P") s.max_P = static_cast<int>(to_int(full, v));
        else if (key == "max_Q") s.max_Q = static_cast<int>(to_int(full, v));
        else if (key == "search") {
            if (v == "stepwise") s.mode = OrderSearch::stepwise;
            else if (v == "grid") s.mode = OrderSearch::grid;
            else throw ConfigError(full + ": expected stepwise or grid, got '" + v + "'");
        } else if (key == "max_models") s.max_models = static_cast<int>(to_int(full, v));
        else if (key == "max_order") s.max_order = static_cast<int>(to_int(full, v));
        else if (key == "min_root_modulus") s.min_root_modulus = to_double(full, v);
        else if (key == "seasonal_acf_threshold") s.seasonal_acf_threshold = to_double(full, v);
        else if (key == "variance_ratio_threshold") s.variance_ratio_threshold = to_double(full, v);
        else unknown();
    } else if (section == "mlp") {
        set_network(c.ensemble.mlp, section, key, v);
    } else if (section == "lstm") {
        set_network(c.ensemble.lstm, section, key, v);
    } else if (section == "recombiner") {
        set_network(c.ensemble.recombiner, section, key, v);
    } else if (section == "ensemble") {
        if (key == "scope") c.ensemble.scope = decomposition_scope_from_string(v);
        else if (key == "boundary_extension_days") c.ensemble.boundary_extension_days = to_double(full, v);
        else if (key == "boundary_extension") c.ensemble.boundary_extension = boundary_extension_from_string(v);
        else unknown();
    } else if (section == "benchmark") {
        if (key == "max_horizon") c.benchmark.max_horizon = static_cast<int>(to_int(full, v));
        else if (key == "models") {
            c.benchmark.models.clear();
            for (const auto& item : split(v, ',')) c.benchmark.models.push_back(model_kind_from_string(item));
            if (c.benchmark.models.empty()) throw ConfigError(full + ": no models listed");
        } else if (key == "train_fraction") c.benchmark.train_fraction = to_double(full, v);
        else unknown();
    } else if (section == "synth") {
        auto& s = c.synth;
        if (key == "days") s.days = static_cast<int>(to_int(full, v));
        else if (key == "points_per_day") s.points_per_day = static_cast<int>(to_int(full, v));
        else if (key == "interval_minutes") s.interval_minutes = static_cast<int>(to_int(full, v));
        else if (key == "day_start_minute") s.day_start_minute = static_cast<int>(to_int(full, v));
        else if (key == "start_date") {
            try {
                s.start_date = std::chrono::floor<std::chrono::days>(parse_timestamp(v + "T00:00:00"));
            } catch (const std::exception&) {
                throw ConfigError(full + ": expected YYYY-MM-DD, got '" + v + "'");
            }
        } else if (key == "base_level") s.base_level = to_double(full, v);
        else if (key == "harmonics") {
            s.harmonics.clear();
            for (const auto& item : split(v, ',')) {
                const auto parts = split(item, ':');
                if (parts.size() != 2) throw ConfigError(full + ": expected amplitude:phase pairs, got '" + item + "'");
                s.harmonics.push_back({to_double(full, parts[0]), to_double(full, parts[1])});
            }
        } else if (key == "ar_coeffs") {
            s.ar_coeffs.clear();
            for (const auto& item : split(v, ',')) s.ar_coeffs.push_back(to_double(full, item));
        } else if (key == "ar_innovation_std") s.ar_innovation_std = to_double(full, v);
        else if (key == "noise_std") s.noise_std = to_double(full, v);
        else if (key == "weekend_scale") s.weekend_scale = to_double(full, v);
        else unknown();
    } else if (section == "ingest") {
        auto& g = c.ingest;
        if (key == "station") g.station = v;
        else if (key == "interval_minutes") g.interval_minutes = static_cast<int>(to_int(full, v));
        else if (key == "service_start") g.window.start_minute = clock_minutes(full, v);
        else if (key == "service_end") g.window.end_minute = clock_minutes(full, v);
        else if (key == "direction") {
            if (v == "both") g.direction = DirectionFilter::both;
            else if (v == "entry") g.direction = DirectionFilter::entry;
            else if (v == "exit") g.direction = DirectionFilter::exit;
            else throw ConfigError(full + ": expected both, entry or exit, got '" + v + "'");
        } else if (key == "day_type") {
            if (v == "weekday") g.day_type = DayType::weekday;
            else if (v == "weekend") g.day_type = DayType::weekend;
            else throw ConfigError(full + ": expected weekday or weekend, got '" + v + "'");
        } else if (key == "train_fraction") g.train_fraction = to_double(full, v);
        else unknown();
    } else {
        throw ConfigError("unknown config section '[" + section + "]'");
    }
}

RunConfig parse_config(const std::string& text, RunConfig base) {
    std::istringstream in(text);
    std::string line, section;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        try {
            if (line.front() == '[') {
                if (line.back() != ']') throw ConfigError("malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw ConfigError("expected 'key = value'");
            if (section.empty()) throw ConfigError("key outside of a section");
            set_option(base, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(number) + ": " + e.what());
        }
    }
    return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

std::string render_config(const RunConfig& c) {
    std::ostringstream out;
    const auto& v = c.ensemble.vmd;
    const auto& s = c.ensemble.sarima;
    out << "[general]\nseed = " << c.seed << "\nmodel = " << to_string(c.model) << '\n';
    out << "\n[vmd]\nk = " << v.k << "\nalpha = " << fmt(v.alpha) << "\ntau = " << fmt(v.tau) << "\ntol = " << fmt(v.tol)
        << "\nmax_iter = " << v.max_iter << "\ninit_omega = " << to_string(v.init_omega)
        << "\npin_dc = " << bool_text(v.pin_dc) << "\nmirror_extend = " << bool_text(v.mirror_extend) << '\n';
    out << "\n[sarima]\nmax_p = " << s.max_p << "\nmax_q = " << s.max_q << "\nmax_P = " << s.max_P
        << "\nmax_Q = " << s.max_Q << "\nsearch = " << search_text(s.mode) << "\nmax_models = " << s.max_models
        << "\nmax_order = " << s.max_order << "\nmin_root_modulus = " << fmt(s.min_root_modulus)
        << "\nseasonal_acf_threshold = " << fmt(s.seasonal_acf_threshold)
        << "\nvariance_ratio_threshold = " << fmt(s.variance_ratio_threshold) << '\n';
    render_network(out, "mlp", c.ensemble.mlp);
    render_network(out, "lstm", c.ensemble.lstm);
    render_network(out, "recombiner", c.ensemble.recombiner);
    out << "\n[ensemble]\nscope = " << to_string(c.ensemble.scope)
        << "\nboundary_extension_days = " << fmt(c.ensemble.boundary_extension_days)
        << "\nboundary_extension = " << to_string(c.ensemble.boundary_extension) << '\n';
    out << "\n[benchmark]\nmax_horizon = " << c.benchmark.max_horizon << "\nmodels = ";
    for (std::size_t i = 0; i < c.benchmark.models.size(); ++i) out << (i ? "," : "") << to_string(c.benchmark.models[i]);
    out << "\ntrain_fraction = " << fmt(c.benchmark.train_fraction) << '\n';
    const auto& y = c.synth;
    out << "\n[synth]\ndays = " << y.days << "\npoints_per_day = " << y.points_per_day
        << "\ninterval_minutes = " << y.interval_minutes << "\nday_start_minute = " << y.day_start_minute
        << "\nstart_date = " << format_timestamp(y.start_date).substr(0, 10) << "\nbase_level = " << fmt(y.base_level)
        << "\nharmonics = ";
    for (std::size_t i = 0; i < y.harmonics.size(); ++i) {
        out << (i ? "," : "") << fmt(y.harmonics[i].amplitude) << ':' << fmt(y.harmonics[i].phase);
    }
    out << "\nar_coeffs = " << join_doubles(y.ar_coeffs) << "\nar_innovation_std = " << fmt(y.ar_innovation_std)
        << "\nnoise_std = " << fmt(y.noise_std) << "\nweekend_scale = " << fmt(y.weekend_scale) << '\n';
    const auto& g = c.ingest;
    out << "\n[ingest]\nstation = " << g.station << "\ninterval_minutes = " << g.interval_minutes
        << "\nservice_start = " << clock_text(g.window.start_minute)
        << "\nservice_end = " << clock_text(g.window.end_minute) << "\ndirection = " << direction_text(g.direction)
        << "\nday_type = " << to_string(g.day_type) << "\ntrain_fraction = " << fmt(g.train_fraction) << '\n';
    return out.str();
}

std::string config_digest(const RunConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : render_config(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunConfig with_master_seed(RunConfig config, std::uint64_t seed) {
    config.seed = seed;
    config.ensemble.seed = derive_seed(seed, ensemble_stream);
    config.ensemble.vmd.seed = derive_seed(seed, vmd_stream);
    config.synth.seed = derive_seed(seed, synth_stream);
    return config;
}

} // namespace metroflow::cli

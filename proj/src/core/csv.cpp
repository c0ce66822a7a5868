#include "metroflow/core/csv.hpp"

#include "metroflow/core/error.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace metroflow {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool skip_line(const std::string& line) {
    const auto t = trim(line);
    return t.empty() || t.front() == '#';
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return in;
}

} // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::vector<TapEvent> read_events_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<TapEvent> events;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_line(line)) continue;
        const auto fields = split_csv_line(line);
        if (!header_seen) {
            if (fields != std::vector<std::string>{"timestamp", "station_id", "direction"}) {
                throw DataError("events CSV: expected header 'timestamp,station_id,direction'");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 3) {
            throw DataError("events CSV line " + std::to_string(line_no) + ": expected 3 fields");
        }
        TapEvent ev;
        ev.timestamp = parse_timestamp(fields[0]);
        ev.station_id = fields[1];
        if (fields[2] == "entry") {
            ev.direction = Direction::entry;
        } else if (fields[2] == "exit") {
            ev.direction = Direction::exit;
        } else {
            throw DataError("events CSV line " + std::to_string(line_no) + ": direction must be entry or exit");
        }
        events.push_back(std::move(ev));
    }
    if (!header_seen) throw DataError("events CSV: missing header");
    return events;
}

std::vector<TapEvent> read_events_csv(const std::string& path) {
    auto in = open_input(path);
    return read_events_csv(in);
}

TimeSeries read_series_csv(std::istream& in) {
    using namespace std::chrono;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<std::pair<Timestamp, double>> rows_read;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_line(line)) continue;
        const auto fields = split_csv_line(line);
        if (!header_seen) {
            if (fields.size() != 2 || fields[0] != "timestamp" || (fields[1] != "value" && fields[1] != "count")) {
                throw DataError("series CSV: expected header 'timestamp,value' or 'timestamp,count'");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 2) {
            throw DataError("series CSV line " + std::to_string(line_no) + ": expected 2 fields");
        }
        const Timestamp ts = parse_timestamp(fields[0]);
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(fields[1], &used);
            if (used != fields[1].size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw DataError("series CSV line " + std::to_string(line_no) + ": malformed number '" + fields[1] + "'");
        }
        rows_read.emplace_back(ts, v);
    }
    if (!header_seen) throw DataError("series CSV: missing header");
    if (rows_read.empty()) throw DataError("series CSV: no data rows");

    // Rows belong to the service day that opened at the first row's clock time, so a
    // closing grid point at 24:00 stays with its own day.
    const auto opening = rows_read.front().first - floor<days>(rows_read.front().first);
    std::map<Date, std::vector<std::pair<Timestamp, double>>> by_day;
    for (const auto& r : rows_read) by_day[floor<days>(r.first - opening)].push_back(r);

    TimeSeries out;
    std::size_t ppd = 0;
    for (const auto& [day, rows] : by_day) ppd = std::max(ppd, rows.size());
    const auto& first_rows = by_day.begin()->second;
    if (first_rows.size() >= 2) {
        out.interval_minutes = static_cast<int>(duration_cast<minutes>(first_rows[1].first - first_rows[0].first).count());
    }
    out.points_per_day = static_cast<int>(ppd);
    out.day_start_minute = static_cast<int>(duration_cast<minutes>(first_rows[0].first - Timestamp{by_day.begin()->first}).count());
    for (const auto& [day, rows] : by_day) {
        if (rows.size() != ppd) {
            throw DataError("series CSV: day with " + std::to_string(rows.size()) + " samples, expected " + std::to_string(ppd));
        }
        out.days.push_back(day);
        for (const auto& r : rows) out.values.push_back(r.second);
    }
    out.start = out.timestamp_at(0);
    bool any_weekday = false, any_weekend = false;
    for (const auto d : out.days) (is_weekend(d) ? any_weekend : any_weekday) = true;
    out.day_type = any_weekday && any_weekend ? DayType::mixed
                   : any_weekend             ? DayType::weekend
                                             : DayType::weekday;
    out.validate();
    return out;
}

TimeSeries read_series_csv(const std::string& path) {
    auto in = open_input(path);
    return read_series_csv(in);
}

void write_series_csv(std::ostream& out, const TimeSeries& series, const std::vector<std::string>& comment) {
    for (const auto& c : comment) out << "# " << c << '\n';
    out << "timestamp,value\n";
    char buf[64];
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6f", series.values[i]);
        out << format_timestamp(series.timestamp_at(i)) << ',' << buf << '\n';
    }
}

void write_series_csv(const std::string& path, const TimeSeries& series, const std::vector<std::string>& comment) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    write_series_csv(out, series, comment);
}

} // namespace metroflow

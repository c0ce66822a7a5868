#include "metroflow/core/events.hpp"

#include "metroflow/core/error.hpp"

#include <algorithm>

namespace metroflow {

int bins_per_day(const ServiceWindow& window, int interval_minutes) {
    if (interval_minutes <= 0) throw DataError("interval_minutes must be positive");
    const int span = window.end_minute - window.start_minute;
    if (window.start_minute < 0 || window.end_minute > 24 * 60 || span <= 0) {
        throw DataError("invalid service window");
    }
    return (span + interval_minutes - 1) / interval_minutes;
}

TimeSeries aggregate_events(std::span<const TapEvent> events, std::string_view station,
                            int interval_minutes, ServiceWindow window, DirectionFilter filter) {
    using namespace std::chrono;
    if (events.empty()) throw DataError("no events");
    const int bins = bins_per_day(window, interval_minutes);

    const auto [lo, hi] = std::minmax_element(events.begin(), events.end(),
        [](const TapEvent& a, const TapEvent& b) { return a.timestamp < b.timestamp; });
    const Date first_day = floor<days>(lo->timestamp);
    const Date last_day = floor<days>(hi->timestamp);
    const auto n_days = static_cast<std::size_t>((last_day - first_day).count()) + 1;

    bool station_seen = false;
    std::vector<double> counts(n_days * static_cast<std::size_t>(bins), 0.0);
    for (const auto& ev : events) {
        if (ev.station_id != station) continue;
        station_seen = true;
        if (filter == DirectionFilter::entry && ev.direction != Direction::entry) continue;
        if (filter == DirectionFilter::exit && ev.direction != Direction::exit) continue;
        const Date day = floor<days>(ev.timestamp);
        const auto minute = duration_cast<minutes>(ev.timestamp - Timestamp{day}).count();
        if (minute < window.start_minute || minute >= window.end_minute) continue;
        const auto bin = static_cast<std::size_t>((minute - window.start_minute) / interval_minutes);
        const auto d = static_cast<std::size_t>((day - first_day).count());
        counts[d * static_cast<std::size_t>(bins) + bin] += 1.0;
    }
    if (!station_seen) throw DataError("unknown station '" + std::string(station) + "'");

    TimeSeries out;
    out.interval_minutes = interval_minutes;
    out.points_per_day = bins;
    out.day_start_minute = window.start_minute;
    out.values = std::move(counts);
    for (std::size_t d = 0; d < n_days; ++d) out.days.push_back(first_day + std::chrono::days{static_cast<long>(d)});
    out.start = out.timestamp_at(0);
    bool any_weekday = false, any_weekend = false;
    for (const auto d : out.days) (is_weekend(d) ? any_weekend : any_weekday) = true;
    out.day_type = any_weekday && any_weekend ? DayType::mixed
                   : any_weekend             ? DayType::weekend
                                             : DayType::weekday;
    return out;
}

} // namespace metroflow

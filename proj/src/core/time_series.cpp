#include "metroflow/core/time_series.hpp"

#include "metroflow/core/error.hpp"

#include <cmath>
#include <cstdio>

namespace metroflow {

namespace {

DayType classify(const std::vector<Date>& days, DayType fallback) {
    if (days.empty()) return fallback;
    bool any_weekday = false;
    bool any_weekend = false;
    for (const auto d : days) {
        (is_weekend(d) ? any_weekend : any_weekday) = true;
    }
    if (any_weekday && any_weekend) return DayType::mixed;
    return any_weekend ? DayType::weekend : DayType::weekday;
}

TimeSeries collect_days(const TimeSeries& series, bool want_weekend) {
    TimeSeries out;
    out.interval_minutes = series.interval_minutes;
    out.points_per_day = series.points_per_day;
    out.day_start_minute = series.day_start_minute;
    out.day_type = want_weekend ? DayType::weekend : DayType::weekday;
    const auto ppd = static_cast<std::size_t>(series.points_per_day);
    for (std::size_t d = 0; d < series.days.size(); ++d) {
        if (is_weekend(series.days[d]) != want_weekend) continue;
        out.days.push_back(series.days[d]);
        out.values.insert(out.values.end(), series.values.begin() + static_cast<std::ptrdiff_t>(d * ppd),
                          series.values.begin() + static_cast<std::ptrdiff_t>((d + 1) * ppd));
    }
    if (!out.days.empty()) out.start = out.timestamp_at(0);
    return out;
}

} // namespace

std::string to_string(DayType type) {
    switch (type) {
    case DayType::weekday: return "weekday";
    case DayType::weekend: return "weekend";
    case DayType::mixed: return "mixed";
    }
    return "mixed";
}

DayType day_type_from_string(const std::string& text) {
    if (text == "weekday") return DayType::weekday;
    if (text == "weekend") return DayType::weekend;
    if (text == "mixed") return DayType::mixed;
    throw DataError("unknown day type '" + text + "'");
}

bool is_weekend(Date date) {
    const std::chrono::weekday wd{date};
    return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

std::size_t TimeSeries::num_days() const {
    if (points_per_day <= 0) return 0;
    return values.size() / static_cast<std::size_t>(points_per_day);
}

Timestamp TimeSeries::timestamp_at(std::size_t i) const {
    using std::chrono::minutes;
    if (has_calendar()) {
        const auto ppd = static_cast<std::size_t>(points_per_day);
        const std::size_t day = i / ppd;
        const auto offset = static_cast<long>(day_start_minute) +
                            static_cast<long>(i % ppd) * interval_minutes;
        const Date date = day < days.size() ? days[day] : days.back() + std::chrono::days{static_cast<long>(day - days.size() + 1)};
        return Timestamp{date} + minutes{offset};
    }
    return start + minutes{static_cast<long>(i) * interval_minutes};
}

void TimeSeries::validate(bool allow_empty) const {
    if (interval_minutes <= 0) throw DataError("interval_minutes must be positive");
    if (points_per_day <= 0) throw DataError("points_per_day must be positive");
    if (values.empty() && !allow_empty) throw DataError("series is empty");
    for (const double v : values) {
        if (!std::isfinite(v)) throw DataError("series contains non-finite values");
    }
    if (has_calendar() && values.size() != days.size() * static_cast<std::size_t>(points_per_day)) {
        throw DataError("series length does not match calendar metadata");
    }
}

TimeSeries slice_days(const TimeSeries& series, std::size_t first_day, std::size_t count) {
    const auto ppd = static_cast<std::size_t>(series.points_per_day);
    if ((first_day + count) * ppd > series.values.size()) {
        throw DataError("day slice out of range");
    }
    TimeSeries out;
    out.interval_minutes = series.interval_minutes;
    out.points_per_day = series.points_per_day;
    out.day_start_minute = series.day_start_minute;
    out.values.assign(series.values.begin() + static_cast<std::ptrdiff_t>(first_day * ppd),
                      series.values.begin() + static_cast<std::ptrdiff_t>((first_day + count) * ppd));
    if (series.has_calendar()) {
        out.days.assign(series.days.begin() + static_cast<std::ptrdiff_t>(first_day),
                        series.days.begin() + static_cast<std::ptrdiff_t>(first_day + count));
    }
    out.day_type = classify(out.days, series.day_type);
    out.start = series.timestamp_at(first_day * ppd);
    return out;
}

TimeSeries with_values(const TimeSeries& like, std::vector<double> values) {
    TimeSeries out = like;
    out.values = std::move(values);
    return out;
}

CalendarSplit split_calendar(const TimeSeries& series) {
    if (!series.has_calendar()) throw DataError("series has no calendar metadata");
    series.validate();
    return {collect_days(series, false), collect_days(series, true)};
}

std::size_t train_days_for(std::size_t days, double train_fraction) {
    // The epsilon keeps exact products such as 9 * 2/3 from flooring to 5.
    return static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(days) + 1e-9));
}

TrainTestSplit split_train_test(const TimeSeries& series, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw DataError("train_fraction must lie in (0, 1)");
    }
    const auto ppd = static_cast<std::size_t>(series.points_per_day);
    if (ppd == 0 || series.values.size() % ppd != 0) {
        throw DataError("series is not made of whole days");
    }
    const std::size_t days = series.num_days();
    if (days < 3) throw DataError("insufficient data");
    const std::size_t train_days = train_days_for(days, train_fraction);
    if (train_days == 0 || train_days >= days) throw DataError("insufficient data");
    return {slice_days(series, 0, train_days), slice_days(series, train_days, days - train_days)};
}

std::string format_timestamp(Timestamp ts) {
    using namespace std::chrono;
    const auto day = floor<days>(ts);
    const year_month_day ymd{day};
    const hh_mm_ss hms{ts - day};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ld", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                  static_cast<long>(hms.seconds().count()));
    return buf;
}

Timestamp parse_timestamp(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char sep = 0;
    const int n = std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h, &mi, &s);
    if (n < 6 || (sep != 'T' && sep != ' ')) {
        throw DataError("malformed timestamp '" + text + "'");
    }
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h < 0 || h > 24 || mi < 0 || mi > 59 || s < 0 || s > 60) {
        throw DataError("invalid timestamp '" + text + "'");
    }
    return Timestamp{sys_days{ymd}} + hours{h} + minutes{mi} + seconds{s};
}

} // namespace metroflow

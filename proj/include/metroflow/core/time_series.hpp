#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace metroflow {

/// Naive local time at one-second resolution; no time-zone arithmetic is done.
using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::sys_days;

enum class DayType { weekday, weekend, mixed };

std::string to_string(DayType type);
DayType day_type_from_string(const std::string& text);

/// True for Saturday and Sunday.
bool is_weekend(Date date);

/**
 * Uniformly sampled series made of whole service days.
 *
 * When calendar metadata is present, `days[i]` is the date of the i-th block
 * of `points_per_day` samples and every block starts at `day_start_minute`.
 * Series produced by splitting keep their blocks contiguous even when the
 * underlying dates are not (weekends removed, for example).
 */
struct TimeSeries {
    Timestamp start{};
    int interval_minutes = 15;
    std::vector<double> values;
    DayType day_type = DayType::mixed;
    int points_per_day = 71;
    int day_start_minute = 390;
    std::vector<Date> days;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    bool has_calendar() const { return !days.empty(); }
    std::size_t num_days() const;

    /// Wall-clock instant of sample i.
    Timestamp timestamp_at(std::size_t i) const;

    /// Throws DataError when an invariant is broken. Empty series are allowed
    /// only when `allow_empty` is set (split results may legitimately be empty).
    void validate(bool allow_empty = false) const;
};

/// Days [first_day, first_day + count) as a new series with matching metadata.
TimeSeries slice_days(const TimeSeries& series, std::size_t first_day, std::size_t count);

/// A series with the same metadata as `like` but different values.
TimeSeries with_values(const TimeSeries& like, std::vector<double> values);

struct CalendarSplit {
    TimeSeries weekday;
    TimeSeries weekend;
};

/// Separate Mon-Fri from Sat-Sun days; each output is contiguous.
CalendarSplit split_calendar(const TimeSeries& series);

struct TrainTestSplit {
    TimeSeries train;
    TimeSeries test;
};

/// Whole-day chronological split: train holds floor(train_fraction * days) days.
TrainTestSplit split_train_test(const TimeSeries& series, double train_fraction = 2.0 / 3.0);

/// Number of training days for a given day count and fraction.
std::size_t train_days_for(std::size_t days, double train_fraction);

std::string format_timestamp(Timestamp ts);
/// Accepts "YYYY-MM-DDTHH:MM[:SS]" or the same with a space separator.
Timestamp parse_timestamp(const std::string& text);

} // namespace metroflow

#include "metroflow/core/csv.hpp"
#include "metroflow/core/error.hpp"
#include "metroflow/core/events.hpp"
#include "metroflow/core/rng.hpp"
#include "metroflow/core/scaler.hpp"
#include "metroflow/core/stats.hpp"
#include "metroflow/core/synthetic.hpp"
#include "metroflow/core/time_series.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace metroflow;
using namespace std::chrono;

namespace {

Timestamp at(Date d, int hour, int minute) { return Timestamp{d} + hours{hour} + minutes{minute}; }

TapEvent tap(Timestamp ts, std::string station = "S1", Direction dir = Direction::entry) {
    return {ts, std::move(station), dir};
}

TimeSeries daily_series(Date first, int days, int ppd) {
    TimeSeries s;
    s.points_per_day = ppd;
    s.interval_minutes = 15;
    s.day_start_minute = 390;
    for (int d = 0; d < days; ++d) {
        s.days.push_back(first + std::chrono::days{d});
        for (int i = 0; i < ppd; ++i) s.values.push_back(d * 1000.0 + i);
    }
    s.start = s.timestamp_at(0);
    return s;
}

constexpr Date monday_oct14 = Date{year{2013} / October / 14};

} // namespace

TEST(Aggregation, BinsTapsIntoFifteenMinuteIntervals) {
    const std::vector<TapEvent> events{tap(at(monday_oct14, 7, 1)), tap(at(monday_oct14, 7, 10)),
                                       tap(at(monday_oct14, 7, 16))};
    const TimeSeries s = aggregate_events(events, "S1");
    ASSERT_EQ(s.points_per_day, 70);
    ASSERT_EQ(s.size(), 70u);
    EXPECT_EQ(s.values[1], 0.0); // 06:45-07:00
    EXPECT_EQ(s.values[2], 2.0); // 07:00-07:15
    EXPECT_EQ(s.values[3], 1.0); // 07:15-07:30
}

TEST(Aggregation, DayWithoutTapsIsAllZero) {
    const Date wed = monday_oct14 + days{2};
    const std::vector<TapEvent> events{tap(at(monday_oct14, 8, 0)), tap(at(wed, 9, 0), "S2")};
    const TimeSeries s = aggregate_events(events, "S1");
    ASSERT_EQ(s.num_days(), 3u);
    for (std::size_t i = 70; i < 210; ++i) EXPECT_EQ(s.values[i], 0.0);
}

TEST(Aggregation, CountsAreConserved) {
    Rng rng(11);
    std::uniform_int_distribution<int> minute(390, 1439);
    std::vector<TapEvent> events;
    for (int i = 0; i < 10000; ++i) events.push_back(tap(Timestamp{monday_oct14} + minutes{minute(rng)}));
    const TimeSeries s = aggregate_events(events, "S1");
    double total = 0.0;
    for (double v : s.values) total += v;
    EXPECT_EQ(total, 10000.0);
}

TEST(Aggregation, FiltersStationDirectionAndWindow) {
    const std::vector<TapEvent> events{tap(at(monday_oct14, 8, 0)), tap(at(monday_oct14, 8, 1), "S1", Direction::exit),
                                       tap(at(monday_oct14, 8, 2), "S2"), tap(at(monday_oct14, 5, 0))};
    const TimeSeries both = aggregate_events(events, "S1");
    const TimeSeries exits = aggregate_events(events, "S1", 15, {}, DirectionFilter::exit);
    EXPECT_EQ(both.values[6], 2.0);
    EXPECT_EQ(exits.values[6], 1.0);
    double total = 0.0;
    for (double v : both.values) total += v;
    EXPECT_EQ(total, 2.0); // the 05:00 tap is outside the service window
    EXPECT_THROW(aggregate_events(events, "nowhere"), DataError);
    EXPECT_EQ(bins_per_day({390, 1440}, 15), 70);
    EXPECT_EQ(bins_per_day({390, 1440}, 60), 18);
}

TEST(CalendarSplit, OneWeekFromMonday) {
    const CalendarSplit parts = split_calendar(daily_series(monday_oct14, 7, 70));
    EXPECT_EQ(parts.weekday.size(), 350u);
    EXPECT_EQ(parts.weekend.size(), 140u);
    EXPECT_EQ(parts.weekday.day_type, DayType::weekday);
    EXPECT_EQ(parts.weekend.day_type, DayType::weekend);
    // Friday's block is followed directly by nothing: the weekday series is contiguous.
    EXPECT_EQ(parts.weekday.values[4 * 70], 4000.0);
    EXPECT_EQ(parts.weekend.values[0], 5000.0);
}

TEST(CalendarSplit, AllWeekendLeavesWeekdayEmpty) {
    const TimeSeries s = daily_series(monday_oct14 + days{5}, 2, 70);
    const CalendarSplit parts = split_calendar(s);
    EXPECT_TRUE(parts.weekday.empty());
    EXPECT_EQ(parts.weekend.values, s.values);
}

TEST(CalendarSplit, MatchesCalendarEnumeration) {
    const Date last = Date{year{2013} / November / 30};
    const int n = (last - monday_oct14).count() + 1;
    std::size_t weekdays = 0, weekends = 0;
    for (int d = 0; d < n; ++d) {
        const unsigned wd = weekday{monday_oct14 + days{d}}.c_encoding();
        (wd == 0 || wd == 6 ? weekends : weekdays) += 1;
    }
    const CalendarSplit parts = split_calendar(daily_series(monday_oct14, n, 70));
    EXPECT_EQ(parts.weekday.num_days(), weekdays);
    EXPECT_EQ(parts.weekend.num_days(), weekends);
}

TEST(TrainTestSplit, WholeDayFloorRule) {
    const auto check = [](int days, std::size_t train, std::size_t test) {
        const TrainTestSplit s = split_train_test(daily_series(monday_oct14, days, 10));
        EXPECT_EQ(s.train.num_days(), train) << days;
        EXPECT_EQ(s.test.num_days(), test) << days;
        EXPECT_EQ(s.test.values.front(), static_cast<double>(train) * 1000.0);
    };
    check(30, 20, 10);
    check(9, 6, 3);
    check(10, 6, 4);
    EXPECT_THROW(split_train_test(daily_series(monday_oct14, 2, 10)), DataError);
}

TEST(Scaler, MapsAndInverts) {
    const std::vector<double> train{0.0, 10.0};
    const MinMaxScaler s = MinMaxScaler::fit(train, 0.0, 1.0);
    EXPECT_DOUBLE_EQ(s.apply(5.0), 0.5);
    EXPECT_DOUBLE_EQ(s.apply(20.0), 2.0); // extrapolated, not clipped
    EXPECT_LT(s.apply(-5.0), 0.0);
    Rng rng(3);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    const MinMaxScaler d = MinMaxScaler::fit(std::vector<double>{-3.0, 7.5});
    for (int i = 0; i < 100; ++i) {
        const double x = u(rng);
        EXPECT_NEAR(d.invert(d.apply(x)), x, 1e-12);
    }
    EXPECT_THROW(MinMaxScaler::fit(std::vector<double>{2.0, 2.0}), DataError);
}

TEST(Stats, HandCases) {
    const DescriptiveStats a = descriptive_stats(std::vector<double>{1, 2, 3, 4});
    EXPECT_DOUBLE_EQ(a.mean, 2.5);
    EXPECT_NEAR(a.skewness, 0.0, 1e-15);
    const DescriptiveStats b = descriptive_stats(std::vector<double>{0, 2});
    EXPECT_DOUBLE_EQ(b.mean, 1.0);
    EXPECT_DOUBLE_EQ(b.std, 1.0);
    EXPECT_DOUBLE_EQ(b.kurtosis, 1.0);
    EXPECT_THROW(descriptive_stats(std::vector<double>{1}), DataError);
}

TEST(Stats, NormalMomentsMonteCarlo) {
    Rng rng(2024);
    std::normal_distribution<double> z;
    std::vector<double> xs(100000);
    for (double& x : xs) x = z(rng);
    const DescriptiveStats d = descriptive_stats(xs);
    EXPECT_LT(std::abs(d.skewness), 0.05);
    EXPECT_NEAR(d.kurtosis, 3.0, 0.1);
}

TEST(Stats, AutocorrelationAgainstDirectSum) {
    const std::vector<double> x{1, 3, 2, 5, 4, 6, 5, 8};
    double m = 0.0;
    for (double v : x) m += v / 8.0;
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < 8; ++t) den += (x[t] - m) * (x[t] - m);
    for (std::size_t t = 0; t + 2 < 8; ++t) num += (x[t] - m) * (x[t + 2] - m);
    EXPECT_NEAR(autocorrelation(x, 2), (num / 6.0) / (den / 8.0), 1e-14);
}

TEST(Synthetic, ZeroConfigIsZero) {
    SyntheticConfig c;
    c.days = 3;
    const SyntheticSeries s = generate_synthetic(c);
    ASSERT_EQ(s.series.size(), 3u * 71u);
    for (double v : s.series.values) EXPECT_EQ(v, 0.0);
}

TEST(Synthetic, SingleHarmonicIsDailyPeriodic) {
    SyntheticConfig c;
    c.days = 10;
    c.points_per_day = 70;
    c.harmonics = {{100.0, 0.4}};
    const SyntheticSeries s = generate_synthetic(c);
    EXPECT_GT(autocorrelation(s.series.values, 70), 0.99);
    for (std::size_t t = 0; t + 70 < s.series.size(); ++t) {
        EXPECT_NEAR(s.series.values[t], s.series.values[t + 70], 1e-9);
    }
}

TEST(Synthetic, SeedDeterminismAndComponentsAddUp) {
    SyntheticConfig c;
    c.base_level = 500;
    c.harmonics = {{200, 0.1}, {50, 1.0}};
    c.ar_coeffs = {0.6, 0.2};
    c.ar_innovation_std = 15;
    c.noise_std = 5;
    c.seed = 99;
    const SyntheticSeries a = generate_synthetic(c);
    const SyntheticSeries b = generate_synthetic(c);
    EXPECT_EQ(a.series.values, b.series.values);
    for (std::size_t t = 0; t < a.series.size(); ++t) {
        EXPECT_NEAR(a.series.values[t], a.periodic[t] + a.autoregressive[t] + a.noise[t], 1e-9);
    }
    c.ar_coeffs = {1.2};
    EXPECT_THROW(generate_synthetic(c), DataError);
    EXPECT_NEAR(ar_spectral_radius({0.5}), 0.5, 1e-12);
}

TEST(Csv, SeriesRoundTripIncludingMidnightGridPoint) {
    SyntheticConfig c;
    c.days = 3;
    c.base_level = 10;
    c.harmonics = {{5, 0.0}};
    const TimeSeries s = generate_synthetic(c).series;
    std::stringstream buf;
    write_series_csv(buf, s, {"comment"});
    const TimeSeries r = read_series_csv(buf);
    EXPECT_EQ(r.points_per_day, 71);
    EXPECT_EQ(r.day_start_minute, 390);
    EXPECT_EQ(r.num_days(), 3u);
    ASSERT_EQ(r.size(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(r.values[i], s.values[i], 5e-7);
}

TEST(Csv, MalformedInputsAreDataErrors) {
    std::stringstream no_header("2013-10-14T06:30:00,1\n");
    EXPECT_THROW(read_series_csv(no_header), DataError);
    std::stringstream bad_number("timestamp,value\n2013-10-14T06:30:00,abc\n");
    EXPECT_THROW(read_series_csv(bad_number), DataError);
    std::stringstream events("# comment\ntimestamp,station_id,direction\n2013-10-14 07:01:00,S1,entry\n");
    const auto ev = read_events_csv(events);
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_EQ(ev[0].station_id, "S1");
    EXPECT_EQ(ev[0].timestamp, at(monday_oct14, 7, 1));
}

TEST(Rng, DerivedSeedsDiffer) {
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
    EXPECT_EQ(derive_seed(5, 3), derive_seed(5, 3));
}

#pragma once

#include "metroflow/core/time_series.hpp"

#include <span>
#include <string>
#include <string_view>

namespace metroflow {

enum class Direction { entry, exit };

/// One smart-card tap.
struct TapEvent {
    Timestamp timestamp{};
    std::string station_id;
    Direction direction = Direction::entry;
};

/// Clock-time window, minutes after midnight; end may be 1440 (24:00).
struct ServiceWindow {
    int start_minute = 6 * 60 + 30;
    int end_minute = 24 * 60;
};

enum class DirectionFilter { both, entry, exit };

/// Bins per service day: ceil(window / interval); the last bin may be truncated.
int bins_per_day(const ServiceWindow& window, int interval_minutes);

/**
 * Count taps of `station` per interval bin of each service day.
 *
 * The day range is the span of dates covered by all events (dataset bounds),
 * so a day without taps for this station contributes zero bins. Taps outside
 * the service window are dropped.
 */
TimeSeries aggregate_events(std::span<const TapEvent> events, std::string_view station,
                            int interval_minutes = 15, ServiceWindow window = {},
                            DirectionFilter filter = DirectionFilter::both);

} // namespace metroflow

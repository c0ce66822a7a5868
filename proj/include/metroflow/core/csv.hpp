#pragma once

#include "metroflow/core/events.hpp"
#include "metroflow/core/time_series.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace metroflow {

/// Reads `timestamp,station_id,direction`; lines starting with '#' are skipped.
std::vector<TapEvent> read_events_csv(std::istream& in);
std::vector<TapEvent> read_events_csv(const std::string& path);

/**
 * Reads `timestamp,value` or `timestamp,count`. Samples are grouped by date;
 * the interval comes from the first two timestamps of a day and
 * points_per_day from the largest day.
 */
TimeSeries read_series_csv(std::istream& in);
TimeSeries read_series_csv(const std::string& path);

/// Writes `timestamp,value` with six decimals, preceded by `comment` lines
/// (each emitted with a leading "# ").
void write_series_csv(std::ostream& out, const TimeSeries& series,
                      const std::vector<std::string>& comment = {});
void write_series_csv(const std::string& path, const TimeSeries& series,
                      const std::vector<std::string>& comment = {});

/// Splits on commas, trimming surrounding whitespace.
std::vector<std::string> split_csv_line(const std::string& line);

} // namespace metroflow

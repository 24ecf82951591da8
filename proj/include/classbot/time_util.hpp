#pragma once

#include <chrono>
#include <cstdint>
#include <string>

namespace classbot {

using TimePoint = std::chrono::system_clock::time_point;

// Parses "YYYY-MM-DDTHH:MM:SSZ" (UTC only). Throws std::invalid_argument.
TimePoint parse_iso8601(const std::string& text);

// Formats as "YYYY-MM-DDTHH:MM:SSZ", truncating sub-second precision.
std::string format_iso8601(TimePoint tp);

TimePoint from_unix_seconds(std::int64_t secs);
std::int64_t to_unix_seconds(TimePoint tp);

}  // namespace classbot

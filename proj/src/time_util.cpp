#include "classbot/time_util.hpp"

#include <cstdio>
#include <ctime>
#include <stdexcept>

namespace classbot {

TimePoint parse_iso8601(const std::string& text) {
  std::tm tm{};
  char zone = 0;
  int n = 0;
  int rc = std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c%n", &tm.tm_year,
                       &tm.tm_mon, &tm.tm_mday, &tm.tm_hour, &tm.tm_min,
                       &tm.tm_sec, &zone, &n);
  if (rc != 7 || zone != 'Z' || n != static_cast<int>(text.size()))
    throw std::invalid_argument("invalid UTC timestamp: \"" + text + "\"");
  if (tm.tm_mon < 1 || tm.tm_mon > 12 || tm.tm_mday < 1 || tm.tm_mday > 31 ||
      tm.tm_hour > 23 || tm.tm_min > 59 || tm.tm_sec > 60)
    throw std::invalid_argument("timestamp field out of range: \"" + text + "\"");
  tm.tm_year -= 1900;
  tm.tm_mon -= 1;
  time_t t = timegm(&tm);
  if (t == static_cast<time_t>(-1))
    throw std::invalid_argument("unrepresentable timestamp: \"" + text + "\"");
  return std::chrono::system_clock::from_time_t(t);
}

std::string format_iso8601(TimePoint tp) {
  time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec);
  return buf;
}

TimePoint from_unix_seconds(std::int64_t secs) {
  return std::chrono::system_clock::from_time_t(static_cast<time_t>(secs));
}

std::int64_t to_unix_seconds(TimePoint tp) {
  return static_cast<std::int64_t>(std::chrono::system_clock::to_time_t(tp));
}

}  // namespace classbot

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace wxda {

// Seconds since the Unix epoch, UTC. All timestamps in the library and in the
// file formats are UTC; there is no timezone handling anywhere.
using Timestamp = std::int64_t;

inline constexpr std::int64_t kSecondsPerHour = 3600;
inline constexpr std::int64_t kSecondsPerDay = 86400;

struct CivilTime {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31
  int hour = 0;
  int minute = 0;
  int second = 0;
};

Timestamp make_time(int year, int month, int day, int hour = 0, int minute = 0,
                    int second = 0);
CivilTime civil_from_time(Timestamp t);

// "YYYY-MM-DDTHH:MM:SSZ"; ParseError on anything else.
Timestamp parse_iso8601(std::string_view s);
std::string format_iso8601(Timestamp t);

// Same month/day (and time of day) in the template year; Feb 29 maps to
// Feb 28 when the template year is not a leap year.
Timestamp replicate_date(Timestamp target, int template_year);

bool is_leap_year(int year);

}  // namespace wxda

#include "wxda/time.hpp"

#include <array>
#include <charconv>
#include <cstdio>

#include "wxda/errors.hpp"

namespace wxda {

namespace {

// Days-from-civil / civil-from-days, valid for the full proleptic Gregorian
// calendar (Hinnant's algorithm).
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

int parse_int(std::string_view s, std::size_t pos, std::size_t len) {
  int v = 0;
  const auto* first = s.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + len, v);
  if (ec != std::errc{} || ptr != first + len) {
    throw ParseError("bad timestamp field in '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

bool is_leap_year(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

Timestamp make_time(int year, int month, int day, int hour, int minute,
                    int second) {
  return days_from_civil(year, month, day) * kSecondsPerDay +
         hour * 3600LL + minute * 60LL + second;
}

CivilTime civil_from_time(Timestamp t) {
  std::int64_t days = t / kSecondsPerDay;
  std::int64_t sod = t % kSecondsPerDay;
  if (sod < 0) {
    sod += kSecondsPerDay;
    days -= 1;
  }
  CivilTime c;
  civil_from_days(days, c.year, c.month, c.day);
  c.hour = static_cast<int>(sod / 3600);
  c.minute = static_cast<int>(sod % 3600 / 60);
  c.second = static_cast<int>(sod % 60);
  return c;
}

Timestamp parse_iso8601(std::string_view s) {
  // YYYY-MM-DDTHH:MM:SSZ
  if (s.size() != 20 || s[4] != '-' || s[7] != '-' || s[10] != 'T' ||
      s[13] != ':' || s[16] != ':' || s[19] != 'Z') {
    throw ParseError("expected YYYY-MM-DDTHH:MM:SSZ, got '" + std::string(s) +
                     "'");
  }
  const int year = parse_int(s, 0, 4);
  const int month = parse_int(s, 5, 2);
  const int day = parse_int(s, 8, 2);
  const int hour = parse_int(s, 11, 2);
  const int minute = parse_int(s, 14, 2);
  const int second = parse_int(s, 17, 2);
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 ||
      minute > 59 || second > 60) {
    throw ParseError("timestamp field out of range in '" + std::string(s) +
                     "'");
  }
  return make_time(year, month, day, hour, minute, second);
}

std::string format_iso8601(Timestamp t) {
  const CivilTime c = civil_from_time(t);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year,
                c.month, c.day, c.hour, c.minute, c.second);
  return buf;
}

Timestamp replicate_date(Timestamp target, int template_year) {
  CivilTime c = civil_from_time(target);
  if (c.month == 2 && c.day == 29 && !is_leap_year(template_year)) {
    c.day = 28;
  }
  return make_time(template_year, c.month, c.day, c.hour, c.minute, c.second);
}

}  // namespace wxda

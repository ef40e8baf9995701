#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wxda/obs.hpp"

namespace wxda {

// Line-delimited observation records, one per line, '#' comments allowed.
//
//   point <source> <iso-time> <lat> <lon> <variable> <value> [elev=<m>]
//   swath <instrument> <platform> <iso-time> <lat> <lon> <zenith> <bt...>
//   profile <gnss_ro|sonde> <iso-time> <lat> <lon> <variable|-> <coord:value ...>
//   sonde <iso-time> <lat> <lon> <pressure-hPa> <VAR=value ...>
//
// "sonde" is the raw multi-variable radiosonde form; ingest expands it into
// per-variable point records (Q converted to R, height Z to geopotential).
// Profile coords are meters for gnss_ro and hPa for sonde profiles.

struct ObsBatch {
  std::vector<PointObs> points;
  std::vector<SwathObs> swaths;  // one entry per (instrument, platform) pair
  std::vector<ProfileObs> profiles;

  bool empty() const {
    return points.empty() && swaths.empty() && profiles.empty();
  }
};

struct ParseReport {
  std::size_t records_ok = 0;
  std::vector<std::string> errors;  // "file:line: message"

  bool clean() const { return errors.empty(); }
};

ObsBatch read_obs_file(const std::filesystem::path& path, ParseReport& report);

void write_obs_file(const std::filesystem::path& path, const ObsBatch& batch);
void write_point_record(std::ostream& os, const PointObs& p);
void write_profile_record(std::ostream& os, const ProfileObs& p);
void write_swath_records(std::ostream& os, const SwathObs& s);

}  // namespace wxda

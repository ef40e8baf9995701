#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wxda/config.hpp"
#include "wxda/obs_io.hpp"
#include "wxda/time.hpp"

namespace wxda::tool {

// Filename-safe compact form of a timestamp: 20230701T060000Z.
std::string time_tag(Timestamp t);

// Accepts either the ISO-8601 form or the compact tag.
Timestamp parse_time_arg(const std::string& s);

// Reads and merges several observation files, accumulating one report.
ObsBatch read_obs_files(const std::vector<std::string>& paths,
                        ParseReport& report);

// Prints parse errors to stderr; true when the report is clean.
bool report_parse_errors(const ParseReport& report);

RunConfig load_config(const std::string& path_or_empty);

// Relative directory arguments resolve under config.data_root (set via the
// config file or $WXDA_DATA_ROOT) when it is configured.
std::string resolve_dir(const std::string& dir, const RunConfig& cfg);

struct ScorecardRow {
  std::string variable;
  int level = 0;            // 0 for surface
  double lead_hours = 0.0;
  Timestamp init_time = 0;
  std::optional<double> score;
  std::size_t n = 0;
};

void write_scorecard(const std::filesystem::path& path,
                     const std::vector<ScorecardRow>& rows);
std::vector<ScorecardRow> read_scorecard(const std::filesystem::path& path);

}  // namespace wxda::tool

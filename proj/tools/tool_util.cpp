#include "tool_util.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wxda/errors.hpp"

namespace wxda::tool {

std::string time_tag(Timestamp t) {
  const CivilTime c = civil_from_time(t);
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%04d%02d%02dT%02d%02d%02dZ", c.year,
                c.month, c.day, c.hour, c.minute, c.second);
  return buf;
}

Timestamp parse_time_arg(const std::string& s) {
  if (s.size() == 16 && s[8] == 'T' && s.back() == 'Z') {
    const std::string iso = s.substr(0, 4) + "-" + s.substr(4, 2) + "-" +
                            s.substr(6, 2) + "T" + s.substr(9, 2) + ":" +
                            s.substr(11, 2) + ":" + s.substr(13, 2) + "Z";
    return parse_iso8601(iso);
  }
  return parse_iso8601(s);
}

ObsBatch read_obs_files(const std::vector<std::string>& paths,
                        ParseReport& report) {
  ObsBatch merged;
  for (const auto& p : paths) {
    ObsBatch b = read_obs_file(p, report);
    merged.points.insert(merged.points.end(), b.points.begin(),
                         b.points.end());
    merged.profiles.insert(merged.profiles.end(), b.profiles.begin(),
                           b.profiles.end());
    for (auto& s : b.swaths) {
      bool appended = false;
      for (auto& existing : merged.swaths) {
        if (existing.instrument == s.instrument &&
            existing.platform == s.platform) {
          if (existing.n_channels != s.n_channels) {
            throw LayoutError("swath channel count differs across files for " +
                              s.instrument + "/" + s.platform);
          }
          existing.pixels.insert(existing.pixels.end(), s.pixels.begin(),
                                 s.pixels.end());
          appended = true;
          break;
        }
      }
      if (!appended) merged.swaths.push_back(std::move(s));
    }
  }
  return merged;
}

bool report_parse_errors(const ParseReport& report) {
  for (const auto& e : report.errors) {
    std::cerr << "parse error: " << e << "\n";
  }
  return report.clean();
}

RunConfig load_config(const std::string& path_or_empty) {
  if (path_or_empty.empty()) return RunConfig::defaults();
  return RunConfig::from_file(path_or_empty);
}

std::string resolve_dir(const std::string& dir, const RunConfig& cfg) {
  if (dir.empty() || cfg.data_root.empty() ||
      std::filesystem::path(dir).is_absolute()) {
    return dir;
  }
  return (std::filesystem::path(cfg.data_root) / dir).string();
}

void write_scorecard(const std::filesystem::path& path,
                     const std::vector<ScorecardRow>& rows) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open " + path.string() + " for writing");
  os << "variable\tlevel\tlead_hours\tinit_time\tscore\tn\n";
  os.precision(12);
  for (const auto& r : rows) {
    os << r.variable << "\t" << r.level << "\t" << r.lead_hours << "\t"
       << format_iso8601(r.init_time) << "\t";
    if (r.score) {
      os << *r.score;
    } else {
      os << "NA";
    }
    os << "\t" << r.n << "\n";
  }
}

std::vector<ScorecardRow> read_scorecard(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open " + path.string());
  std::vector<ScorecardRow> rows;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("variable\t", 0) == 0) continue;  // header
    }
    std::istringstream ls(line);
    ScorecardRow r;
    std::string init, score;
    if (!(ls >> r.variable >> r.level >> r.lead_hours >> init >> score >>
          r.n)) {
      throw ParseError(path.string() + ": bad scorecard row '" + line + "'");
    }
    r.init_time = parse_iso8601(init);
    if (score != "NA") r.score = std::stod(score);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace wxda::tool

#include "wxda/obs_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "wxda/errors.hpp"
#include "wxda/forward.hpp"

namespace wxda {

std::string_view point_source_name(PointSource s) {
  switch (s) {
    case PointSource::LandStation: return "land_station";
    case PointSource::Marine: return "marine";
    case PointSource::Radiosonde: return "radiosonde";
  }
  return "?";
}

const std::vector<std::string>& surface_channel_order() {
  static const std::vector<std::string> order = {"T2m", "R2m", "U10m", "V10m",
                                                 "SP", "MSLP", "SST"};
  return order;
}

namespace {

PointSource parse_source(const std::string& s) {
  if (s == "land_station") return PointSource::LandStation;
  if (s == "marine") return PointSource::Marine;
  if (s == "radiosonde") return PointSource::Radiosonde;
  throw ParseError("unknown point source '" + s + "'");
}

bool known_point_variable(const std::string& v) {
  if (ChannelKey::parse(v)) return true;
  for (const auto& extra : surface_channel_order()) {
    if (v == extra) return true;
  }
  return false;
}

void check_latlon(double lat, double lon) {
  if (!(std::abs(lat) <= 90.0) || !std::isfinite(lon)) {
    throw ParseError("latitude/longitude out of range");
  }
}

PointObs parse_point(std::istringstream& ls) {
  PointObs p;
  std::string source, time, var, tail;
  if (!(ls >> source >> time >> p.lat >> p.lon >> var >> p.value)) {
    throw ParseError("malformed point record");
  }
  p.source = parse_source(source);
  p.time = parse_iso8601(time);
  check_latlon(p.lat, p.lon);
  if (!known_point_variable(var)) {
    throw ParseError("unknown variable '" + var + "'");
  }
  if (!std::isfinite(p.value)) throw ParseError("non-finite value");
  p.variable = var;
  if (ls >> tail) {
    if (tail.rfind("elev=", 0) != 0) {
      throw ParseError("unexpected trailing field '" + tail + "'");
    }
    p.elevation_m = std::stod(tail.substr(5));
    p.has_elevation = true;
  }
  return p;
}

SwathPixel parse_swath_pixel(std::istringstream& ls, std::string& instrument,
                             std::string& platform) {
  SwathPixel px;
  std::string time;
  if (!(ls >> instrument >> platform >> time >> px.lat >> px.lon >>
        px.zenith_deg)) {
    throw ParseError("malformed swath record");
  }
  px.time = parse_iso8601(time);
  check_latlon(px.lat, px.lon);
  if (px.zenith_deg < 0.0 || px.zenith_deg > 90.0) {
    throw ParseError("zenith angle out of [0, 90]");
  }
  double bt;
  while (ls >> bt) px.brightness_k.push_back(static_cast<float>(bt));
  if (px.brightness_k.empty()) {
    throw ParseError("swath record carries no channels");
  }
  return px;
}

ProfileObs parse_profile(std::istringstream& ls) {
  ProfileObs p;
  std::string kind, time, var, pair;
  if (!(ls >> kind >> time >> p.lat >> p.lon >> var)) {
    throw ParseError("malformed profile record");
  }
  if (kind == "gnss_ro") {
    p.kind = ProfileKind::GnssRoRefractivity;
  } else if (kind == "sonde") {
    p.kind = ProfileKind::RadiosondeProfile;
  } else {
    throw ParseError("unknown profile kind '" + kind + "'");
  }
  p.time = parse_iso8601(time);
  check_latlon(p.lat, p.lon);
  if (var != "-") p.variable = var;
  while (ls >> pair) {
    const std::size_t colon = pair.find(':');
    if (colon == std::string::npos) {
      throw ParseError("profile level must be coord:value");
    }
    ProfileLevel lvl;
    lvl.coord = std::stod(pair.substr(0, colon));
    lvl.value = std::stod(pair.substr(colon + 1));
    if (!std::isfinite(lvl.coord) || !std::isfinite(lvl.value)) {
      throw ParseError("profile level must be finite");
    }
    if (!p.levels.empty() && lvl.coord <= p.levels.back().coord) {
      throw ParseError("profile levels must be strictly monotone");
    }
    p.levels.push_back(lvl);
  }
  if (p.levels.empty()) throw ParseError("profile carries no levels");
  return p;
}

// Raw multi-variable radiosonde line -> per-variable registry-keyed points.
std::vector<PointObs> expand_sonde(std::istringstream& ls) {
  std::string time, field;
  double lat, lon, pressure;
  if (!(ls >> time >> lat >> lon >> pressure)) {
    throw ParseError("malformed sonde record");
  }
  check_latlon(lat, lon);
  std::map<std::string, double> vars;
  while (ls >> field) {
    const std::size_t eq = field.find('=');
    if (eq == std::string::npos) {
      throw ParseError("sonde field must be VAR=value");
    }
    vars[field.substr(0, eq)] = std::stod(field.substr(eq + 1));
  }
  const int level = static_cast<int>(std::lround(pressure));
  const Timestamp t = parse_iso8601(time);

  std::vector<PointObs> out;
  const auto push = [&](Variable v, double value) {
    PointObs p;
    p.lat = lat;
    p.lon = lon;
    p.time = t;
    p.variable = ChannelKey{v, level}.describe();
    p.value = value;
    p.source = PointSource::Radiosonde;
    out.push_back(std::move(p));
  };

  if (auto it = vars.find("T"); it != vars.end()) push(Variable::T, it->second);
  if (auto it = vars.find("U"); it != vars.end()) push(Variable::U, it->second);
  if (auto it = vars.find("V"); it != vars.end()) push(Variable::V, it->second);
  if (auto it = vars.find("Z"); it != vars.end()) {
    // Reported as geopotential height in meters.
    push(Variable::Z, geopotential_from_height(it->second));
  }
  if (auto it = vars.find("R"); it != vars.end()) {
    push(Variable::R, it->second);
  } else if (auto q = vars.find("Q"); q != vars.end()) {
    auto tv = vars.find("T");
    if (tv == vars.end()) {
      throw ParseError("sonde Q needs T on the same record for conversion");
    }
    push(Variable::R, relative_humidity_percent(q->second, pressure,
                                                tv->second));
  }
  if (out.empty()) throw ParseError("sonde record carries no variables");
  return out;
}

}  // namespace

ObsBatch read_obs_file(const std::filesystem::path& path,
                       ParseReport& report) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open " + path.string());
  ObsBatch batch;
  // Swath pixels are grouped per (instrument, platform) as they stream in.
  std::map<std::pair<std::string, std::string>, std::size_t> swath_index;

  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    try {
      if (tag == "point") {
        batch.points.push_back(parse_point(ls));
      } else if (tag == "swath") {
        std::string instrument, platform;
        SwathPixel px = parse_swath_pixel(ls, instrument, platform);
        auto key = std::make_pair(instrument, platform);
        auto it = swath_index.find(key);
        if (it == swath_index.end()) {
          SwathObs s;
          s.instrument = instrument;
          s.platform = platform;
          s.n_channels = static_cast<int>(px.brightness_k.size());
          swath_index.emplace(key, batch.swaths.size());
          batch.swaths.push_back(std::move(s));
          it = swath_index.find(key);
        }
        SwathObs& s = batch.swaths[it->second];
        if (static_cast<int>(px.brightness_k.size()) != s.n_channels) {
          throw LayoutError("swath channel count changed mid-stream");
        }
        s.pixels.push_back(std::move(px));
      } else if (tag == "profile") {
        batch.profiles.push_back(parse_profile(ls));
      } else if (tag == "sonde") {
        auto expanded = expand_sonde(ls);
        batch.points.insert(batch.points.end(), expanded.begin(),
                            expanded.end());
      } else {
        throw ParseError("unknown record tag '" + tag + "'");
      }
      ++report.records_ok;
    } catch (const DataError& e) {
      report.errors.push_back(path.filename().string() + ":" +
                              std::to_string(lineno) + ": " + e.what());
    }
  }
  return batch;
}

void write_point_record(std::ostream& os, const PointObs& p) {
  os << "point " << point_source_name(p.source) << " "
     << format_iso8601(p.time) << " " << p.lat << " " << p.lon << " "
     << p.variable << " " << p.value;
  if (p.has_elevation) os << " elev=" << p.elevation_m;
  os << "\n";
}

void write_profile_record(std::ostream& os, const ProfileObs& p) {
  os << "profile "
     << (p.kind == ProfileKind::GnssRoRefractivity ? "gnss_ro" : "sonde")
     << " " << format_iso8601(p.time) << " " << p.lat << " " << p.lon << " "
     << (p.variable.empty() ? "-" : p.variable);
  for (const auto& lvl : p.levels) {
    os << " " << lvl.coord << ":" << lvl.value;
  }
  os << "\n";
}

void write_swath_records(std::ostream& os, const SwathObs& s) {
  for (const auto& px : s.pixels) {
    os << "swath " << s.instrument << " " << s.platform << " "
       << format_iso8601(px.time) << " " << px.lat << " " << px.lon << " "
       << px.zenith_deg;
    for (float bt : px.brightness_k) os << " " << bt;
    os << "\n";
  }
}

void write_obs_file(const std::filesystem::path& path, const ObsBatch& batch) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open " + path.string() + " for writing");
  os.precision(17);  // doubles survive the text round trip exactly
  for (const auto& p : batch.points) write_point_record(os, p);
  for (const auto& s : batch.swaths) write_swath_records(os, s);
  for (const auto& p : batch.profiles) write_profile_record(os, p);
}

}  // namespace wxda

#include "wxda/forward.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "wxda/errors.hpp"
#include "wxda/rng.hpp"

namespace wxda {

double refractivity(double p_hpa, double t_k, double e_hpa) {
  if (t_k <= 0.0 || !std::isfinite(t_k)) {
    throw DomainError("refractivity needs T > 0 K");
  }
  if (p_hpa < 0.0 || e_hpa < 0.0) {
    throw DomainError("refractivity needs non-negative P and e");
  }
  return 77.6 * p_hpa / t_k + 3.73e5 * e_hpa / (t_k * t_k);
}

double saturation_vapor_pressure_hpa(double t_k) {
  const double t_c = t_k - 273.15;
  return 6.112 * std::exp(17.62 * t_c / (243.12 + t_c));
}

double vapor_pressure_hpa(double rh_percent, double t_k) {
  return rh_percent / 100.0 * saturation_vapor_pressure_hpa(t_k);
}

double relative_humidity_percent(double q, double p_hpa, double t_k) {
  // e from q via the mixing-ratio identity with epsilon = 0.622.
  const double e = q * p_hpa / (0.622 + 0.378 * q);
  return 100.0 * e / saturation_vapor_pressure_hpa(t_k);
}

ProfileObs resample_profile(const ProfileObs& profile, int n_layers,
                            double top_m) {
  if (profile.levels.size() < 2) {
    throw InsufficientDataError("resampling needs at least two levels");
  }
  std::vector<ProfileLevel> src = profile.levels;
  std::sort(src.begin(), src.end(),
            [](const ProfileLevel& a, const ProfileLevel& b) {
              return a.coord < b.coord;
            });
  const double lo = src.front().coord;
  const double hi = src.back().coord;

  ProfileObs out = profile;
  out.levels.clear();
  out.levels.reserve(n_layers);
  const double dz = top_m / n_layers;
  std::size_t seg = 0;
  for (int k = 0; k < n_layers; ++k) {
    const double h = (k + 0.5) * dz;
    ProfileLevel lvl;
    lvl.coord = h;
    if (h < lo || h > hi) {
      lvl.value = std::numeric_limits<double>::quiet_NaN();
    } else {
      while (seg + 2 < src.size() && src[seg + 1].coord < h) ++seg;
      const double c0 = src[seg].coord;
      const double c1 = src[seg + 1].coord;
      if (h == c0) {
        lvl.value = src[seg].value;  // exact hit: no interpolation rounding
      } else if (h == c1) {
        lvl.value = src[seg + 1].value;
      } else {
        const double frac = c1 > c0 ? (h - c0) / (c1 - c0) : 0.0;
        lvl.value =
            src[seg].value + frac * (src[seg + 1].value - src[seg].value);
      }
    }
    out.levels.push_back(lvl);
  }
  return out;
}

void ROGeometryTable::add(int hour, double lat, double lon) {
  if (hour < 0 || hour > 23) throw DataError("geometry hour out of 0..23");
  buckets_[hour].emplace_back(lat, lon);
}

const std::vector<std::pair<double, double>>& ROGeometryTable::bucket(
    int hour) const {
  if (hour < 0 || hour > 23) throw DataError("geometry hour out of 0..23");
  return buckets_[hour];
}

bool ROGeometryTable::all_buckets_populated() const {
  for (const auto& b : buckets_) {
    if (b.empty()) return false;
  }
  return true;
}

ROGeometryTable::Sample ROGeometryTable::sample(int hour, std::size_t count,
                                                std::uint64_t seed) const {
  const auto& b = bucket(hour);
  if (b.empty()) throw NoDataError("geometry bucket is empty");
  Sample out;
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(hour)));
  if (count > b.size()) {
    out.with_replacement = true;
    out.locations.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      out.locations.push_back(b[rng.below(b.size())]);
    }
    return out;
  }
  // Partial Fisher-Yates over an index vector.
  std::vector<std::size_t> idx(b.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  out.locations.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.below(idx.size() - i);
    std::swap(idx[i], idx[j]);
    out.locations.push_back(b[idx[i]]);
  }
  return out;
}

ROGeometryTable ROGeometryTable::read(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open " + path.string());
  ROGeometryTable t;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int hour;
    double lat, lon;
    if (!(ls >> hour >> lat >> lon)) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": bad geometry record");
    }
    t.add(hour, lat, lon);
  }
  return t;
}

void ROGeometryTable::write(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open " + path.string() + " for writing");
  os.precision(17);
  for (int h = 0; h < 24; ++h) {
    for (const auto& [lat, lon] : buckets_[h]) {
      os << h << " " << lat << " " << lon << "\n";
    }
  }
}

AtmosColumn column_at(const StateField& field, double lat, double lon) {
  const auto& reg = field.registry();
  const CellIndex cell = nearest_cell(field.grid(), lat, lon);
  AtmosColumn col;
  for (int p : ChannelRegistry::pressure_levels()) {
    AtmosColumn::Level lvl;
    lvl.pressure_hpa = p;
    lvl.temperature_k =
        field.at(reg.index_of(Variable::T, p), cell.row, cell.col);
    const double rh =
        field.at(reg.index_of(Variable::R, p), cell.row, cell.col);
    lvl.vapor_pressure_hpa = vapor_pressure_hpa(rh, lvl.temperature_k);
    lvl.geopotential =
        field.at(reg.index_of(Variable::Z, p), cell.row, cell.col);
    col.levels.push_back(lvl);
  }
  return col;
}

ProfileObs simulate_ro_profile(const StateField& field, double lat, double lon,
                               Timestamp obs_time) {
  const AtmosColumn col = column_at(field, lat, lon);
  ProfileObs p;
  p.lat = lat;
  p.lon = lon;
  p.time = obs_time;
  p.kind = ProfileKind::GnssRoRefractivity;
  for (auto it = col.levels.rbegin(); it != col.levels.rend(); ++it) {
    ProfileLevel lvl;
    lvl.coord = it->geopotential / kStandardGravity;
    lvl.value = refractivity(it->pressure_hpa, it->temperature_k,
                             it->vapor_pressure_hpa);
    p.levels.push_back(lvl);
  }
  // Height must increase strictly; a column that folds over is not usable.
  for (std::size_t i = 1; i < p.levels.size(); ++i) {
    if (p.levels[i].coord <= p.levels[i - 1].coord) {
      throw DataError("state column geopotential is not monotone");
    }
  }
  return p;
}

}  // namespace wxda

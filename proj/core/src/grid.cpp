#include "wxda/grid.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "wxda/errors.hpp"
#include "wxda/numeric.hpp"

namespace wxda {

GridSpec GridSpec::global(int n_lat) {
  if (n_lat < 1) throw InvalidGridError("grid needs at least one row");
  GridSpec s;
  s.n_lat = n_lat;
  s.n_lon = 2 * n_lat;
  s.resolution = 180.0 / n_lat;
  return s;
}

void GridSpec::validate() const {
  if (n_lat < 1 || n_lon < 1) {
    throw InvalidGridError("grid dimensions must be positive");
  }
  if (std::abs(n_lat * resolution - 180.0) > 1e-9 ||
      std::abs(n_lon * resolution - 360.0) > 1e-9) {
    throw InvalidGridError("grid does not tile 180x360 degrees");
  }
}

LatWeights latitude_weights(std::span<const double> lat_deg) {
  if (lat_deg.empty()) throw InvalidGridError("no latitude rows");
  std::vector<double> cosphi(lat_deg.size());
  CompensatedSum total;
  for (std::size_t i = 0; i < lat_deg.size(); ++i) {
    const double lat = lat_deg[i];
    if (std::abs(lat) > 90.0 || !std::isfinite(lat)) {
      throw InvalidGridError("latitude out of [-90, 90]");
    }
    cosphi[i] = std::abs(lat) < 90.0 ? std::cos(deg_to_rad(lat)) : 0.0;
    total.add(cosphi[i]);
  }
  const double sum = total.value();
  if (sum <= 0.0) {
    throw InvalidGridError("degenerate grid: cos(lat) vanishes on every row");
  }
  LatWeights out;
  out.w.resize(lat_deg.size());
  const double n = static_cast<double>(lat_deg.size());
  for (std::size_t i = 0; i < lat_deg.size(); ++i) {
    out.w[i] = n * cosphi[i] / sum;
  }
  return out;
}

LatWeights latitude_weights(const GridSpec& spec) {
  if (spec.n_lat < 1) throw InvalidGridError("grid needs at least one row");
  std::vector<double> lats(spec.n_lat);
  for (int i = 0; i < spec.n_lat; ++i) lats[i] = spec.lat_of_row(i);
  return latitude_weights(lats);
}

double great_circle_km(double lat1, double lon1, double lat2, double lon2) {
  const double phi1 = deg_to_rad(lat1);
  const double phi2 = deg_to_rad(lat2);
  const double dphi = deg_to_rad(lat2 - lat1);
  const double dlam = deg_to_rad(lon2 - lon1);
  const double a = std::sin(dphi / 2) * std::sin(dphi / 2) +
                   std::cos(phi1) * std::cos(phi2) * std::sin(dlam / 2) *
                       std::sin(dlam / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

CellIndex nearest_cell(const GridSpec& spec, double lat, double lon) {
  if (!(std::abs(lat) <= 90.0)) {
    throw DataError("latitude out of [-90, 90]");
  }
  // Bracket the point with two candidate rows and two candidate columns and
  // let the true great-circle distance decide; the bracketing cells always
  // contain the optimum on grids this fine.
  const double fi = (90.0 - lat) / spec.resolution - 0.5;
  const double lon_wrapped = lon - 360.0 * std::floor(lon / 360.0);
  const double fj = lon_wrapped / spec.resolution - 0.5;

  const auto clamp_row = [&](long r) {
    return static_cast<int>(std::max(0L, std::min<long>(spec.n_lat - 1, r)));
  };
  const auto wrap_col = [&](long c) {
    long m = c % spec.n_lon;
    if (m < 0) m += spec.n_lon;
    return static_cast<int>(m);
  };

  const int rows[2] = {clamp_row(static_cast<long>(std::floor(fi))),
                       clamp_row(static_cast<long>(std::floor(fi)) + 1)};
  const int cols[2] = {wrap_col(static_cast<long>(std::floor(fj))),
                       wrap_col(static_cast<long>(std::floor(fj)) + 1)};

  CellIndex best{rows[0], cols[0]};
  double best_d = great_circle_km(lat, lon_wrapped, spec.lat_of_row(best.row),
                                  spec.lon_of_col(best.col));
  for (int r : rows) {
    for (int c : cols) {
      const double d = great_circle_km(lat, lon_wrapped, spec.lat_of_row(r),
                                       spec.lon_of_col(c));
      const CellIndex cand{r, c};
      if (d < best_d - 1e-12 ||
          (std::abs(d - best_d) <= 1e-12 &&
           cand.linear(spec) < best.linear(spec))) {
        best = cand;
        best_d = d;
      }
    }
  }
  return best;
}

bool is_surface(Variable v) {
  switch (v) {
    case Variable::Z:
    case Variable::T:
    case Variable::U:
    case Variable::V:
    case Variable::R:
      return false;
    default:
      return true;
  }
}

std::string_view variable_name(Variable v) {
  switch (v) {
    case Variable::Z: return "Z";
    case Variable::T: return "T";
    case Variable::U: return "U";
    case Variable::V: return "V";
    case Variable::R: return "R";
    case Variable::T2m: return "T2m";
    case Variable::MSLP: return "MSLP";
    case Variable::U10m: return "U10m";
    case Variable::V10m: return "V10m";
    case Variable::TP: return "TP";
  }
  return "?";
}

std::optional<Variable> variable_from_name(std::string_view name) {
  static const std::pair<std::string_view, Variable> table[] = {
      {"Z", Variable::Z},       {"T", Variable::T},
      {"U", Variable::U},       {"V", Variable::V},
      {"R", Variable::R},       {"T2m", Variable::T2m},
      {"MSLP", Variable::MSLP}, {"U10m", Variable::U10m},
      {"V10m", Variable::V10m}, {"TP", Variable::TP}};
  for (const auto& [n, v] : table) {
    if (n == name) return v;
  }
  return std::nullopt;
}

std::string ChannelKey::describe() const {
  std::string s(variable_name(var));
  if (!is_surface(var)) s += std::to_string(level_hpa);
  return s;
}

std::optional<ChannelKey> ChannelKey::parse(std::string_view text) {
  // Surface spellings first ("T2m" must not parse as T at level 2).
  if (auto v = variable_from_name(text); v && is_surface(*v)) {
    return ChannelKey{*v, 0};
  }
  std::size_t split = text.find('@');
  std::string_view name, level;
  if (split != std::string_view::npos) {
    name = text.substr(0, split);
    level = text.substr(split + 1);
  } else {
    std::size_t i = 0;
    while (i < text.size() && !std::isdigit(static_cast<unsigned char>(text[i])))
      ++i;
    name = text.substr(0, i);
    level = text.substr(i);
  }
  auto v = variable_from_name(name);
  if (!v) return std::nullopt;
  if (is_surface(*v)) {
    if (!level.empty()) return std::nullopt;
    return ChannelKey{*v, 0};
  }
  int hpa = 0;
  auto [p, ec] = std::from_chars(level.data(), level.data() + level.size(), hpa);
  if (ec != std::errc{} || p != level.data() + level.size() || hpa <= 0) {
    return std::nullopt;
  }
  return ChannelKey{*v, hpa};
}

ChannelRegistry ChannelRegistry::make(bool include_precip) {
  ChannelRegistry reg;
  for (Variable v : {Variable::Z, Variable::T, Variable::U, Variable::V,
                     Variable::R}) {
    for (int level : pressure_levels()) {
      reg.entries_.push_back({v, level});
    }
  }
  for (Variable v : {Variable::T2m, Variable::MSLP, Variable::U10m,
                     Variable::V10m}) {
    reg.entries_.push_back({v, 0});
  }
  if (include_precip) reg.entries_.push_back({Variable::TP, 0});
  return reg;
}

const ChannelKey& ChannelRegistry::at(int idx) const {
  if (idx < 0 || idx >= size()) throw LayoutError("channel index out of range");
  return entries_[idx];
}

std::optional<int> ChannelRegistry::find(Variable v, int level_hpa) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].var == v && entries_[i].level_hpa == level_hpa) {
      return static_cast<int>(i);
    }
  }
  return std::nullopt;
}

int ChannelRegistry::index_of(Variable v, int level_hpa) const {
  auto idx = find(v, level_hpa);
  if (!idx) {
    throw LayoutError("channel " + ChannelKey{v, level_hpa}.describe() +
                      " not in registry");
  }
  return *idx;
}

bool ChannelRegistry::has_precip() const {
  return find(Variable::TP).has_value();
}

std::vector<std::string> ChannelRegistry::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.describe());
  return out;
}

std::optional<ChannelRegistry> ChannelRegistry::from_names(
    std::span<const std::string> names) {
  ChannelRegistry reg;
  reg.entries_.reserve(names.size());
  for (const auto& n : names) {
    auto key = ChannelKey::parse(n);
    if (!key) return std::nullopt;
    reg.entries_.push_back(*key);
  }
  return reg;
}

std::string_view field_kind_name(FieldKind k) {
  switch (k) {
    case FieldKind::Analysis: return "analysis";
    case FieldKind::Background: return "background";
    case FieldKind::Forecast: return "forecast";
    case FieldKind::Climatology: return "climatology";
  }
  return "?";
}

std::optional<FieldKind> field_kind_from_name(std::string_view name) {
  if (name == "analysis") return FieldKind::Analysis;
  if (name == "background") return FieldKind::Background;
  if (name == "forecast") return FieldKind::Forecast;
  if (name == "climatology") return FieldKind::Climatology;
  return std::nullopt;
}

StateField::StateField(GridSpec grid, ChannelRegistry registry,
                       Timestamp valid_time, FieldKind kind)
    : grid_(grid),
      registry_(std::move(registry)),
      valid_time_(valid_time),
      kind_(kind),
      data_(grid.cells() * registry_.size(), 0.0) {
  grid_.validate();
}

std::span<const double> StateField::channel(int c) const {
  if (c < 0 || c >= n_channels()) throw LayoutError("channel out of range");
  return std::span<const double>(data_).subspan(
      static_cast<std::size_t>(c) * grid_.cells(), grid_.cells());
}

std::span<double> StateField::channel(int c) {
  if (c < 0 || c >= n_channels()) throw LayoutError("channel out of range");
  return std::span<double>(data_).subspan(
      static_cast<std::size_t>(c) * grid_.cells(), grid_.cells());
}

bool StateField::finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace wxda

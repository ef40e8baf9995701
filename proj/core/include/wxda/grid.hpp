#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wxda/time.hpp"

namespace wxda {

// Regular global latitude-longitude grid. Rows are cell centers ordered
// north to south at 90 - (i + 0.5) * resolution; columns are cell centers
// eastward from 0 at (j + 0.5) * resolution, periodic in longitude.
struct GridSpec {
  int n_lat = 720;
  int n_lon = 1440;
  double resolution = 0.25;  // degrees, same in both directions

  // Global grid with n_lon = 2 * n_lat, resolution = 180 / n_lat.
  static GridSpec global(int n_lat = 720);

  double lat_of_row(int i) const { return 90.0 - (i + 0.5) * resolution; }
  double lon_of_col(int j) const { return (j + 0.5) * resolution; }

  std::size_t cells() const {
    return static_cast<std::size_t>(n_lat) * static_cast<std::size_t>(n_lon);
  }

  bool operator==(const GridSpec& o) const {
    return n_lat == o.n_lat && n_lon == o.n_lon && resolution == o.resolution;
  }

  // Throws InvalidGridError unless n_lat * resolution == 180 and n_lon *
  // resolution == 360 (within floating tolerance).
  void validate() const;
};

// Area weights per latitude row, normalized so they sum to n_lat.
struct LatWeights {
  std::vector<double> w;

  double operator[](std::size_t i) const { return w[i]; }
  std::size_t size() const { return w.size(); }
};

LatWeights latitude_weights(const GridSpec& spec);
LatWeights latitude_weights(std::span<const double> lat_deg);

inline constexpr double kEarthRadiusKm = 6371.0;

// Great-circle distance on the 6371 km sphere (haversine).
double great_circle_km(double lat1, double lon1, double lat2, double lon2);

struct CellIndex {
  int row = 0;
  int col = 0;

  std::size_t linear(const GridSpec& g) const {
    return static_cast<std::size_t>(row) * g.n_lon + col;
  }
  bool operator==(const CellIndex& o) const {
    return row == o.row && col == o.col;
  }
};

// Cell whose center is nearest in great-circle distance; ties break toward
// the lower row-major index. Throws DataError for |lat| > 90.
CellIndex nearest_cell(const GridSpec& spec, double lat, double lon);

enum class Variable { Z, T, U, V, R, T2m, MSLP, U10m, V10m, TP };

bool is_surface(Variable v);
std::string_view variable_name(Variable v);
std::optional<Variable> variable_from_name(std::string_view name);

// (variable, pressure level) pair; level_hpa == 0 marks surface channels.
struct ChannelKey {
  Variable var = Variable::Z;
  int level_hpa = 0;

  bool operator==(const ChannelKey& o) const {
    return var == o.var && level_hpa == o.level_hpa;
  }

  // "Z500", "T2m"; parse_key accepts the same spelling plus "T@500".
  std::string describe() const;
  static std::optional<ChannelKey> parse(std::string_view text);
};

// Canonical channel ordering shared by every loss and metric. Upper-air
// variables Z,T,U,V,R each at the 13 levels 50..1000 hPa (top down), then
// the surface set T2m, MSLP, U10m, V10m and optionally TP. The registry is
// the single source of truth for ordering; file headers embed it.
class ChannelRegistry {
 public:
  static constexpr std::array<int, 13> pressure_levels() {
    return {50, 100, 150, 200, 250, 300, 400, 500, 600, 700, 850, 925, 1000};
  }

  static ChannelRegistry make(bool include_precip);

  int size() const { return static_cast<int>(entries_.size()); }
  const ChannelKey& at(int idx) const;
  std::optional<int> find(Variable v, int level_hpa = 0) const;
  // Throws LayoutError when the key is not registered.
  int index_of(Variable v, int level_hpa = 0) const;
  bool has_precip() const;

  bool operator==(const ChannelRegistry& o) const {
    return entries_ == o.entries_;
  }

  std::vector<std::string> names() const;
  static std::optional<ChannelRegistry> from_names(
      std::span<const std::string> names);

 private:
  std::vector<ChannelKey> entries_;
};

enum class FieldKind { Analysis, Background, Forecast, Climatology };

std::string_view field_kind_name(FieldKind k);
std::optional<FieldKind> field_kind_from_name(std::string_view name);

// A multi-channel global grid snapshot. Held in 64-bit precision in memory
// (the cycling contraction and loss tolerances require it); the OGF1 disk
// format stores 32-bit floats. Mutation is only expected during
// construction; every consumer treats a finished field as immutable and
// shares it freely across threads.
class StateField {
 public:
  StateField(GridSpec grid, ChannelRegistry registry, Timestamp valid_time,
             FieldKind kind);

  const GridSpec& grid() const { return grid_; }
  const ChannelRegistry& registry() const { return registry_; }
  Timestamp valid_time() const { return valid_time_; }
  void set_valid_time(Timestamp t) { valid_time_ = t; }
  FieldKind kind() const { return kind_; }
  void set_kind(FieldKind k) { kind_ = k; }

  int n_channels() const { return registry_.size(); }

  double at(int c, int i, int j) const { return data_[index(c, i, j)]; }
  double& at(int c, int i, int j) { return data_[index(c, i, j)]; }

  std::span<const double> channel(int c) const;
  std::span<double> channel(int c);

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  bool same_layout(const StateField& o) const {
    return grid_ == o.grid_ && registry_ == o.registry_;
  }

  // True when every value is finite.
  bool finite() const;

 private:
  std::size_t index(int c, int i, int j) const {
    return (static_cast<std::size_t>(c) * grid_.n_lat + i) * grid_.n_lon + j;
  }

  GridSpec grid_;
  ChannelRegistry registry_;
  Timestamp valid_time_;
  FieldKind kind_;
  std::vector<double> data_;
};

}  // namespace wxda

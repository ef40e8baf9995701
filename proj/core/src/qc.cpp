#include "wxda/qc.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "wxda/errors.hpp"

namespace wxda {

bool gross_keep(double value_k, const QcConfig& cfg) {
  return value_k >= cfg.gross_min_k && value_k <= cfg.gross_max_k;
}

std::vector<char> gross_check(std::span<const double> values_k,
                              const QcConfig& cfg) {
  std::vector<char> keep(values_k.size());
  for (std::size_t i = 0; i < values_k.size(); ++i) {
    keep[i] = gross_keep(values_k[i], cfg) ? 1 : 0;
  }
  return keep;
}

namespace {

double median_of(std::vector<double>& v) {
  const std::size_t n = v.size();
  const std::size_t mid = n / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (n % 2 == 0) {
    std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
    m = 0.5 * (m + v[mid - 1]);
  }
  return m;
}

}  // namespace

BiweightStats biweight_stats(std::span<const double> sample, double censor) {
  if (sample.size() < 3) {
    throw InsufficientDataError("biweight needs at least 3 samples");
  }
  std::vector<double> work(sample.begin(), sample.end());
  const double median = median_of(work);
  for (double& v : work) v = std::abs(v - median);
  const double mad = median_of(work);

  BiweightStats out;
  out.n = sample.size();
  if (mad == 0.0) {
    out.center = median;
    out.spread = 0.0;
    return out;
  }

  // Location: weighted mean of deviations with weights (1 - u^2)^2.
  double num = 0.0, den = 0.0;
  for (double x : sample) {
    const double u = (x - median) / (censor * mad);
    if (std::abs(u) >= 1.0) continue;
    const double w = (1.0 - u * u) * (1.0 - u * u);
    num += (x - median) * w;
    den += w;
  }
  out.center = median + (den > 0.0 ? num / den : 0.0);

  // Scale (Lanzante's biweight standard deviation).
  double top = 0.0, bottom = 0.0;
  for (double x : sample) {
    const double u = (x - median) / (censor * mad);
    if (std::abs(u) >= 1.0) continue;
    const double one_minus = 1.0 - u * u;
    top += (x - median) * (x - median) * std::pow(one_minus, 4);
    bottom += one_minus * (1.0 - 5.0 * u * u);
  }
  if (std::abs(bottom) > 0.0 && top >= 0.0) {
    out.spread =
        std::sqrt(static_cast<double>(out.n) * top) / std::abs(bottom);
  }
  return out;
}

LatZone zone_of(double lat) {
  const double a = std::abs(lat);
  if (a < 30.0) return LatZone::Low;
  if (a < 60.0) return LatZone::Middle;
  return LatZone::High;
}

std::string_view zone_name(LatZone z) {
  switch (z) {
    case LatZone::Low: return "low";
    case LatZone::Middle: return "middle";
    case LatZone::High: return "high";
  }
  return "?";
}

ScreenResult zoned_screen(std::span<const double> values,
                          std::span<const double> lats,
                          bool brightness_temperature, const QcConfig& cfg) {
  if (values.size() != lats.size()) {
    throw LayoutError("values and latitudes differ in length");
  }
  const double threshold =
      brightness_temperature ? cfg.z_threshold_bt : cfg.z_threshold_other;

  ScreenResult result;
  result.keep.assign(values.size(), 1);
  for (LatZone zone : {LatZone::Low, LatZone::Middle, LatZone::High}) {
    std::vector<double> members;
    std::vector<std::size_t> where;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (zone_of(lats[i]) == zone) {
        members.push_back(values[i]);
        where.push_back(i);
      }
    }
    ZoneStats zs;
    zs.zone = zone;
    zs.threshold = threshold;
    if (members.size() < 3) {
      zs.small_sample = true;
      zs.kept = members.size();
      zs.stats.n = members.size();
      result.zones.push_back(zs);
      continue;
    }
    zs.stats = biweight_stats(members, cfg.biweight_censor);
    for (std::size_t k = 0; k < members.size(); ++k) {
      const bool keep =
          std::abs(members[k] - zs.stats.center) <= threshold * zs.stats.spread;
      result.keep[where[k]] = keep ? 1 : 0;
      keep ? ++zs.kept : ++zs.rejected;
    }
    result.zones.push_back(zs);
  }
  return result;
}

void write_screen_report(std::ostream& os, const std::string& channel,
                         const ScreenResult& result) {
  for (const auto& z : result.zones) {
    os << "qc channel=" << channel << " zone=" << zone_name(z.zone)
       << " n=" << z.stats.n << " kept=" << z.kept
       << " rejected=" << z.rejected << " center=" << z.stats.center
       << " spread=" << z.stats.spread << " threshold=" << z.threshold
       << (z.small_sample ? " small_sample=1" : "") << "\n";
  }
}

}  // namespace wxda

// Acceptance suite: one criterion per section, one PASS/FAIL line each,
// non-zero exit if anything fails. Tolerances are pinned here, not deferred
// to configuration.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wxda/channel_select.hpp"
#include "wxda/cycling.hpp"
#include "wxda/dilation.hpp"
#include "wxda/encode.hpp"
#include "wxda/errors.hpp"
#include "wxda/forward.hpp"
#include "wxda/losses.hpp"
#include "wxda/metrics.hpp"
#include "wxda/numeric.hpp"
#include "wxda/obs_io.hpp"
#include "wxda/ogf1.hpp"
#include "wxda/operators.hpp"
#include "wxda/qc.hpp"
#include "wxda/rng.hpp"

#ifndef WXDA_CLI_PATH
#define WXDA_CLI_PATH "wxda"
#endif

namespace {

using namespace wxda;

const Timestamp kT0 = make_time(2023, 7, 1);
const Timestamp kDt = 6 * kSecondsPerHour;

struct Harness {
  int failed = 0;

  void criterion(const std::string& name,
                 const std::function<std::pair<bool, std::string>()>& fn) {
    bool ok = false;
    std::string detail;
    try {
      std::tie(ok, detail) = fn();
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name
              << (detail.empty() ? "" : " (" + detail + ")") << std::endl;
    if (!ok) ++failed;
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// -------------------------------------------------------------------------
// Shared builders

struct Plane {
  int n_lat, n_lon;
  std::vector<float> values, mask;
  Plane(int h, int w)
      : n_lat(h),
        n_lon(w),
        values(static_cast<std::size_t>(h) * w, 0.0f),
        mask(static_cast<std::size_t>(h) * w, 0.0f) {}
};

Plane random_plane(int h, int w, double density, Rng& rng) {
  Plane p(h, w);
  for (std::size_t k = 0; k < p.values.size(); ++k) {
    if (rng.uniform01() < density) {
      p.mask[k] = 1.0f;
      p.values[k] = static_cast<float>(100.0 + 200.0 * rng.uniform01());
    }
  }
  return p;
}

StateField random_field(const GridSpec& g, const ChannelRegistry& reg,
                        Rng& rng, double scale = 1.0) {
  StateField f(g, reg, kT0, FieldKind::Analysis);
  for (double& v : f.data()) v = (rng.uniform01() * 2.0 - 1.0) * scale;
  return f;
}

const ChannelRegistry& small_reg() {
  static const ChannelRegistry reg = [] {
    std::vector<std::string> names = {"T2m", "MSLP", "U10m", "V10m"};
    return *ChannelRegistry::from_names(names);
  }();
  return reg;
}

// -------------------------------------------------------------------------
// Criteria

std::pair<bool, std::string> dilation_oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(1001);
  const CressmanKernel kernel = build_kernel(10);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const double density = 0.001 + rng.uniform01() * 0.049;
    const Plane p = random_plane(64, 128, density, rng);
    const DilationResult fast = dilate(p.values, p.mask, 64, 128, kernel);
    const DilationResult slow =
        brute_force_fill(p.values, p.mask, 64, 128, 10);
    for (std::size_t k = 0; k < fast.values.size(); ++k) {
      worst = std::max(worst, std::abs(fast.values[k] - slow.values[k]));
      if (fast.mask[k] != slow.mask[k]) return {false, "mask mismatch"};
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return {worst < 1e-10 && seconds < 10.0,
          "max|diff|=" + fmt(worst) + ", " + fmt(seconds) + " s"};
}

std::pair<bool, std::string> dilation_preservation_confidence() {
  Rng rng(1002);
  const CressmanKernel kernel = build_kernel(10);
  for (int trial = 0; trial < 100; ++trial) {
    Plane p = random_plane(48, 96, 0.002 + rng.uniform01() * 0.03, rng);
    const DilationResult before = dilate(p.values, p.mask, 48, 96, kernel);
    for (std::size_t k = 0; k < p.values.size(); ++k) {
      if (p.mask[k] != 0.0f) {
        if (before.values[k] != static_cast<double>(p.values[k])) {
          return {false, "observed cell not preserved bit-exactly"};
        }
        if (before.confidence[k] != 1.0) {
          return {false, "confidence != 1 at an observation"};
        }
      } else if (before.mask[k] != 0.0f) {
        if (!(before.confidence[k] > 0.0 && before.confidence[k] <= 1.0)) {
          return {false, "filled confidence outside (0,1]"};
        }
      } else if (before.confidence[k] != 0.0) {
        return {false, "confidence nonzero at an uncovered cell"};
      }
    }
    // Add one observation; no filled cell's confidence may drop.
    std::size_t spot = rng.below(p.values.size());
    while (p.mask[spot] != 0.0f) spot = rng.below(p.values.size());
    Plane q = p;
    q.mask[spot] = 1.0f;
    q.values[spot] = 200.0f;
    const DilationResult after = dilate(q.values, q.mask, 48, 96, kernel);
    for (std::size_t k = 0; k < p.values.size(); ++k) {
      if (p.mask[k] != 0.0f || k == spot) continue;
      if (after.confidence[k] < before.confidence[k] - 1e-15) {
        return {false, "confidence dropped after adding an observation"};
      }
    }
  }
  return {true, "100 trials"};
}

std::pair<bool, std::string> kernel_spot_values() {
  const CressmanKernel k = build_kernel(10);
  const bool ok = k.at(0, 0) == 1.0 && k.at(0, 10) == 0.0 &&
                  k.at(10, 0) == 0.0 &&
                  k.at(5, 5) == (100.0 - 50.0) / (100.0 + 50.0);
  return {ok, "w(0)=1, w(R)=0, w(d2=R2/2)=1/3"};
}

std::pair<bool, std::string> refractivity_anchors() {
  if (std::abs(refractivity(1000.0, 300.0, 0.0) - 258.6667) > 1e-3) {
    return {false, "P=1000,T=300,e=0 anchor"};
  }
  if (std::abs(refractivity(1000.0, 280.0, 10.0) - 324.7194) > 1e-3) {
    return {false, "P=1000,T=280,e=10 anchor"};
  }
  Rng rng(1004);
  for (int trial = 0; trial < 10000; ++trial) {
    const double p = 5.0 + rng.uniform01() * 1050.0;
    const double t = 180.0 + rng.uniform01() * 140.0;
    const double e = rng.uniform01() * 40.0;
    const double base = refractivity(p, t, e);
    if (!(refractivity(p + 0.5, t, e) > base)) return {false, "dN/dP <= 0"};
    if (!(refractivity(p, t + 0.25, e) < base)) return {false, "dN/dT >= 0"};
    if (!(refractivity(p, t, e + 0.05) > base)) return {false, "dN/de <= 0"};
  }
  return {true, "anchors + 1e4 monotonicity checks"};
}

std::pair<bool, std::string> loss_oracles() {
  const GridSpec g = GridSpec::global(16);
  const ChannelRegistry& reg = small_reg();
  const LatWeights w = latitude_weights(g);
  ObsLossWeights lambda;
  lambda.lambda.assign(reg.size(), 0.2);
  Rng rng(1005);

  const auto oracle_state = [&](const StateField& x, const StateField& y) {
    double sum = 0.0;
    for (int i = 0; i < g.n_lat; ++i) {
      for (int j = 0; j < g.n_lon; ++j) {
        for (int c = 0; c < reg.size(); ++c) {
          sum += w[i] * std::abs(x.at(c, i, j) - y.at(c, i, j));
        }
      }
    }
    return sum / (static_cast<double>(reg.size()) * g.n_lat * g.n_lon);
  };
  const auto oracle_obs = [&](const StateField& x,
                              const GriddedObsTensor& y) {
    double total = 0.0;
    for (int c = 0; c < reg.size(); ++c) {
      double num = 0.0, count = 0.0;
      for (int i = 0; i < g.n_lat; ++i) {
        for (int j = 0; j < g.n_lon; ++j) {
          const std::size_t k = y.index(0, c, i, j);
          if (y.mask[k] == 0.0f) continue;
          num += w[i] * std::abs(x.at(c, i, j) -
                                 static_cast<double>(y.values[k]));
          count += 1.0;
        }
      }
      total += lambda.lambda[c] * num / (count + 1.0);
    }
    return total / reg.size();
  };
  const auto random_obs = [&](double density) {
    GriddedObsTensor y(g, 1, reg.names(), kT0, 1);
    for (std::size_t k = 0; k < y.values.size(); ++k) {
      if (rng.uniform01() < density) {
        y.mask[k] = 1.0f;
        y.values[k] = static_cast<float>(rng.uniform01() * 2.0 - 1.0);
      }
    }
    return y;
  };

  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const StateField x = random_field(g, reg, rng, 3.0);
    const StateField xhat = random_field(g, reg, rng, 3.0);
    const GriddedObsTensor y = random_obs(0.05 + rng.uniform01() * 0.2);

    worst = std::max(worst,
                     std::abs(state_loss(x, xhat, w) - oracle_state(x, xhat)));
    worst = std::max(worst,
                     std::abs(obs_loss(x, y, lambda, w) - oracle_obs(x, y)));
    worst = std::max(
        worst, std::abs(joint_loss(x, xhat, y, lambda, w) -
                        (oracle_state(x, xhat) + oracle_obs(x, y))));

    const std::vector<StateField> analyses = {x};
    const std::vector<StateField> backgrounds = {xhat};
    const std::vector<StateField> truths = {xhat, x};
    const std::vector<GriddedObsTensor> obs = {y, y};
    const double cyc = cycle_loss(analyses, backgrounds, truths, obs, lambda, w);
    const double cyc_oracle = oracle_state(x, xhat) + oracle_obs(x, y) +
                              oracle_state(xhat, x) + oracle_obs(xhat, y);
    worst = std::max(worst, std::abs(cyc - cyc_oracle));

    const std::vector<StateField> fcs = {x, xhat};
    const std::vector<StateField> trs = {xhat, x};
    const double multi = multi_step_loss(fcs, trs, w);
    worst = std::max(worst, std::abs(multi - oracle_state(x, xhat)));
  }

  if (worst >= 1e-12) return {false, "loss vs oracle " + fmt(worst)};

  const ChannelRegistry full = ChannelRegistry::make(false);
  const ObsLossWeights table = default_obs_weights(full);
  for (int c = 0; c < full.size(); ++c) {
    const ChannelKey& key = full.at(c);
    if (is_surface(key.var) && std::abs(table.lambda[c] - 0.2) > 1e-15) {
      return {false, "surface weight anchor"};
    }
    if (!is_surface(key.var) && key.level_hpa <= 500 &&
        std::abs(table.lambda[c] - 0.02) > 1e-15) {
      return {false, "upper-level 0.02 anchor"};
    }
  }
  if (std::abs(table.lambda[full.index_of(Variable::T, 1000)] - 0.2) >
      1e-15) {
    return {false, "T@1000 anchor"};
  }
  return {true, "50 instances, max|diff|=" + fmt(worst)};
}

std::pair<bool, std::string> metric_identities() {
  Rng rng(1006);
  // RMSE^2 = STD^2 + MBE^2 against in-situ departures.
  const GridSpec g = GridSpec::global(16);
  const ChannelRegistry& reg = small_reg();
  const StateField field = random_field(g, reg, rng, 10.0);
  std::vector<PointObs> obs;
  for (int i = 0; i < 2000; ++i) {
    PointObs p;
    p.lat = rng.uniform01() * 170.0 - 85.0;
    p.lon = rng.uniform01() * 360.0;
    p.time = kT0;
    p.variable = i % 2 ? "T2m" : "U10m";
    p.value = rng.normal() * 4.0;
    obs.push_back(p);
  }
  const DepartureScores s = score_insitu_all(field, obs);
  if (std::abs(s.rmse * s.rmse - (s.std_dev * s.std_dev + s.mbe * s.mbe)) >=
      1e-10) {
    return {false, "RMSE^2 != STD^2 + MBE^2"};
  }

  // ACC identity and bounds over 1e4 random instances.
  const GridSpec g2 = GridSpec::global(4);
  std::vector<std::string> one = {"T2m"};
  const ChannelRegistry reg1 = *ChannelRegistry::from_names(one);
  const LatWeights w2 = latitude_weights(g2);
  for (int trial = 0; trial < 10000; ++trial) {
    const StateField f = random_field(g2, reg1, rng);
    const StateField t = random_field(g2, reg1, rng);
    const StateField m = random_field(g2, reg1, rng);
    const auto self = acc(f, f, m, w2);
    if (!self[0] || std::abs(*self[0] - 1.0) > 1e-12) {
      return {false, "ACC(x,x) != 1"};
    }
    const auto cross = acc(f, t, m, w2);
    if (!cross[0] || *cross[0] < -1.0 || *cross[0] > 1.0) {
      return {false, "ACC outside [-1,1]"};
    }
  }

  // GNSS vertical matching rejects |dPhi| >= 1000 exactly.
  const ChannelRegistry full = ChannelRegistry::make(false);
  StateField state(GridSpec::global(16), full, kT0, FieldKind::Analysis);
  for (int c = 0; c < full.size(); ++c) {
    const ChannelKey& key = full.at(c);
    double v = 0.0;
    if (key.var == Variable::T) v = 210.0 + 0.09 * key.level_hpa;
    else if (key.var == Variable::R) v = 40.0;
    else if (key.var == Variable::Z) {
      v = geopotential_from_height(45000.0 - 43.0 * key.level_hpa);
    }
    for (double& x : state.channel(c)) x = v;
  }
  const AtmosColumn col = column_at(state, 0.0, 0.0);
  const double phi500 = col.levels[7].geopotential;
  GnssMatchOptions opt;
  opt.level_filter = 500;
  ProfileObs outside;
  outside.lat = 0.0;
  outside.lon = 0.0;
  outside.time = kT0;
  outside.levels.push_back({(phi500 - 1001.0) / kStandardGravity, 100.0});
  ProfileObs inside = outside;
  inside.levels[0].coord = (phi500 - 999.0) / kStandardGravity;
  const std::vector<ProfileObs> po = {outside};
  const std::vector<ProfileObs> pi = {inside};
  bool rejected = false;
  try {
    score_gnss_all(state, po, opt);
  } catch (const NoDataError&) {
    rejected = true;
  }
  if (!rejected) return {false, "dPhi past 1000 matched"};
  if (score_gnss_all(state, pi, opt).n != 1) {
    return {false, "dPhi inside 1000 not matched"};
  }
  return {true, "identity + 1e4 ACC bounds + vertical gate"};
}

std::pair<bool, std::string> qc_criteria() {
  if (!gross_keep(50.0) || !gross_keep(350.0) || gross_keep(49.999) ||
      gross_keep(350.001)) {
    return {false, "gross bounds"};
  }
  Rng rng(20230701);
  std::vector<double> sample(100000);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    sample[i] = i % 10 == 0 ? 50.0 : rng.normal();
  }
  const BiweightStats s = biweight_stats(sample);
  double mean = 0.0;
  for (double v : sample) mean += v;
  mean /= static_cast<double>(sample.size());
  if (std::abs(s.center) >= 0.02) {
    return {false, "biweight center " + fmt(s.center)};
  }
  if (std::abs(s.center) >= std::abs(mean)) {
    return {false, "biweight center no better than the mean"};
  }

  // Constructed deviations around the zoned thresholds.
  std::vector<double> values, lats;
  Rng rng2(77);
  for (int i = 0; i < 2000; ++i) {
    values.push_back(230.0 + rng2.normal());
    lats.push_back(rng2.uniform01() * 25.0);
  }
  const BiweightStats base = biweight_stats(values);
  values.push_back(base.center + 5.0 * base.spread);
  lats.push_back(1.0);
  values.push_back(base.center + 6.5 * base.spread);
  lats.push_back(2.0);
  const ScreenResult bt = zoned_screen(values, lats, true);
  const ScreenResult other = zoned_screen(values, lats, false);
  const std::size_t n = values.size();
  const bool thresholds_ok =
      bt.keep[n - 2] == 1 &&      // 5 sigma passes the BT threshold of 6
      bt.keep[n - 1] == 0 &&      // 6.5 sigma fails it
      other.keep[n - 2] == 0;     // 5 sigma fails the threshold of 4
  return {thresholds_ok, "center=" + fmt(s.center) + ", mean=" + fmt(mean)};
}

std::pair<bool, std::string> encoding_criteria() {
  const GridSpec g = GridSpec::global(32);
  Rng rng(1008);
  // Unit circle on the time-embedding channels.
  std::vector<ProfileObs> profiles;
  std::set<std::size_t> cells_used;
  const double dz = 50000.0 / 64;
  while (profiles.size() < 30) {
    ProfileObs p;
    p.lat = rng.uniform01() * 170.0 - 85.0;
    p.lon = rng.uniform01() * 360.0;
    const std::size_t cell = nearest_cell(g, p.lat, p.lon).linear(g);
    if (!cells_used.insert(cell).second) continue;
    p.time = kT0 + static_cast<Timestamp>(rng.below(8 * 3600));
    for (int k = 0; k < 64; ++k) {
      p.levels.push_back({(k + 0.5) * dz, rng.uniform01() * 300.0});
    }
    profiles.push_back(std::move(p));
  }
  const GriddedObsTensor t = encode_time_embedding(profiles, kT0, 8, g, 64);
  const std::size_t cells = g.cells();
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (t.mask[64 * cells + cell] == 0.0f) continue;
    const double s = t.values[64 * cells + cell];
    const double c = t.values[65 * cells + cell];
    if (std::abs(s * s + c * c - 1.0) > 1e-6) {
      return {false, "unit circle violated"};
    }
  }
  // Collision-free batches round-trip exactly.
  for (const ProfileObs& p : profiles) {
    const std::size_t cell = nearest_cell(g, p.lat, p.lon).linear(g);
    for (int k = 0; k < 64; ++k) {
      if (t.values[k * cells + cell] !=
          static_cast<float>(p.levels[k].value)) {
        return {false, "profile not recoverable"};
      }
    }
  }

  // GNSS-RO channel count with the production layer count.
  ProfileObs ro;
  ro.lat = 10.0;
  ro.lon = 20.0;
  ro.time = kT0;
  ro.levels.push_back({1000.0, 300.0});
  ro.levels.push_back({20000.0, 60.0});
  const std::vector<ProfileObs> one_ro = {ro};
  if (encode_time_embedding(one_ro, kT0, 8, g).n_channels() != 514) {
    return {false, "GNSS-RO channel count != 514"};
  }

  // ATMS-like and AMSU-A-like platform metadata widths.
  SwathObs atms;
  atms.instrument = "ATMS";
  atms.platform = "A";
  atms.n_channels = 22;
  SwathPixel px;
  px.lat = 5.0;
  px.lon = 100.0;
  px.time = kT0;
  px.zenith_deg = 30.0;
  px.brightness_k.assign(22, 250.0f);
  atms.pixels.push_back(px);
  const SwathFrame af = project_swath(atms, g, kT0);
  if (append_platform_metadata(af.frame, af.zenith, 0, 2).n_channels() != 25) {
    return {false, "ATMS augmented channel count != 25"};
  }
  SwathObs amsua = atms;
  amsua.instrument = "AMSU-A";
  amsua.n_channels = 15;
  amsua.pixels[0].brightness_k.assign(15, 240.0f);
  const SwathFrame mf = project_swath(amsua, g, kT0);
  const SparseFrame aug = append_platform_metadata(mf.frame, mf.zenith, 4, 5);
  if (aug.n_channels() != 15 + 1 + 5) {
    return {false, "AMSU-A one-hot width != 5"};
  }
  return {true, "unit circle, 25/5/514 channel anchors, round trip"};
}

std::pair<bool, std::string> cycling_contraction() {
  const GridSpec g = GridSpec::global(8);
  const ChannelRegistry& reg = small_reg();
  const auto alternating = [&](Timestamp t, double amp) {
    StateField f(g, reg, t, FieldKind::Analysis);
    for (int c = 0; c < reg.size(); ++c) {
      auto ch = f.channel(c);
      for (int i = 0; i < g.n_lat; ++i) {
        for (int j = 0; j < g.n_lon; ++j) {
          ch[static_cast<std::size_t>(i) * g.n_lon + j] =
              j % 2 == 0 ? amp : -amp;
        }
      }
    }
    return f;
  };
  const auto make_init = [&]() {
    StateField bg = alternating(kT0 + kDt, 1.0);
    for (double& v : bg.data()) v *= 0.8;
    bg.set_kind(FieldKind::Background);
    return CycleState{alternating(kT0 - kDt, 1.0), alternating(kT0, 1.0),
                      std::move(bg)};
  };
  const ObsStream zeros = [&](Timestamp t) {
    ObservationSet set;
    GriddedObsTensor y(g, 1, reg.names(), t, 1);
    for (float& m : y.mask) m = 1.0f;
    set.sources.push_back(std::move(y));
    return set;
  };

  RelaxationAssimilator a1(0.5), a2(0.5);
  AdvectionForecaster f1(0.2, 0), f2(0.2, 0);
  const auto traj = run_cycle(a1, f1, make_init(), zeros, 40);
  const auto traj2 = run_cycle(a2, f2, make_init(), zeros, 40);

  double worst = 0.0;
  for (int n = 1; n <= 40; ++n) {
    double max_abs = 0.0;
    for (double v : traj[n - 1].analysis.data()) {
      max_abs = std::max(max_abs, std::abs(v));
    }
    worst = std::max(worst, std::abs(max_abs - std::pow(0.4, n)));
  }
  if (worst >= 1e-10) return {false, "0.4^n deviation " + fmt(worst)};

  double final_err = 0.0;
  for (double v : traj[39].analysis.data()) {
    final_err = std::max(final_err, std::abs(v));
  }
  if (final_err >= 1e-6) return {false, "spin-up error " + fmt(final_err)};

  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj[k].analysis.data().size() != traj2[k].analysis.data().size()) {
      return {false, "trajectory size mismatch"};
    }
    for (std::size_t i = 0; i < traj[k].analysis.data().size(); ++i) {
      if (traj[k].analysis.data()[i] != traj2[k].analysis.data()[i]) {
        return {false, "rerun not bit-identical"};
      }
    }
  }
  return {true, "0.4^n within " + fmt(worst) + ", spin-up " + fmt(final_err)};
}

std::pair<bool, std::string> channel_selection_counts() {
  Rng rng(20240101);
  int id = 100;
  const auto bump = [&](SounderBand band, double peak) {
    ChannelJacobian c;
    c.channel_id = id++;
    c.band = band;
    const double magnitude = 0.5 + rng.uniform01();
    for (double p = 10.0; p <= 1000.0; p += 5.0) {
      c.level_pressure_hpa.push_back(p);
      const double x = (p - peak) / 80.0;
      c.jacobian.push_back(magnitude * std::exp(-x * x));
    }
    return c;
  };
  const auto peak_in_bin = [&](long bin) {
    return 20.0 * (bin + 1) + 5.0 * (1 + static_cast<double>(rng.below(3)));
  };
  std::vector<ChannelJacobian> co2, h2o, window;
  for (int b = 0; b < 16; ++b) {
    const int members = b < 5 ? 6 : 5;
    for (int k = 0; k < members; ++k) {
      co2.push_back(bump(SounderBand::Co2, peak_in_bin(2 * b + 1)));
    }
  }
  for (int b = 0; b < 9; ++b) {
    const int members = b < 5 ? 3 : 2;
    for (int k = 0; k < members; ++k) {
      h2o.push_back(bump(SounderBand::H2o, peak_in_bin(14 + 3 * b)));
    }
  }
  window.push_back(bump(SounderBand::Window, 995.0));
  const auto by_peak = [](std::vector<ChannelJacobian>& v) {
    std::sort(v.begin(), v.end(),
              [](const ChannelJacobian& a, const ChannelJacobian& b) {
                return a.peak_pressure() < b.peak_pressure();
              });
  };
  by_peak(co2);
  by_peak(h2o);
  if (co2.size() != 85 || h2o.size() != 23) {
    return {false, "fixture sizes"};
  }
  const auto co2_kept = interval_sample(co2);
  const auto h2o_kept = interval_sample(h2o);
  if (co2_kept.size() != 16 || h2o_kept.size() != 9) {
    return {false, "interval sampling " + std::to_string(co2_kept.size()) +
                       "+" + std::to_string(h2o_kept.size())};
  }
  const auto rest = [](const std::vector<ChannelJacobian>& all,
                       const std::vector<ChannelJacobian>& kept) {
    std::set<int> ids;
    for (const auto& c : kept) ids.insert(c.channel_id);
    std::vector<ChannelJacobian> out;
    for (const auto& c : all) {
      if (!ids.count(c.channel_id)) out.push_back(c);
    }
    return out;
  };
  const auto co2_final = gap_fill(co2_kept, rest(co2, co2_kept), 21);
  const auto h2o_final = gap_fill(h2o_kept, rest(h2o, h2o_kept), 16);
  const auto win_final = gap_fill({}, window, 1);
  const std::size_t total = co2_final.channels.size() +
                            h2o_final.channels.size() +
                            win_final.channels.size();
  return {co2_final.target_met && h2o_final.target_met &&
              win_final.target_met && total == 38,
          "108 -> 16+9 -> " + std::to_string(total)};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(WXDA_CLI_PATH) + " " + args;
  return std::system(cmd.c_str());
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
}

std::pair<bool, std::string> cli_golden_run() {
  const auto start = std::chrono::steady_clock::now();
  const auto dir =
      std::filesystem::temp_directory_path() / "wxda_acceptance_golden";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string d = dir.string() + "/";

  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "grid.n_lat = 36\nseed = 7\n";
  }

  // Synthetic truth, climatology and a perturbed initial state pair.
  if (run_cli("synth --grid 36 --time 2023-07-01T00:00:00Z --kind analysis "
              "--seed 3 --out " + d + "truth.ogf1 > /dev/null") != 0 ||
      run_cli("synth --grid 36 --time 2023-07-01T00:00:00Z --kind "
              "climatology --seed 99 --out " + d + "clim.ogf1 > /dev/null") !=
          0) {
    return {false, "synth failed"};
  }

  // Simulated observations: in-situ points sampled from the truth plus
  // simulated GNSS-RO profiles.
  {
    const StateField truth = read_state(dir / "truth.ogf1");
    const ChannelRegistry reg = ChannelRegistry::make(false);
    Rng rng(11);
    ObsBatch batch;
    for (int i = 0; i < 120; ++i) {
      PointObs p;
      p.lat = rng.uniform01() * 170.0 - 85.0;
      p.lon = rng.uniform01() * 360.0;
      p.time = kT0 + static_cast<Timestamp>(rng.below(1800));
      const Variable var =
          i % 2 ? Variable::T2m
                : (i % 4 == 0 ? Variable::MSLP : Variable::U10m);
      const CellIndex cell = nearest_cell(truth.grid(), p.lat, p.lon);
      p.variable = ChannelKey{var, 0}.describe();
      p.value = truth.at(reg.index_of(var), cell.row, cell.col) +
                rng.normal() * 0.01;
      p.source = i % 3 ? PointSource::LandStation : PointSource::Marine;
      batch.points.push_back(std::move(p));
    }
    write_obs_file(dir / "insitu_raw.txt", batch);

    ROGeometryTable geo;
    for (int i = 0; i < 200; ++i) {
      geo.add(0, rng.uniform01() * 170.0 - 85.0, rng.uniform01() * 360.0);
    }
    geo.write(dir / "geometry.txt");
  }
  if (run_cli("simulate --truth " + d + "truth.ogf1 --geometry " + d +
              "geometry.txt --hour 0 --count 80 --seed 5 --time "
              "2023-07-01T00:05:00Z --out " + d + "ro_obs.txt > /dev/null") !=
      0) {
    return {false, "simulate failed"};
  }

  // QC, encode, dilate.
  if (run_cli("qc --config " + d + "run.cfg --in " + d + "insitu_raw.txt "
              "--out " + d + "insitu_qc.txt --report " + d +
              "qc_report.txt > /dev/null") != 0) {
    return {false, "qc failed"};
  }
  if (run_cli("encode --config " + d + "run.cfg --kind supervision --in " +
              d + "insitu_qc.txt --t0 2023-07-01T00:00:00Z --out " + d +
              "sup --report " + d + "encode_report.txt > /dev/null") != 0) {
    return {false, "encode failed"};
  }
  if (run_cli("encode --config " + d + "run.cfg --kind gnssro --in " + d +
              "ro_obs.txt --t0 2023-07-01T00:00:00Z --out " + d +
              "ro > /dev/null") != 0) {
    return {false, "encode gnssro failed"};
  }
  if (run_cli("dilate --config " + d + "run.cfg --in " + d + "sup --out " +
              d + "sup_dilated > /dev/null") != 0) {
    return {false, "dilate failed"};
  }

  // Observation sets for four cycle steps (the same supervision tensor at
  // every cycle time keeps the toy run deterministic).
  const auto obs_dir = dir / "obs";
  std::filesystem::create_directories(obs_dir);
  for (int k = 1; k <= 4; ++k) {
    const Timestamp t = kT0 + k * kDt;
    const GriddedObsTensor sup = read_tensor(dir / "sup_dilated");
    GriddedObsTensor copy(sup.grid(), sup.n_time(), sup.channels(), t,
                          sup.window_hours());
    copy.values = sup.values;
    copy.mask = sup.mask;
    copy.confidence = sup.confidence;
    const CivilTime c = civil_from_time(t);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "obs_%04d%02d%02dT%02d%02d%02dZ", c.year,
                  c.month, c.day, c.hour, c.minute, c.second);
    write_tensor(obs_dir / buf, copy);
  }

  // Initial states and the cycle itself, twice, for byte stability.
  if (run_cli("synth --grid 36 --time 2023-06-30T18:00:00Z --kind analysis "
              "--seed 3 --out " + d + "a_prev.ogf1 > /dev/null") != 0 ||
      run_cli("synth --base " + d + "truth.ogf1 --perturb 0.5 --seed 21 "
              "--time 2023-07-01T00:00:00Z --kind analysis --out " + d +
              "a_cur.ogf1 > /dev/null") != 0 ||
      run_cli("synth --base " + d + "truth.ogf1 --perturb 1.0 --seed 22 "
              "--time 2023-07-01T06:00:00Z --kind background --out " + d +
              "b_next.ogf1 > /dev/null") != 0) {
    return {false, "init synth failed"};
  }

  const auto truth_dir = dir / "truths";
  std::filesystem::create_directories(truth_dir);
  for (int k = 1; k <= 4; ++k) {
    const Timestamp t = kT0 + k * kDt;
    StateField truth = read_state(dir / "truth.ogf1");
    truth.set_valid_time(t);
    const CivilTime c = civil_from_time(t);
    char buf[34];
    std::snprintf(buf, sizeof(buf), "truth_%04d%02d%02dT%02d%02d%02dZ.ogf1",
                  c.year, c.month, c.day, c.hour, c.minute, c.second);
    write_state(truth_dir / buf, truth);
  }

  for (const char* run : {"cyc1", "cyc2"}) {
    if (run_cli("cycle --config " + d + "run.cfg --init-prev " + d +
                "a_prev.ogf1 --init-analysis " + d + "a_cur.ogf1 "
                "--init-background " + d + "b_next.ogf1 --obs-dir " +
                obs_dir.string() + " --truth-dir " + truth_dir.string() +
                " --steps 4 --out " + d + run + " > /dev/null") != 0) {
      return {false, "cycle failed"};
    }
  }

  // Score both runs against the truths; scorecards must match byte for byte
  // across reruns.
  for (const char* run : {"cyc1", "cyc2"}) {
    std::string forecasts;
    for (int k = 1; k <= 4; ++k) {
      const Timestamp t = kT0 + k * kDt;
      const CivilTime c = civil_from_time(t);
      char buf[40];
      std::snprintf(buf, sizeof(buf),
                    "analysis_%04d%02d%02dT%02d%02d%02dZ.ogf1", c.year,
                    c.month, c.day, c.hour, c.minute, c.second);
      forecasts += " --forecast " + d + run + "/" + buf;
    }
    if (run_cli("verify --mode wrmse" + forecasts + " --truth-dir " +
                truth_dir.string() + " --init 2023-07-01T00:00:00Z --out " +
                d + run + "_card.tsv > /dev/null") != 0) {
      return {false, "verify failed"};
    }
  }
  const std::string card1 = slurp(dir / "cyc1_card.tsv");
  const std::string card2 = slurp(dir / "cyc2_card.tsv");
  if (card1.empty() || card1 != card2) {
    return {false, "scorecards differ across reruns"};
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (seconds >= 60.0) return {false, "took " + fmt(seconds) + " s"};
  std::filesystem::remove_all(dir);
  return {true, "byte-stable scorecard, " + fmt(seconds) + " s"};
}

}  // namespace

int main() {
  Harness h;
  h.criterion("dilation oracle equivalence (200 fields, 1e-10, <10s)",
              dilation_oracle_equivalence);
  h.criterion("dilation preservation and confidence (100 trials)",
              dilation_preservation_confidence);
  h.criterion("Cressman kernel spot values", kernel_spot_values);
  h.criterion("refractivity anchors and monotonicity (1e4 columns)",
              refractivity_anchors);
  h.criterion("loss oracles (50 instances, 1e-12) and weight anchors",
              loss_oracles);
  h.criterion("metric identities (RMSE/STD/MBE, ACC, GNSS gate)",
              metric_identities);
  h.criterion("QC gross bounds, biweight robustness, zoned thresholds",
              qc_criteria);
  h.criterion("encoding anchors (unit circle, 25/5/514, round trip)",
              encoding_criteria);
  h.criterion("cycling contraction 0.4^n, spin-up, bit-identical reruns",
              cycling_contraction);
  h.criterion("channel selection counts (108 -> 16+9 -> 38)",
              channel_selection_counts);
  h.criterion("end-to-end CLI golden run (<60s, byte-stable)",
              cli_golden_run);

  if (h.failed != 0) {
    std::cout << h.failed << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all acceptance criteria passed" << std::endl;
  return 0;
}

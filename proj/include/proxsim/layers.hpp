#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "proxsim/costmap.hpp"
#include "proxsim/proxemics.hpp"

namespace proxsim {

// Social raster support: cells where the Gaussian falls below this are not
// written, which bounds each person's footprint to ~2.45 sigma.
inline constexpr double kSocialCutoff = 0.05;

inline constexpr double kInflationGain = 3.0;         // 1/m
inline constexpr double kInflationDecayRadius = 1.0;  // m
inline constexpr double kDefaultRobotRadius = 0.25;   // m

/// One simulated range scan: bearings are relative to the origin heading,
/// hit == false means the beam ran to max_range unobstructed.
struct SensorScan {
  struct Beam {
    double bearing = 0.0;
    double range = 0.0;
    bool hit = false;
  };
  Pose2D origin;
  std::vector<Beam> beams;
  double max_range = 5.0;
};

enum class NavMode { kSocial, kBaseline, kSocialNoCoop };

inline const char* to_string(NavMode m) {
  switch (m) {
    case NavMode::kSocial: return "social";
    case NavMode::kBaseline: return "baseline";
    case NavMode::kSocialNoCoop: return "social_nocoop";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Stage 1: static map.

inline void static_update(const OccupancyGrid& def, Costmap& working) {
  if (def.width != working.width() || def.height != working.height())
    throw std::invalid_argument("static_update: map definition dimensions mismatch");
  for (int row = 0; row < def.height; ++row)
    for (int col = 0; col < def.width; ++col)
      if (def.occupied({col, row})) working.combine({col, row}, kLethal);
}

// ---------------------------------------------------------------------------
// Stage 2: obstacle marking/clearing against a persistent buffer.

/// Clip point p toward `from` so the segment stays inside the map rectangle.
inline Vec2 clip_segment_end(const Costmap& map, const Vec2& from, const Vec2& p) {
  const Vec2 lo = map.origin();
  // Stay strictly inside the far edges so world_to_cell keeps working.
  const Vec2 hi = map.max_corner() - Vec2{1e-9, 1e-9} * map.resolution();
  double t = 1.0;
  const Vec2 d = p - from;
  auto clip_axis = [&t](double start, double delta, double low, double high) {
    if (delta > 0.0 && start + delta > high) t = std::min(t, (high - start) / delta);
    if (delta < 0.0 && start + delta < low) t = std::min(t, (low - start) / delta);
  };
  clip_axis(from.x, d.x, lo.x, hi.x);
  clip_axis(from.y, d.y, lo.y, hi.y);
  return from + d * std::max(0.0, t);
}

/// Apply one scan to the persistent obstacle buffer (clear along every beam,
/// mark hit endpoints lethal) and max-combine the buffer into the working map.
/// Marks persist across ticks until some later ray sweeps through them.
inline void obstacle_update(const SensorScan& scan, Costmap& buffer, Costmap& working) {
  const Vec2 from = scan.origin.position();
  if (buffer.contains_point(from)) {
    std::vector<CellIndex> marks;
    for (const auto& beam : scan.beams) {
      const double angle = scan.origin.theta + beam.bearing;
      const Vec2 raw_end = from + unit_vector(angle) * beam.range;
      const Vec2 end = clip_segment_end(buffer, from, raw_end);
      const bool end_clipped = (end - raw_end).norm() > 1e-12;
      const auto cells = raycast_cells(buffer, from, end);
      for (const auto& c : cells) buffer.set(c, kFree);
      if (beam.hit && !end_clipped && !cells.empty()) marks.push_back(cells.back());
    }
    for (const auto& c : marks) buffer.set(c, kLethal);
  }
  for (std::size_t i = 0; i < buffer.size(); ++i)
    working.cells()[i] = max_combine(working.cells()[i], buffer.cells()[i]);
}

// ---------------------------------------------------------------------------
// Stage 3: people filter.

/// Erase sensor-made marks of human bodies: every cell whose center lies
/// within intimate_radius + robot_radius of a person is overwritten to FREE.
inline void people_filter_update(const std::vector<PersonState>& persons, double robot_radius,
                                 Costmap& working) {
  const double res = working.resolution();
  for (const auto& person : persons) {
    const double radius = person.profile.intimate_radius + robot_radius;
    const Vec2 p = person.pose.position();
    const int c0 = static_cast<int>(std::floor((p.x - radius - working.origin().x) / res));
    const int c1 = static_cast<int>(std::floor((p.x + radius - working.origin().x) / res));
    const int r0 = static_cast<int>(std::floor((p.y - radius - working.origin().y) / res));
    const int r1 = static_cast<int>(std::floor((p.y + radius - working.origin().y) / res));
    for (int row = std::max(0, r0); row <= std::min(working.height() - 1, r1); ++row)
      for (int col = std::max(0, c0); col <= std::min(working.width() - 1, c1); ++col) {
        const CellIndex c{col, row};
        if (distance(working.cell_center(c), p) <= radius) working.set(c, kFree);
      }
  }
}

// ---------------------------------------------------------------------------
// Stage 4: inflation.

namespace detail {

/// 1D squared distance transform (Felzenszwalb/Huttenlocher lower envelope).
inline void squared_dt_1d(const std::vector<double>& f, int n, std::vector<double>& d,
                          std::vector<int>& v, std::vector<double>& z) {
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]));
    while (s <= z[k]) {
      --k;
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]));
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    d[q] = (q - v[k]) * (double)(q - v[k]) + f[v[k]];
  }
}

/// Exact squared Euclidean distance (in cells) to the nearest lethal cell.
inline std::vector<double> squared_distance_to_lethal(const Costmap& map) {
  const int w = map.width(), h = map.height();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> grid(map.size());
  for (std::size_t i = 0; i < map.size(); ++i)
    grid[i] = map.cells()[i] == kLethal ? 0.0 : inf;

  const int n = std::max(w, h);
  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);
  for (int col = 0; col < w; ++col) {  // along columns
    for (int row = 0; row < h; ++row) f[row] = grid[(std::size_t)row * w + col];
    squared_dt_1d(f, h, d, v, z);
    for (int row = 0; row < h; ++row) grid[(std::size_t)row * w + col] = d[row];
  }
  for (int row = 0; row < h; ++row) {  // along rows
    for (int col = 0; col < w; ++col) f[col] = grid[(std::size_t)row * w + col];
    squared_dt_1d(f, w, d, v, z);
    for (int col = 0; col < w; ++col) grid[(std::size_t)row * w + col] = d[col];
  }
  return grid;
}

}  // namespace detail

/// Cost of a cell at distance d (meters, center to center) from the nearest
/// lethal cell, before max-combining: 253 inside the robot radius, an
/// exponential skirt out to decay_radius, 0 beyond.
inline CellCost inflation_cost_at(double d, double robot_radius, double decay_radius,
                                  double gain = kInflationGain) {
  if (d <= robot_radius) return kInscribed;
  if (d <= decay_radius)
    return static_cast<CellCost>(
        std::lround(kMaxGraded * std::exp(-gain * (d - robot_radius))));
  return kFree;
}

inline void inflation_update(Costmap& working, double robot_radius, double decay_radius,
                             double gain = kInflationGain) {
  if (!(robot_radius < decay_radius))
    throw std::invalid_argument("inflation_update: robot_radius must be < decay_radius");
  const auto d2 = detail::squared_distance_to_lethal(working);
  const double res = working.resolution();
  for (std::size_t i = 0; i < working.size(); ++i) {
    if (!std::isfinite(d2[i])) continue;  // no lethal cell anywhere
    const double d = res * std::sqrt(d2[i]);
    if (d > decay_radius) continue;
    working.cells()[i] = max_combine(working.cells()[i],
                                     inflation_cost_at(d, robot_radius, decay_radius, gain));
  }
}

// ---------------------------------------------------------------------------
// Stage 5: social proxemic stamping.

inline void social_update(const std::vector<PersonState>& persons, bool use_cooperation_zones,
                          Costmap& working) {
  const double res = working.resolution();
  // 2 ln(1/cutoff) = squared reach in units of sigma.
  const double reach_factor = std::sqrt(-2.0 * std::log(kSocialCutoff));
  for (const auto& person : persons) {
    const ActivityProfile& prof = person.profile;
    const double sigma_front =
        prof.orientation_unknown ? prof.sigma_h : effective_sigma_h(prof, person.speed());
    const double sigma_max = std::max({sigma_front, prof.sigma_s, prof.sigma_r});
    const double reach = std::max(sigma_max * reach_factor, prof.intimate_radius) + 2.0 * res;
    const Vec2 p = person.pose.position();
    const int c0 = static_cast<int>(std::floor((p.x - reach - working.origin().x) / res));
    const int c1 = static_cast<int>(std::floor((p.x + reach - working.origin().x) / res));
    const int r0 = static_cast<int>(std::floor((p.y - reach - working.origin().y) / res));
    const int r1 = static_cast<int>(std::floor((p.y + reach - working.origin().y) / res));
    for (int row = std::max(0, r0); row <= std::min(working.height() - 1, r1); ++row)
      for (int col = std::max(0, c0); col <= std::min(working.width() - 1, c1); ++col) {
        const CellIndex c{col, row};
        const Vec2 q = working.cell_center(c);
        if (use_cooperation_zones && in_cooperation_zone(person, q)) continue;
        if (distance(q, p) <= prof.intimate_radius) {
          working.set(c, kLethal);
          continue;
        }
        const double g = asymmetric_gaussian(person, q);
        if (g < kSocialCutoff) continue;
        working.combine(c, static_cast<CellCost>(std::lround(kMaxGraded * g)));
      }
  }
}

// ---------------------------------------------------------------------------
// The pipeline.

struct PipelineConfig {
  bool people_filter_enabled = true;
  bool social_enabled = true;
  bool cooperation_zones_enabled = true;
  double robot_radius = kDefaultRobotRadius;
  double inflation_decay_radius = kInflationDecayRadius;
  double inflation_gain = kInflationGain;

  static PipelineConfig for_mode(NavMode mode, double robot_radius = kDefaultRobotRadius) {
    PipelineConfig cfg;
    cfg.robot_radius = robot_radius;
    switch (mode) {
      case NavMode::kSocial:
        break;
      case NavMode::kBaseline:
        cfg.people_filter_enabled = false;
        cfg.social_enabled = false;
        break;
      case NavMode::kSocialNoCoop:
        cfg.cooperation_zones_enabled = false;
        break;
    }
    return cfg;
  }
};

/// Fixed stage order: static, obstacle, people filter, inflation, social.
/// The working map is rebuilt from FREE every tick; only the obstacle buffer
/// persists so out-of-view marks survive until a later ray clears them.
class LayerPipeline {
 public:
  LayerPipeline(int width, int height, double resolution, Vec2 origin, PipelineConfig config)
      : config_(config),
        working_(width, height, resolution, origin),
        obstacle_buffer_(width, height, resolution, origin) {}

  const PipelineConfig& config() const { return config_; }
  Costmap& obstacle_buffer() { return obstacle_buffer_; }

  const Costmap& run(const OccupancyGrid& static_map, const SensorScan* scan,
                     const std::vector<PersonState>& persons) {
    working_.fill(kFree);
    static_update(static_map, working_);
    if (scan) obstacle_update(*scan, obstacle_buffer_, working_);
    if (config_.people_filter_enabled)
      people_filter_update(persons, config_.robot_radius, working_);
    inflation_update(working_, config_.robot_radius, config_.inflation_decay_radius,
                     config_.inflation_gain);
    if (config_.social_enabled)
      social_update(persons, config_.cooperation_zones_enabled, working_);
    return working_;
  }

  const Costmap& master() const { return working_; }

 private:
  PipelineConfig config_;
  Costmap working_;
  Costmap obstacle_buffer_;
};

}  // namespace proxsim

#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "proxsim/geometry.hpp"

namespace proxsim {

// Cost scale: 0 free, 1..252 graded penalty, 253 inscribed, 254 lethal.
using CellCost = std::uint8_t;
inline constexpr CellCost kFree = 0;
inline constexpr CellCost kMaxGraded = 252;
inline constexpr CellCost kInscribed = 253;
inline constexpr CellCost kLethal = 254;

inline CellCost max_combine(CellCost dst, CellCost v) { return dst > v ? dst : v; }

struct CellIndex {
  int col = 0;
  int row = 0;
  bool operator==(const CellIndex& o) const { return col == o.col && row == o.row; }
};

/// Uniform 2D grid of cell costs. Row-major, row 0 at the origin (lower-left)
/// corner; `origin` is the world position of that corner.
class Costmap {
 public:
  Costmap() = default;
  Costmap(int width, int height, double resolution, Vec2 origin, CellCost fill = kFree)
      : width_(width), height_(height), resolution_(resolution), origin_(origin),
        cells_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
    if (width <= 0 || height <= 0 || resolution <= 0.0)
      throw std::invalid_argument("Costmap: width, height and resolution must be positive");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  const Vec2& origin() const { return origin_; }
  std::size_t size() const { return cells_.size(); }

  bool in_bounds(const CellIndex& c) const {
    return c.col >= 0 && c.col < width_ && c.row >= 0 && c.row < height_;
  }

  CellCost at(const CellIndex& c) const {
    assert(in_bounds(c));
    return cells_[index_of(c)];
  }
  void set(const CellIndex& c, CellCost v) {
    assert(in_bounds(c));
    cells_[index_of(c)] = v;
  }
  void combine(const CellIndex& c, CellCost v) {
    CellCost& dst = cells_[index_of(c)];
    dst = max_combine(dst, v);
  }

  void fill(CellCost v) { std::fill(cells_.begin(), cells_.end(), v); }

  const std::vector<CellCost>& cells() const { return cells_; }
  std::vector<CellCost>& cells() { return cells_; }

  std::size_t index_of(const CellIndex& c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) + c.col;
  }

  std::optional<CellIndex> world_to_cell(const Vec2& p) const {
    const CellIndex c{static_cast<int>(std::floor((p.x - origin_.x) / resolution_)),
                      static_cast<int>(std::floor((p.y - origin_.y) / resolution_))};
    if (!in_bounds(c)) return std::nullopt;
    return c;
  }

  Vec2 cell_center(const CellIndex& c) const {
    assert(in_bounds(c));
    return {origin_.x + (c.col + 0.5) * resolution_,
            origin_.y + (c.row + 0.5) * resolution_};
  }

  /// World rectangle covered by the grid: [origin, origin + extent).
  Vec2 max_corner() const {
    return {origin_.x + width_ * resolution_, origin_.y + height_ * resolution_};
  }

  bool contains_point(const Vec2& p) const {
    const Vec2 hi = max_corner();
    return p.x >= origin_.x && p.y >= origin_.y && p.x < hi.x && p.y < hi.y;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 0.0;
  Vec2 origin_{};
  std::vector<CellCost> cells_;
};

/// Grid traversal of the segment [from, to], inclusive of both endpoint cells.
/// Consecutive cells are edge- or corner-adjacent and no cell repeats.
/// Throws std::out_of_range if either endpoint lies outside the map.
inline std::vector<CellIndex> raycast_cells(const Costmap& map, const Vec2& from, const Vec2& to) {
  const auto start = map.world_to_cell(from);
  const auto goal = map.world_to_cell(to);
  if (!start || !goal) throw std::out_of_range("raycast_cells: endpoint outside the map");

  std::vector<CellIndex> out;
  CellIndex cur = *start;
  out.push_back(cur);
  if (cur == *goal) return out;

  const Vec2 d = to - from;
  const double res = map.resolution();
  const int step_x = d.x > 0 ? 1 : (d.x < 0 ? -1 : 0);
  const int step_y = d.y > 0 ? 1 : (d.y < 0 ? -1 : 0);

  // Parametric distance along the ray to the next vertical/horizontal grid line.
  auto boundary_t = [&](int cell, double origin_c, double from_c, double d_c, int step) {
    if (step == 0) return std::numeric_limits<double>::infinity();
    const double edge = origin_c + (cell + (step > 0 ? 1 : 0)) * res;
    return (edge - from_c) / d_c;
  };

  double t_max_x = boundary_t(cur.col, map.origin().x, from.x, d.x, step_x);
  double t_max_y = boundary_t(cur.row, map.origin().y, from.y, d.y, step_y);
  const double t_delta_x = step_x != 0 ? res / std::abs(d.x) : std::numeric_limits<double>::infinity();
  const double t_delta_y = step_y != 0 ? res / std::abs(d.y) : std::numeric_limits<double>::infinity();

  const std::size_t max_steps = static_cast<std::size_t>(map.width() + map.height() + 2);
  for (std::size_t i = 0; i < 2 * max_steps && !(cur == *goal); ++i) {
    if (t_max_x < t_max_y) {
      cur.col += step_x;
      t_max_x += t_delta_x;
    } else if (t_max_y < t_max_x) {
      cur.row += step_y;
      t_max_y += t_delta_y;
    } else {
      // Exact corner crossing: step both axes at once (corner-adjacent hop).
      cur.col += step_x;
      cur.row += step_y;
      t_max_x += t_delta_x;
      t_max_y += t_delta_y;
    }
    if (!map.in_bounds(cur)) break;
    out.push_back(cur);
  }
  return out;
}

/// Binary occupancy grid sharing the costmap geometry. occ[i] != 0 means occupied.
struct OccupancyGrid {
  int width = 0;
  int height = 0;
  double resolution = 0.05;
  Vec2 origin{};
  std::vector<std::uint8_t> occ;

  bool occupied(const CellIndex& c) const {
    return occ[static_cast<std::size_t>(c.row) * width + c.col] != 0;
  }
  bool in_bounds(const CellIndex& c) const {
    return c.col >= 0 && c.col < width && c.row >= 0 && c.row < height;
  }
  std::optional<CellIndex> world_to_cell(const Vec2& p) const {
    const CellIndex c{static_cast<int>(std::floor((p.x - origin.x) / resolution)),
                      static_cast<int>(std::floor((p.y - origin.y) / resolution))};
    if (!in_bounds(c)) return std::nullopt;
    return c;
  }
  Vec2 max_corner() const {
    return {origin.x + width * resolution, origin.y + height * resolution};
  }

  /// Rows are listed top-down ('#' occupied, '.' free); row 0 of the list is
  /// the northmost row of the map.
  static OccupancyGrid from_ascii_rows(const std::vector<std::string>& rows, double resolution,
                                       Vec2 origin = {}) {
    if (rows.empty() || rows.front().empty())
      throw std::invalid_argument("from_ascii_rows: empty map");
    OccupancyGrid g;
    g.height = static_cast<int>(rows.size());
    g.width = static_cast<int>(rows.front().size());
    g.resolution = resolution;
    g.origin = origin;
    g.occ.assign(static_cast<std::size_t>(g.width) * g.height, 0);
    for (int r = 0; r < g.height; ++r) {
      const std::string& line = rows[r];
      if (static_cast<int>(line.size()) != g.width)
        throw std::invalid_argument("from_ascii_rows: ragged row " + std::to_string(r));
      const int grid_row = g.height - 1 - r;
      for (int c = 0; c < g.width; ++c) {
        if (line[c] == '#')
          g.occ[static_cast<std::size_t>(grid_row) * g.width + c] = 1;
        else if (line[c] != '.')
          throw std::invalid_argument("from_ascii_rows: invalid char in row " + std::to_string(r));
      }
    }
    return g;
  }
};

/// Write the map as binary PGM (P5), one byte per cell, raw cost values,
/// top map row first. Throws std::runtime_error on I/O failure.
inline void write_pgm(const Costmap& map, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
  out << "P5\n" << map.width() << " " << map.height() << "\n255\n";
  for (int row = map.height() - 1; row >= 0; --row) {
    const char* line = reinterpret_cast<const char*>(map.cells().data()) +
                       static_cast<std::size_t>(row) * map.width();
    out.write(line, map.width());
  }
  if (!out) throw std::runtime_error("write_pgm: write failed for " + path);
}

/// Read a binary PGM (P5) into an occupancy grid: pixel <= threshold is occupied
/// (dark pixels are obstacles, the usual map-server convention).
inline OccupancyGrid read_pgm_occupancy(const std::string& path, double resolution,
                                        int occupied_threshold, Vec2 origin = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_pgm_occupancy: cannot open " + path);
  std::string magic;
  in >> magic;
  if (magic != "P5") throw std::runtime_error("read_pgm_occupancy: not a P5 file: " + path);
  auto next_int = [&in, &path]() {
    // Skip whitespace and '#' comment lines between header tokens.
    int ch = in.peek();
    while (ch == ' ' || ch == '\n' || ch == '\r' || ch == '\t' || ch == '#') {
      if (ch == '#') {
        std::string comment;
        std::getline(in, comment);
      } else {
        in.get();
      }
      ch = in.peek();
    }
    int v = 0;
    if (!(in >> v)) throw std::runtime_error("read_pgm_occupancy: bad header in " + path);
    return v;
  };
  const int w = next_int();
  const int h = next_int();
  const int maxval = next_int();
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255)
    throw std::runtime_error("read_pgm_occupancy: bad dimensions in " + path);
  in.get();  // single whitespace after maxval
  std::vector<std::uint8_t> raw(static_cast<std::size_t>(w) * h);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!in) throw std::runtime_error("read_pgm_occupancy: truncated pixel data in " + path);

  OccupancyGrid g;
  g.width = w;
  g.height = h;
  g.resolution = resolution;
  g.origin = origin;
  g.occ.assign(raw.size(), 0);
  for (int row = 0; row < h; ++row) {
    const int grid_row = h - 1 - row;  // PGM row 0 is the top of the map
    for (int col = 0; col < w; ++col)
      if (raw[static_cast<std::size_t>(row) * w + col] <= occupied_threshold)
        g.occ[static_cast<std::size_t>(grid_row) * w + col] = 1;
  }
  return g;
}

}  // namespace proxsim

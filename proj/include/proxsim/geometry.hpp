#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace proxsim {

inline constexpr double kPi = std::numbers::pi;

/// Wrap an angle into (-pi, pi].
inline double normalize_angle(double theta) {
  double a = std::fmod(theta + kPi, 2.0 * kPi);
  if (a <= 0.0) a += 2.0 * kPi;
  return a - kPi;
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm_sq() const { return x * x + y * y; }
  double norm() const { return std::hypot(x, y); }
  double angle() const { return std::atan2(y, x); }

  Vec2 rotated(double theta) const {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c * x - s * y, s * x + c * y};
  }
};

inline Vec2 unit_vector(double theta) { return {std::cos(theta), std::sin(theta)}; }

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // always kept in (-pi, pi]

  Vec2 position() const { return {x, y}; }

  static Pose2D make(double x, double y, double theta) {
    return {x, y, normalize_angle(theta)};
  }
};

/// Distance from point p to segment [a, b].
inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len_sq = ab.norm_sq();
  if (len_sq == 0.0) return distance(p, a);
  double t = (p - a).dot(ab) / len_sq;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + ab * t);
}

}  // namespace proxsim

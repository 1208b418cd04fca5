#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "proxsim/geometry.hpp"

namespace proxsim {

inline constexpr double kDefaultIntimateRadius = 0.4;
inline constexpr double kDefaultPersonalRadius = 1.2;

// Velocity adaptation: the front variance grows to cover the distance a
// walking person sweeps in this many seconds.
inline constexpr double kSigmaLookaheadSeconds = 1.5;

inline constexpr double kDefaultWedgeHalfWidth = kPi / 6.0;

/// Free wedge carved out of the personal zone, anchored to the person frame.
struct CooperationZoneSpec {
  double bearing = 0.0;      // wedge center, relative to the person heading
  double half_width = kDefaultWedgeHalfWidth;  // in (0, pi/2]
  double inner_radius = kDefaultIntimateRadius;  // equals the profile's intimate radius
  double outer_radius = kDefaultPersonalRadius;  // <= the profile's personal radius
};

/// Shape of one activity's proxemic field: the three Gaussian scales, the
/// heading offset, zone radii, and any cooperation wedges (at most two).
struct ActivityProfile {
  std::string name;
  double sigma_h = 0.8;  // ahead of the person
  double sigma_s = 1.0;  // left/right
  double sigma_r = 1.0;  // behind
  double theta_offset = 0.0;
  bool orientation_unknown = false;  // evaluate the field ignoring heading
  double intimate_radius = kDefaultIntimateRadius;
  double personal_radius = kDefaultPersonalRadius;
  std::vector<CooperationZoneSpec> cooperation_zones;

  bool valid() const {
    if (!(sigma_h > 0.0 && sigma_s > 0.0 && sigma_r > 0.0)) return false;
    if (!(intimate_radius < personal_radius)) return false;
    if (cooperation_zones.size() > 2) return false;
    for (const auto& z : cooperation_zones) {
      if (!(z.half_width > 0.0 && z.half_width <= kPi / 2.0)) return false;
      if (z.inner_radius != intimate_radius || z.outer_radius > personal_radius) return false;
    }
    return true;
  }
};

struct PersonState {
  std::string id;
  Pose2D pose;
  Vec2 velocity;  // estimated, m/s
  std::string activity;
  ActivityProfile profile;

  double speed() const { return velocity.norm(); }
};

/// Front variance after velocity adaptation: never below the profile's base.
inline double effective_sigma_h(const ActivityProfile& profile, double speed) {
  return std::max(profile.sigma_h, speed * kSigmaLookaheadSeconds);
}

/// Asymmetric Gaussian field value at q, in (0, 1]; 1 exactly at the person.
/// The front/rear branch is selected by the sign of the along-heading
/// component; sigma_h is velocity-adapted. Profiles flagged
/// orientation_unknown are evaluated with heading 0 and no velocity
/// adaptation (their equal variances make the field isotropic).
inline double asymmetric_gaussian(const PersonState& person, const Vec2& q) {
  const ActivityProfile& prof = person.profile;
  const double dx = q.x - person.pose.x;
  const double dy = q.y - person.pose.y;
  double theta, sigma_front;
  if (prof.orientation_unknown) {
    theta = 0.0;
    sigma_front = prof.sigma_h;
  } else {
    theta = normalize_angle(person.pose.theta + prof.theta_offset);
    sigma_front = effective_sigma_h(prof, person.speed());
  }
  const double along = dx * std::cos(theta) + dy * std::sin(theta);
  const double sigma = along >= 0.0 ? sigma_front : prof.sigma_r;

  const double c = std::cos(theta), s = std::sin(theta);
  const double two_sig2 = 2.0 * sigma * sigma;
  const double two_sigs2 = 2.0 * prof.sigma_s * prof.sigma_s;
  const double a = c * c / two_sig2 + s * s / two_sigs2;
  const double b = std::sin(2.0 * theta) / (2.0 * two_sig2) -
                   std::sin(2.0 * theta) / (2.0 * two_sigs2);
  const double cc = s * s / two_sig2 + c * c / two_sigs2;
  return std::exp(-(a * dx * dx + 2.0 * b * dx * dy + cc * dy * dy));
}

/// True iff q falls inside one of the person's cooperation wedges:
/// strictly outside the intimate disc, within the wedge's outer radius,
/// and within half_width of the wedge bearing in the person frame.
inline bool in_cooperation_zone(const PersonState& person, const Vec2& q) {
  const Vec2 d = q - person.pose.position();
  const double dist = d.norm();
  for (const auto& z : person.profile.cooperation_zones) {
    if (dist <= z.inner_radius || dist > z.outer_radius) continue;
    const double bearing = normalize_angle(d.angle() - person.pose.theta);
    if (std::abs(normalize_angle(bearing - z.bearing)) <= z.half_width) return true;
  }
  return false;
}

/// Compiled-in activity shapes. cooking/running/standing/bathroom carry the
/// published variances; hri_approach and escort reuse the standing shape and
/// add the cooperation wedges that the approach and escort tasks activate.
inline const std::map<std::string, ActivityProfile>& builtin_profiles() {
  static const std::map<std::string, ActivityProfile> profiles = [] {
    std::map<std::string, ActivityProfile> m;
    auto add = [&m](ActivityProfile p) { m[p.name] = std::move(p); };

    add({.name = "cooking", .sigma_h = 0.5, .sigma_s = 1.5, .sigma_r = 0.5});
    add({.name = "running", .sigma_h = 2.0, .sigma_s = 0.7, .sigma_r = 0.7});
    add({.name = "standing", .sigma_h = 0.8, .sigma_s = 1.0, .sigma_r = 1.0});
    add({.name = "bathroom",
         .sigma_h = 2.5,
         .sigma_s = 2.5,
         .sigma_r = 2.5,
         .orientation_unknown = true});

    ActivityProfile approach{.name = "hri_approach", .sigma_h = 0.8, .sigma_s = 1.0, .sigma_r = 1.0};
    approach.cooperation_zones.push_back({.bearing = 0.0});
    add(approach);

    ActivityProfile escort{.name = "escort", .sigma_h = 0.8, .sigma_s = 1.0, .sigma_r = 1.0};
    escort.cooperation_zones.push_back({.bearing = -kPi / 2.0});
    escort.cooperation_zones.push_back({.bearing = kPi / 2.0});
    add(escort);
    return m;
  }();
  return profiles;
}

}  // namespace proxsim

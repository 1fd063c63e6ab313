#pragma once

#include "deltasea/geometry.hpp"

#include <numbers>
#include <vector>

namespace deltasea {

enum class Phase { Approach, Engage, Execute, Retract };

const char* phase_name(Phase phase);

struct TrajectorySample {
  double t = 0.0;  // s
  Vec3 position = Vec3::Zero();
  Phase phase = Phase::Approach;
};

enum class PrimitiveKind { Pressing, Tapping, Rolling, Pushing };

// One massage motion. hold_force is metadata for the controller's force loop;
// the generator emits positions only.
struct MassagePrimitive {
  PrimitiveKind kind = PrimitiveKind::Pressing;
  Vec3 target{0.0, 0.0, -105.0};  // mm
  double hold_force = 5.0;        // N
  double duration = 5.0;          // s, execute phase (derived for pushing)

  // shared shape parameters
  double approach_speed = 20.0;  // mm/s
  double hover_height = 10.0;    // mm above the target
  double settle_time = 0.5;      // s hovering before the engage descent

  // tapping
  double pre_tap_height = 10.0;  // mm
  double descent_speed = 60.0;   // mm/s
  double tap_dwell = 0.1;        // s at the top/bottom of each tap

  // rolling
  double circle_radius = 3.0;                   // mm
  double angular_rate = 2.0 * std::numbers::pi;  // rad/s

  // pushing
  Vec3 end_point{0.0, 0.0, -105.0};  // mm
  double push_speed = 5.0;           // mm/s

  void validate() const;

  // Largest commanded speed of any segment; bounds per-coordinate sample
  // increments by max_speed() * dt.
  double max_speed() const;
};

// Setpoint stream for one primitive, sampled on the dt grid from t = 0 to the
// end of the retract phase inclusive. Samples are continuous by construction.
std::vector<TrajectorySample> generate(const MassagePrimitive& primitive,
                                       double dt);

// Several primitives in sequence, glued by straight transit moves at the
// approach speed of the upcoming primitive.
std::vector<TrajectorySample> generate(
    const std::vector<MassagePrimitive>& primitives, double dt);

// Raw waypoint playback: straight lines at constant speed, phase Execute.
std::vector<TrajectorySample> from_waypoints(const std::vector<Vec3>& points,
                                             double speed, double dt);

}  // namespace deltasea

#include "deltasea/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace deltasea {

namespace {

struct Segment {
  double duration;
  Phase phase;
  std::function<Vec3(double)> eval;  // local time in [0, duration]
};

Segment hold(const Vec3& p, double duration, Phase phase) {
  return {duration, phase, [p](double) { return p; }};
}

Segment line(const Vec3& from, const Vec3& to, double speed, Phase phase) {
  const double length = (to - from).norm();
  const double duration = length / speed;
  return {duration, phase, [from, to, duration](double t) {
            return Vec3(from + (t / duration) * (to - from));
          }};
}

Segment circle(const Vec3& center, double radius, double omega,
               double duration, Phase phase) {
  return {duration, phase, [center, radius, omega](double t) {
            return Vec3(center.x() + radius * std::cos(omega * t),
                        center.y() + radius * std::sin(omega * t),
                        center.z());
          }};
}

void append_primitive(std::vector<Segment>& segs, const MassagePrimitive& m) {
  const Vec3 up(0.0, 0.0, 1.0);
  switch (m.kind) {
    case PrimitiveKind::Pressing: {
      const Vec3 top = m.target + m.hover_height * up;
      segs.push_back(hold(top, m.settle_time, Phase::Approach));
      segs.push_back(line(top, m.target, m.approach_speed, Phase::Engage));
      segs.push_back(hold(m.target, m.duration, Phase::Execute));
      segs.push_back(line(m.target, top, m.approach_speed, Phase::Retract));
      break;
    }
    case PrimitiveKind::Tapping: {
      const Vec3 top = m.target + m.pre_tap_height * up;
      segs.push_back(hold(top, m.settle_time, Phase::Approach));
      const double cycle = 2.0 * m.pre_tap_height / m.descent_speed +
                           2.0 * m.tap_dwell;
      const int taps = std::max(1, static_cast<int>(m.duration / cycle));
      for (int i = 0; i < taps; ++i) {
        segs.push_back(line(top, m.target, m.descent_speed, Phase::Execute));
        segs.push_back(hold(m.target, m.tap_dwell, Phase::Execute));
        segs.push_back(line(m.target, top, m.descent_speed, Phase::Execute));
        segs.push_back(hold(top, m.tap_dwell, Phase::Execute));
      }
      segs.push_back(hold(top, m.settle_time, Phase::Retract));
      break;
    }
    case PrimitiveKind::Rolling: {
      const Vec3 ring_start = m.target + Vec3(m.circle_radius, 0.0, 0.0);
      const Vec3 top = ring_start + m.hover_height * up;
      segs.push_back(hold(top, m.settle_time, Phase::Approach));
      segs.push_back(line(top, ring_start, m.approach_speed, Phase::Engage));
      Vec3 center = m.target;
      segs.push_back(circle(center, m.circle_radius, m.angular_rate,
                            m.duration, Phase::Execute));
      const double end_angle = m.angular_rate * m.duration;
      const Vec3 ring_end(center.x() + m.circle_radius * std::cos(end_angle),
                          center.y() + m.circle_radius * std::sin(end_angle),
                          center.z());
      segs.push_back(
          line(ring_end, ring_end + m.hover_height * up, m.approach_speed,
               Phase::Retract));
      break;
    }
    case PrimitiveKind::Pushing: {
      const Vec3 top = m.target + m.hover_height * up;
      segs.push_back(hold(top, m.settle_time, Phase::Approach));
      segs.push_back(line(top, m.target, m.approach_speed, Phase::Engage));
      segs.push_back(line(m.target, m.end_point, m.push_speed,
                          Phase::Execute));
      segs.push_back(line(m.end_point, m.end_point + m.hover_height * up,
                          m.approach_speed, Phase::Retract));
      break;
    }
  }
}

std::vector<TrajectorySample> sample_segments(const std::vector<Segment>& segs,
                                              double dt) {
  double total = 0.0;
  for (const auto& s : segs) total += s.duration;
  const int n = static_cast<int>(std::floor(total / dt + 1e-9));

  std::vector<TrajectorySample> out;
  out.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double t = k * dt;
    double offset = 0.0;
    const Segment* active = &segs.back();
    double local = segs.back().duration;
    for (const auto& s : segs) {
      if (t < offset + s.duration || &s == &segs.back()) {
        active = &s;
        local = std::min(t - offset, s.duration);
        break;
      }
      offset += s.duration;
    }
    out.push_back({t, active->eval(local), active->phase});
  }
  return out;
}

}  // namespace

const char* phase_name(Phase phase) {
  switch (phase) {
    case Phase::Approach: return "approach";
    case Phase::Engage: return "engage";
    case Phase::Execute: return "execute";
    case Phase::Retract: return "retract";
  }
  return "?";
}

void MassagePrimitive::validate() const {
  if (kind != PrimitiveKind::Pushing && !(duration > 0.0))
    throw std::invalid_argument("primitive: duration must be positive");
  if (!(approach_speed > 0.0))
    throw std::invalid_argument("primitive: approach speed must be positive");
  if (hover_height < 0.0)
    throw std::invalid_argument("primitive: hover height must be >= 0");
  if (settle_time < 0.0)
    throw std::invalid_argument("primitive: settle time must be >= 0");
  switch (kind) {
    case PrimitiveKind::Tapping:
      if (!(pre_tap_height > 0.0) || !(descent_speed > 0.0))
        throw std::invalid_argument(
            "primitive: tapping needs positive pre-tap height and descent "
            "speed");
      break;
    case PrimitiveKind::Rolling:
      if (!(circle_radius > 0.0) || !(angular_rate > 0.0))
        throw std::invalid_argument(
            "primitive: rolling needs positive radius and angular rate");
      break;
    case PrimitiveKind::Pushing:
      if (!(push_speed > 0.0))
        throw std::invalid_argument(
            "primitive: pushing needs a positive push speed");
      break;
    case PrimitiveKind::Pressing:
      break;
  }
}

double MassagePrimitive::max_speed() const {
  switch (kind) {
    case PrimitiveKind::Pressing: return approach_speed;
    case PrimitiveKind::Tapping: return std::max(approach_speed, descent_speed);
    case PrimitiveKind::Rolling:
      return std::max(approach_speed, circle_radius * angular_rate);
    case PrimitiveKind::Pushing: return std::max(approach_speed, push_speed);
  }
  return approach_speed;
}

std::vector<TrajectorySample> generate(const MassagePrimitive& primitive,
                                       double dt) {
  primitive.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("trajectory: dt must be positive");
  std::vector<Segment> segs;
  append_primitive(segs, primitive);
  return sample_segments(segs, dt);
}

std::vector<TrajectorySample> generate(
    const std::vector<MassagePrimitive>& primitives, double dt) {
  if (primitives.empty())
    throw std::invalid_argument("trajectory: no primitives given");
  if (!(dt > 0.0)) throw std::invalid_argument("trajectory: dt must be positive");
  std::vector<Segment> segs;
  for (size_t i = 0; i < primitives.size(); ++i) {
    primitives[i].validate();
    if (i > 0) {
      // Straight transit from wherever the previous primitive retracted to
      // the next primitive's first sample.
      std::vector<Segment> next;
      append_primitive(next, primitives[i]);
      const Vec3 from = segs.back().eval(segs.back().duration);
      const Vec3 to = next.front().eval(0.0);
      if ((to - from).norm() > 0.0) {
        segs.push_back(
            line(from, to, primitives[i].approach_speed, Phase::Approach));
      }
      for (auto& s : next) segs.push_back(std::move(s));
    } else {
      append_primitive(segs, primitives[i]);
    }
  }
  return sample_segments(segs, dt);
}

std::vector<TrajectorySample> from_waypoints(const std::vector<Vec3>& points,
                                             double speed, double dt) {
  if (points.size() < 2)
    throw std::invalid_argument("trajectory: need at least two waypoints");
  if (!(speed > 0.0))
    throw std::invalid_argument("trajectory: waypoint speed must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("trajectory: dt must be positive");
  std::vector<Segment> segs;
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    if ((points[i + 1] - points[i]).norm() == 0.0) continue;
    segs.push_back(line(points[i], points[i + 1], speed, Phase::Execute));
  }
  if (segs.empty())
    throw std::invalid_argument("trajectory: waypoints are all identical");
  return sample_segments(segs, dt);
}

}  // namespace deltasea

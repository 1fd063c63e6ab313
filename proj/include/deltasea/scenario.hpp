#pragma once

#include "deltasea/contact.hpp"
#include "deltasea/control.hpp"
#include "deltasea/errors.hpp"
#include "deltasea/geometry.hpp"
#include "deltasea/sea.hpp"
#include "deltasea/trajectory.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace deltasea {

enum class ControlScheme { Hybrid, PositionOnly };

struct SimConfig {
  double dt = 1e-3;          // s
  double duration = -1.0;    // s; < 0 means "length of the trajectory"
  double motor_rate_limit = 10.0;   // rad/s
  double equilibrium_tol = 1e-6;    // N*mm, per-chain torque balance
  int max_iterations = 50;
  std::uint64_t seed = 0;    // test scaffolding only; never used by the sim
  bool encoder_quantization = false;
  int encoder_counts = 65536;       // per revolution, both encoders
  double force_quantize_step = 0.0;  // N, scale resolution; 0 = off
  double tool_weight = 0.0;  // N, constant downward load on the platform

  void validate() const;
};

// Everything one simulation run needs; the unit of work for the CLI.
struct ScenarioConfig {
  RobotGeometry geometry;
  SeaJointParams sea;
  ElasticPlane plane;
  HybridControllerConfig controller;
  ControlScheme scheme = ControlScheme::Hybrid;
  SimConfig sim;

  std::vector<MassagePrimitive> primitives;
  std::vector<Vec3> waypoints;   // alternative to primitives
  double waypoint_speed = 20.0;  // mm/s

  // Shared trajectory shape parameters applied to every primitive.
  double approach_speed = 20.0;  // mm/s
  double hover_height = 10.0;    // mm
  double settle_time = 0.5;      // s

  std::vector<TrajectorySample> build_trajectory() const;

  // Field-level invariants only (no reachability); throws ConfigError or
  // std::invalid_argument naming the violated constraint.
  void validate() const;
};

// Parse the flat sectioned key = value format. Unknown sections or keys are
// rejected with the key path and line number.
ScenarioConfig parse_scenario(std::istream& in, const std::string& name);
ScenarioConfig load_scenario(const std::string& path);

// Full check: field invariants plus IPK reachability of every trajectory
// sample (and of every raw waypoint, reported by index).
void validate_scenario(const ScenarioConfig& cfg);

}  // namespace deltasea

#pragma once

#include "deltasea/scenario.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace deltasea {

// Quasi-static plant: motors are ideal rate-limited velocity sources; the
// load side sits at the pose where the spring torques balance the contact
// (and tool weight) load every tick.
struct PlantState {
  std::array<double, 3> motor_angle{};  // theta_m, rad
  std::array<double, 3> load_angle{};   // theta_l, rad
  Vec3 position = Vec3::Zero();         // mm, FPK of load_angle
  Vec3 contact = Vec3::Zero();          // N, contact force on the robot
  double time = 0.0;                    // s
};

struct PlantStepInfo {
  bool converged = true;
  int iterations = 0;
  double residual = 0.0;  // N*mm, max per-chain torque imbalance
};

// Relaxed springs (theta_m = N * theta_l) at pose p0.
PlantState make_plant_state(const RobotGeometry& g, const SeaJointParams& sea,
                            const ElasticPlane& plane, const Vec3& p0);

// Advance one tick: integrate the motors, then solve the load equilibrium by
// damped Newton iteration warm-started from the previous load angles. On a
// failed solve the load side keeps its previous values and converged=false.
PlantStepInfo plant_step(const RobotGeometry& g, const SeaJointParams& sea,
                         const ElasticPlane& plane, const SimConfig& sim,
                         PlantState& state,
                         const std::array<double, 3>& motor_velocity);

struct TraceRecord {
  double t = 0.0;
  Vec3 p_ref = Vec3::Zero();
  double dpz = 0.0;
  Vec3 p = Vec3::Zero();
  Vec3 f_est = Vec3::Zero();
  Vec3 f_true = Vec3::Zero();
  std::array<double, 3> theta_m{};
  std::array<double, 3> theta_l{};
  ChainTorques tau{};  // N*mm (written to CSV as N*m)
  ControllerMode mode = ControllerMode::PositionOnly;
};

struct Metrics {
  int ticks = 0;
  double duration = 0.0;
  double force_ref = 0.0;
  std::optional<double> trigger_time;
  std::optional<double> settle_time;  // entry into the +-5% band, staying in
  std::optional<double> mean_abs_force_error_after_settle;
  std::optional<double> force_rmse_after_trigger;
  double steady_abs_force_error = 0.0;  // mean |Fz - Fref|, steady window
  double steady_window_start = 0.0;
  double steady_window_end = 0.0;
  double pos_rmse_x = 0.0;
  double pos_rmse_y = 0.0;
  double max_abs_dpz = 0.0;
  double final_force_z = 0.0;
  int equilibrium_failures = 0;
  std::optional<int> first_failure_tick;
  int unreachable_ticks = 0;
};

struct ScenarioResult {
  std::vector<TraceRecord> trace;
  Metrics metrics;
};

// Closed loop: trajectory -> controller -> plant at fixed dt. Deterministic;
// identical configs give identical results.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

// Exact CSV schema required of traces (one header row, then one row per tick,
// shortest round-trip number formatting).
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);
void write_metrics(std::ostream& out, const Metrics& m);

}  // namespace deltasea

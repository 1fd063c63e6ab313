#pragma once

#include "deltasea/geometry.hpp"
#include "deltasea/sea.hpp"

#include <array>

namespace deltasea {

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double integral_limit = 1.0;  // clamp on the accumulated integral
  double output_limit = 1.0;    // clamp on the output

  void validate() const;
};

struct PidState {
  double integral = 0.0;
  double prev_error = 0.0;
  bool has_prev = false;

  void reset() { *this = PidState{}; }
};

// Discrete PID with clamped integrator and derivative on error. Deterministic;
// no filtering on the derivative term.
double pid_step(const PidGains& gains, PidState& state, double error,
                double dt);

enum class ControllerMode { PositionOnly, ForceActive };

// Fig.-3-style two-loop architecture: an outer force loop shifts the z
// reference by dpz, an inner per-chain loop turns motor-angle error into
// motor velocity commands.
struct HybridControllerConfig {
  double force_ref = 5.0;          // F_z-ref, N
  double trigger_threshold = 0.6;  // N, force-loop activation
  bool latch = true;               // once triggered, stay in ForceActive
  double release_threshold = 0.3;  // N, used only when latch == false
  bool force_loop_enabled = true;  // false: pure position control
  PidGains force_gains{0.4, 2.0, 0.0, 5.0, 10.0};      // mm/N, mm/(N*s)
  PidGains position_gains{40.0, 0.0, 0.0, 1.0, 10.0};  // 1/s on motor angle
  double dpz_limit = 10.0;  // mm, saturation of the z offset
  double dt = 1e-3;         // s

  void validate() const;
};

struct ControllerState {
  ControllerMode mode = ControllerMode::PositionOnly;
  double dpz = 0.0;  // mm, force-loop z offset added to the reference
  PidState force_pid;
  std::array<PidState, 3> position_pid;
  JointAngles last_target{};
  bool has_last_target = false;
  std::array<double, 3> last_command{};
};

struct EstimatedEEState {
  Vec3 position = Vec3::Zero();
  Vec3 force = Vec3::Zero();
};

struct ControlCommand {
  std::array<double, 3> motor_velocity{};  // rad/s
  bool setpoint_unreachable = false;
  bool trigger_event = false;
};

// Encoder-only state estimation: FPK on the load angles, then the static
// force map on the Eq.-20 spring torques.
EstimatedEEState estimate_state(const RobotGeometry& g,
                                const SeaJointParams& sea,
                                const std::array<SeaJointState, 3>& joints);
EstimatedEEState estimate_state(const RobotGeometry& g,
                                const SeaJointParams& sea,
                                const std::array<SeaJointState, 3>& joints,
                                const Vec3& position_hint);

// One controller tick. In ForceActive the z reference is shifted by
// dpz = -PID(F_ref - F_est_z), so too little force drives the tool deeper.
// An unreachable modified setpoint holds the previous command and reports it.
ControlCommand hybrid_step(const RobotGeometry& g, const SeaJointParams& sea,
                           const HybridControllerConfig& cfg,
                           ControllerState& state, const Vec3& reference,
                           const EstimatedEEState& estimate,
                           const std::array<SeaJointState, 3>& joints);

}  // namespace deltasea

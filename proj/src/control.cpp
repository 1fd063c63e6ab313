#include "deltasea/control.hpp"

#include "deltasea/errors.hpp"
#include "deltasea/kinematics.hpp"
#include "deltasea/statics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace deltasea {

void PidGains::validate() const {
  if (kp < 0.0 || ki < 0.0 || kd < 0.0)
    throw std::invalid_argument("pid: gains must be >= 0");
  if (!(integral_limit > 0.0) || !(output_limit > 0.0))
    throw std::invalid_argument("pid: clamps must be positive");
}

void HybridControllerConfig::validate() const {
  if (!(trigger_threshold < force_ref))
    throw std::invalid_argument(
        "controller: trigger threshold must be below the reference force "
        "(f_trigger_n < fz_ref_n)");
  if (!(dt > 0.0)) throw std::invalid_argument("controller: dt must be positive");
  if (!(dpz_limit > 0.0))
    throw std::invalid_argument("controller: dpz_max_mm must be positive");
  if (!latch && !(release_threshold < trigger_threshold))
    throw std::invalid_argument(
        "controller: release threshold must be below the trigger threshold "
        "(release_n < f_trigger_n)");
  force_gains.validate();
  position_gains.validate();
}

double pid_step(const PidGains& gains, PidState& state, double error,
                double dt) {
  state.integral = std::clamp(state.integral + error * dt,
                              -gains.integral_limit, gains.integral_limit);
  const double derivative =
      state.has_prev ? (error - state.prev_error) / dt : 0.0;
  state.prev_error = error;
  state.has_prev = true;
  const double out =
      gains.kp * error + gains.ki * state.integral + gains.kd * derivative;
  return std::clamp(out, -gains.output_limit, gains.output_limit);
}

namespace {

EstimatedEEState estimate_impl(const RobotGeometry& g,
                               const SeaJointParams& sea,
                               const std::array<SeaJointState, 3>& joints,
                               const Vec3* hint) {
  JointAngles theta_l{};
  ChainTorques tau{};
  for (int i = 0; i < kNumChains; ++i) {
    theta_l[i] = joints[i].load_angle;
    tau[i] = load_torque(sea, joints[i]);
  }
  EstimatedEEState est;
  est.position = hint ? fpk(g, theta_l, *hint) : fpk(g, theta_l);
  est.force = resultant_force(g, theta_l, est.position, tau);
  return est;
}

}  // namespace

EstimatedEEState estimate_state(const RobotGeometry& g,
                                const SeaJointParams& sea,
                                const std::array<SeaJointState, 3>& joints) {
  return estimate_impl(g, sea, joints, nullptr);
}

EstimatedEEState estimate_state(const RobotGeometry& g,
                                const SeaJointParams& sea,
                                const std::array<SeaJointState, 3>& joints,
                                const Vec3& position_hint) {
  return estimate_impl(g, sea, joints, &position_hint);
}

ControlCommand hybrid_step(const RobotGeometry& g, const SeaJointParams& sea,
                           const HybridControllerConfig& cfg,
                           ControllerState& state, const Vec3& reference,
                           const EstimatedEEState& estimate,
                           const std::array<SeaJointState, 3>& joints) {
  ControlCommand cmd;

  if (cfg.force_loop_enabled) {
    const double fz = estimate.force.z();
    if (state.mode == ControllerMode::PositionOnly &&
        fz >= cfg.trigger_threshold) {
      state.mode = ControllerMode::ForceActive;
      cmd.trigger_event = true;
    } else if (state.mode == ControllerMode::ForceActive && !cfg.latch &&
               fz < cfg.release_threshold) {
      state.mode = ControllerMode::PositionOnly;
      state.force_pid.reset();
      state.dpz = 0.0;
    }
    if (state.mode == ControllerMode::ForceActive) {
      const double error = cfg.force_ref - fz;
      const double out = pid_step(cfg.force_gains, state.force_pid, error,
                                  cfg.dt);
      state.dpz = std::clamp(-out, -cfg.dpz_limit, cfg.dpz_limit);
    }
  }

  Vec3 setpoint = reference;
  setpoint.z() += state.dpz;

  JointAngles target{};
  try {
    target = state.has_last_target ? ipk(g, setpoint, state.last_target)
                                   : ipk(g, setpoint);
  } catch (const KinematicsError&) {
    cmd.setpoint_unreachable = true;
    cmd.motor_velocity = state.last_command;
    return cmd;
  }
  state.last_target = target;
  state.has_last_target = true;

  for (int i = 0; i < kNumChains; ++i) {
    const double error =
        sea.reduction_ratio * target[i] - joints[i].motor_angle;
    cmd.motor_velocity[i] =
        pid_step(cfg.position_gains, state.position_pid[i], error, cfg.dt);
  }
  state.last_command = cmd.motor_velocity;
  return cmd;
}

}  // namespace deltasea

#include "deltasea/simulator.hpp"

#include "deltasea/kinematics.hpp"
#include "deltasea/statics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

namespace deltasea {

namespace {

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double quantize_angle(double theta, int counts) {
  const double step = 2.0 * std::numbers::pi / counts;
  return step * std::round(theta / step);
}

// Per-chain torque imbalance: spring torque minus the torque the external
// load (contact + tool weight) requires at the candidate load angles.
struct EquilibriumProblem {
  const RobotGeometry& geom;
  const SeaJointParams& sea;
  const ElasticPlane& plane;
  const SimConfig& sim;
  const std::array<double, 3>& motor_angle;
  const Vec3& prev_position;

  Eigen::Vector3d residual(const JointAngles& theta_l, Vec3* out_p,
                           Vec3* out_contact) const {
    const Vec3 p = fpk(geom, theta_l, prev_position);
    const Vec3 v = (p - prev_position) / sim.dt;  // mm/s, for friction
    const Vec3 f_contact = contact_force(plane, p, v);
    Vec3 f_ext = f_contact;
    f_ext.z() -= sim.tool_weight;
    const ChainTorques tau_req = torques_for_force(geom, theta_l, p, f_ext);
    Eigen::Vector3d r;
    for (int i = 0; i < kNumChains; ++i) {
      const double spring =
          load_torque(sea, SeaJointState{motor_angle[i], theta_l[i]});
      r[i] = spring - tau_req[i];
    }
    if (out_p) *out_p = p;
    if (out_contact) *out_contact = f_contact;
    return r;
  }
};

}  // namespace

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("sim: dt_s must be positive");
  if (!(motor_rate_limit > 0.0))
    throw std::invalid_argument("sim: motor rate limit must be positive");
  if (!(equilibrium_tol > 0.0))
    throw std::invalid_argument("sim: equilibrium tolerance must be positive");
  if (max_iterations < 1)
    throw std::invalid_argument("sim: max iterations must be >= 1");
  if (encoder_counts < 2)
    throw std::invalid_argument("sim: encoder counts must be >= 2");
  if (force_quantize_step < 0.0)
    throw std::invalid_argument("sim: force quantization step must be >= 0");
  if (tool_weight < 0.0)
    throw std::invalid_argument("sim: tool weight must be >= 0");
}

PlantState make_plant_state(const RobotGeometry& g, const SeaJointParams& sea,
                            const ElasticPlane& plane, const Vec3& p0) {
  PlantState s;
  s.load_angle = ipk(g, p0);
  for (int i = 0; i < kNumChains; ++i) {
    s.motor_angle[i] = sea.reduction_ratio * s.load_angle[i];
  }
  s.position = p0;
  s.contact = contact_force(plane, p0, Vec3::Zero());
  return s;
}

PlantStepInfo plant_step(const RobotGeometry& g, const SeaJointParams& sea,
                         const ElasticPlane& plane, const SimConfig& sim,
                         PlantState& state,
                         const std::array<double, 3>& motor_velocity) {
  for (int i = 0; i < kNumChains; ++i) {
    const double v = std::clamp(motor_velocity[i], -sim.motor_rate_limit,
                                sim.motor_rate_limit);
    state.motor_angle[i] += v * sim.dt;
  }
  state.time += sim.dt;

  const EquilibriumProblem prob{g, sea, plane, sim,
                                state.motor_angle, state.position};

  PlantStepInfo info;
  try {
    // Out of contact the relaxed springs are the exact equilibrium.
    if (sim.tool_weight == 0.0) {
      JointAngles relaxed{};
      for (int i = 0; i < kNumChains; ++i) {
        relaxed[i] = state.motor_angle[i] / sea.reduction_ratio;
      }
      const Vec3 p_rel = fpk(g, relaxed, state.position);
      if (plane.penetration(p_rel) <= 0.0) {
        state.load_angle = relaxed;
        state.position = p_rel;
        state.contact = Vec3::Zero();
        return info;
      }
    }

    // Damped Newton, warm-started from the previous tick's load angles.
    JointAngles x = state.load_angle;
    Vec3 p_sol, c_sol;
    Eigen::Vector3d r = prob.residual(x, &p_sol, &c_sol);
    double rnorm = r.lpNorm<Eigen::Infinity>();
    constexpr double kJacStep = 1e-7;  // rad

    for (int iter = 0; iter < sim.max_iterations; ++iter) {
      if (rnorm < sim.equilibrium_tol) {
        state.load_angle = x;
        state.position = p_sol;
        state.contact = c_sol;
        info.iterations = iter;
        info.residual = rnorm;
        return info;
      }
      Mat3 jac;
      for (int j = 0; j < kNumChains; ++j) {
        JointAngles xh = x;
        xh[j] += kJacStep;
        jac.col(j) = (prob.residual(xh, nullptr, nullptr) - r) / kJacStep;
      }
      const Eigen::Vector3d step = jac.partialPivLu().solve(-r);
      bool improved = false;
      for (double alpha = 1.0; alpha >= 1.0 / 64.0; alpha *= 0.5) {
        JointAngles xt = x;
        for (int i = 0; i < kNumChains; ++i) xt[i] += alpha * step[i];
        Vec3 pt, ct;
        const Eigen::Vector3d rt = prob.residual(xt, &pt, &ct);
        const double rtnorm = rt.lpNorm<Eigen::Infinity>();
        if (rtnorm < rnorm) {
          x = xt;
          r = rt;
          rnorm = rtnorm;
          p_sol = pt;
          c_sol = ct;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
    info.converged = rnorm < sim.equilibrium_tol;
    if (info.converged) {
      state.load_angle = x;
      state.position = p_sol;
      state.contact = c_sol;
    }
    info.residual = rnorm;
    info.iterations = sim.max_iterations;
  } catch (const KinematicsError&) {
    info.converged = false;
  } catch (const StaticsError&) {
    info.converged = false;
  }
  // On failure the load side keeps the previous equilibrium.
  return info;
}

namespace {

Metrics compute_metrics(const std::vector<TraceRecord>& trace,
                        const std::vector<TrajectorySample>& traj,
                        const ScenarioConfig& cfg,
                        std::optional<double> trigger_time,
                        int equilibrium_failures,
                        std::optional<int> first_failure_tick,
                        int unreachable_ticks) {
  Metrics m;
  m.ticks = static_cast<int>(trace.size());
  m.duration = trace.empty() ? 0.0 : trace.back().t;
  m.force_ref = cfg.controller.force_ref;
  m.trigger_time = trigger_time;
  m.equilibrium_failures = equilibrium_failures;
  m.first_failure_tick = first_failure_tick;
  m.unreachable_ticks = unreachable_ticks;

  double exec_start = 0.0;
  double exec_end = m.duration;
  bool have_exec = false;
  for (const auto& s : traj) {
    if (s.phase == Phase::Execute) {
      if (!have_exec) exec_start = s.t;
      exec_end = s.t;
      have_exec = true;
    }
  }

  double sx = 0.0, sy = 0.0;
  for (const auto& r : trace) {
    sx += (r.p.x() - r.p_ref.x()) * (r.p.x() - r.p_ref.x());
    sy += (r.p.y() - r.p_ref.y()) * (r.p.y() - r.p_ref.y());
    m.max_abs_dpz = std::max(m.max_abs_dpz, std::abs(r.dpz));
  }
  if (!trace.empty()) {
    m.pos_rmse_x = std::sqrt(sx / trace.size());
    m.pos_rmse_y = std::sqrt(sy / trace.size());
    m.final_force_z = trace.back().f_true.z();
  }

  // Steady window: second half of the execute phase; identical across control
  // schemes so compare() ratios are apples to apples.
  m.steady_window_start = exec_start + 0.5 * (exec_end - exec_start);
  m.steady_window_end = exec_end;
  double acc = 0.0;
  int n = 0;
  for (const auto& r : trace) {
    if (r.t >= m.steady_window_start && r.t <= m.steady_window_end) {
      acc += std::abs(r.f_true.z() - m.force_ref);
      ++n;
    }
  }
  m.steady_abs_force_error = n > 0 ? acc / n : 0.0;

  if (trigger_time) {
    double se = 0.0;
    int ne = 0;
    for (const auto& r : trace) {
      if (r.t >= *trigger_time) {
        se += (r.f_true.z() - m.force_ref) * (r.f_true.z() - m.force_ref);
        ++ne;
      }
    }
    if (ne > 0) m.force_rmse_after_trigger = std::sqrt(se / ne);

    // Settling: last entry into the +-5% band that stays in it until the end
    // of the execute phase.
    const double band = 0.05 * m.force_ref;
    std::optional<double> settle;
    bool streak = true;
    for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
      if (it->t > exec_end) continue;
      if (it->t < *trigger_time) break;
      if (std::abs(it->f_true.z() - m.force_ref) <= band) {
        settle = it->t;
      } else {
        streak = settle.has_value();
        break;
      }
    }
    if (settle && streak) {
      m.settle_time = settle;
      double sa = 0.0;
      int na = 0;
      for (const auto& r : trace) {
        if (r.t >= *settle && r.t <= exec_end) {
          sa += std::abs(r.f_true.z() - m.force_ref);
          ++na;
        }
      }
      if (na > 0) m.mean_abs_force_error_after_settle = sa / na;
    }
  }
  return m;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const auto traj = cfg.build_trajectory();

  const SimConfig& sim = cfg.sim;
  HybridControllerConfig ctl = cfg.controller;
  ctl.dt = sim.dt;
  ctl.force_loop_enabled = cfg.scheme == ControlScheme::Hybrid;

  const double duration =
      sim.duration > 0.0 ? sim.duration : traj.back().t;
  const long n_steps = std::lround(duration / sim.dt);

  PlantState plant =
      make_plant_state(cfg.geometry, cfg.sea, cfg.plane, traj.front().position);
  ControllerState state;
  Vec3 est_hint = traj.front().position;

  ScenarioResult result;
  result.trace.reserve(n_steps + 1);
  std::optional<double> trigger_time;
  int failures = 0;
  std::optional<int> first_failure;
  int unreachable = 0;

  for (long k = 0; k <= n_steps; ++k) {
    const double t = k * sim.dt;
    const TrajectorySample& ref =
        traj[std::min<size_t>(k, traj.size() - 1)];

    std::array<SeaJointState, 3> joints;
    for (int i = 0; i < kNumChains; ++i) {
      double tm = plant.motor_angle[i];
      double tl = plant.load_angle[i];
      if (sim.encoder_quantization) {
        tm = quantize_angle(tm, sim.encoder_counts);
        tl = quantize_angle(tl, sim.encoder_counts);
      }
      joints[i] = SeaJointState{tm, tl};
    }

    try {
      const EstimatedEEState est =
          estimate_state(cfg.geometry, cfg.sea, joints, est_hint);
      est_hint = est.position;

      const ControlCommand cmd = hybrid_step(cfg.geometry, cfg.sea, ctl,
                                             state, ref.position, est, joints);
      if (cmd.trigger_event && !trigger_time) trigger_time = t;
      if (cmd.setpoint_unreachable) ++unreachable;

      TraceRecord rec;
      rec.t = t;
      rec.p_ref = ref.position;
      rec.dpz = state.dpz;
      rec.p = plant.position;
      rec.f_est = est.force;
      rec.f_true.x() = quantize_force(plant.contact.x(), sim.force_quantize_step);
      rec.f_true.y() = quantize_force(plant.contact.y(), sim.force_quantize_step);
      rec.f_true.z() = quantize_force(plant.contact.z(), sim.force_quantize_step);
      rec.theta_m = plant.motor_angle;
      rec.theta_l = plant.load_angle;
      for (int i = 0; i < kNumChains; ++i) {
        rec.tau[i] = load_torque(
            cfg.sea, SeaJointState{plant.motor_angle[i], plant.load_angle[i]});
      }
      rec.mode = state.mode;
      result.trace.push_back(rec);

      if (k < n_steps) {
        const PlantStepInfo info = plant_step(cfg.geometry, cfg.sea, cfg.plane,
                                              sim, plant, cmd.motor_velocity);
        if (!info.converged) {
          ++failures;
          if (!first_failure) first_failure = static_cast<int>(k);
        }
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("tick " + std::to_string(k) + " (t=" + num(t) +
                               " s): " + e.what());
    }
  }

  result.metrics = compute_metrics(result.trace, traj, cfg, trigger_time,
                                   failures, first_failure, unreachable);
  return result;
}

void write_trace_csv(std::ostream& out,
                     const std::vector<TraceRecord>& trace) {
  out << "t_s,pref_x_mm,pref_y_mm,pref_z_mm,dpz_mm,p_x_mm,p_y_mm,p_z_mm,"
         "fest_x_N,fest_y_N,fest_z_N,ftrue_x_N,ftrue_y_N,ftrue_z_N,"
         "thm_1_rad,thm_2_rad,thm_3_rad,thl_1_rad,thl_2_rad,thl_3_rad,"
         "tau_1_Nm,tau_2_Nm,tau_3_Nm,mode\n";
  for (const auto& r : trace) {
    out << num(r.t) << ',' << num(r.p_ref.x()) << ',' << num(r.p_ref.y())
        << ',' << num(r.p_ref.z()) << ',' << num(r.dpz) << ',' << num(r.p.x())
        << ',' << num(r.p.y()) << ',' << num(r.p.z()) << ','
        << num(r.f_est.x()) << ',' << num(r.f_est.y()) << ','
        << num(r.f_est.z()) << ',' << num(r.f_true.x()) << ','
        << num(r.f_true.y()) << ',' << num(r.f_true.z()) << ','
        << num(r.theta_m[0]) << ',' << num(r.theta_m[1]) << ','
        << num(r.theta_m[2]) << ',' << num(r.theta_l[0]) << ','
        << num(r.theta_l[1]) << ',' << num(r.theta_l[2]) << ','
        << num(r.tau[0] / 1000.0) << ',' << num(r.tau[1] / 1000.0) << ','
        << num(r.tau[2] / 1000.0) << ','
        << (r.mode == ControllerMode::ForceActive ? "force" : "position")
        << '\n';
  }
}

void write_metrics(std::ostream& out, const Metrics& m) {
  out << "ticks = " << m.ticks << '\n';
  out << "duration_s = " << num(m.duration) << '\n';
  out << "force_ref_n = " << num(m.force_ref) << '\n';
  if (m.trigger_time) out << "trigger_time_s = " << num(*m.trigger_time) << '\n';
  if (m.settle_time) out << "settle_time_s = " << num(*m.settle_time) << '\n';
  if (m.mean_abs_force_error_after_settle) {
    out << "mean_abs_force_error_after_settle_n = "
        << num(*m.mean_abs_force_error_after_settle) << '\n';
  }
  if (m.force_rmse_after_trigger) {
    out << "force_rmse_after_trigger_n = " << num(*m.force_rmse_after_trigger)
        << '\n';
  }
  out << "steady_abs_force_error_n = " << num(m.steady_abs_force_error) << '\n';
  out << "steady_window_start_s = " << num(m.steady_window_start) << '\n';
  out << "steady_window_end_s = " << num(m.steady_window_end) << '\n';
  out << "pos_rmse_x_mm = " << num(m.pos_rmse_x) << '\n';
  out << "pos_rmse_y_mm = " << num(m.pos_rmse_y) << '\n';
  out << "max_abs_dpz_mm = " << num(m.max_abs_dpz) << '\n';
  out << "final_force_z_n = " << num(m.final_force_z) << '\n';
  out << "equilibrium_failures = " << m.equilibrium_failures << '\n';
  if (m.first_failure_tick) {
    out << "first_failure_tick = " << *m.first_failure_tick << '\n';
  }
  out << "unreachable_ticks = " << m.unreachable_ticks << '\n';
}

}  // namespace deltasea

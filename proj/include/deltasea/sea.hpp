#pragma once

#include <stdexcept>

namespace deltasea {

// Series elastic actuator: motor -> torsion spring -> synchronous belt
// (ratio N) -> proximal link. Modeled as an undamped linear torsion spring.
struct SeaJointParams {
  double spring_stiffness = 1000.0;  // k_s, N*mm/rad (calibrated 1 N*m/rad)
  double reduction_ratio = 2.0;      // N
  double efficiency = 1.0;           // eta, in (0, 1]

  void validate() const {
    if (!(spring_stiffness > 0.0))
      throw std::invalid_argument("sea: spring stiffness must be positive");
    if (!(reduction_ratio >= 1.0))
      throw std::invalid_argument("sea: reduction ratio must be >= 1");
    if (!(efficiency > 0.0) || efficiency > 1.0)
      throw std::invalid_argument("sea: efficiency must be in (0, 1]");
  }
};

struct SeaJointState {
  double motor_angle = 0.0;  // theta_m, rad
  double load_angle = 0.0;   // theta_l, rad
};

// theta_s = theta_m - N * theta_l
inline double spring_deflection(const SeaJointParams& p,
                                const SeaJointState& s) {
  return s.motor_angle - p.reduction_ratio * s.load_angle;
}

// tau_l = k_s * N * eta * (theta_m - N * theta_l)
inline double load_torque(const SeaJointParams& p, const SeaJointState& s) {
  return p.spring_stiffness * p.reduction_ratio * p.efficiency *
         spring_deflection(p, s);
}

// Motor angle that produces a given load torque at a given load angle;
// exact algebraic inverse of load_torque.
inline double motor_angle_for_torque(const SeaJointParams& p,
                                     double load_angle, double torque) {
  return p.reduction_ratio * load_angle +
         torque / (p.spring_stiffness * p.reduction_ratio * p.efficiency);
}

}  // namespace deltasea

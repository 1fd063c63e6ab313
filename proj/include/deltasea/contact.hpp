#pragma once

#include "deltasea/geometry.hpp"

namespace deltasea {

// Elastic horizontal plane standing in for the electronic scale: normal force
// proportional to penetration, tangential regularized Coulomb friction.
struct ElasticPlane {
  double surface_z = -101.0;      // z_s, mm in {B}
  double stiffness = 2.0;         // k_c, N/mm
  double friction_mu = 0.3;       // Coulomb coefficient
  double friction_v_eps = 0.5;    // mm/s, regularization velocity

  void validate() const;
  double penetration(const Vec3& p) const {
    const double d = surface_z - p.z();
    return d > 0.0 ? d : 0.0;
  }
};

// Force acting ON the robot. Normal: +k_c * d along z. Tangential: opposes
// the tangential velocity with magnitude mu*k_c*d, regularized as
// -mu*k_c*d * v / (|v| + v_eps). Exactly zero when p_z >= z_s.
Vec3 contact_force(const ElasticPlane& plane, const Vec3& p,
                   const Vec3& tangential_velocity);

// Round to the scale's resolution step; step <= 0 returns f unchanged.
double quantize_force(double f, double step);

}  // namespace deltasea

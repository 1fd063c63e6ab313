#include "deltasea/contact.hpp"

#include <cmath>
#include <stdexcept>

namespace deltasea {

void ElasticPlane::validate() const {
  if (!(stiffness > 0.0))
    throw std::invalid_argument("contact: stiffness must be positive");
  if (friction_mu < 0.0)
    throw std::invalid_argument("contact: friction coefficient must be >= 0");
  if (!(friction_v_eps > 0.0))
    throw std::invalid_argument(
        "contact: friction regularization velocity must be positive");
}

Vec3 contact_force(const ElasticPlane& plane, const Vec3& p,
                   const Vec3& tangential_velocity) {
  const double d = plane.penetration(p);
  if (d <= 0.0) return Vec3::Zero();
  const double normal = plane.stiffness * d;
  Vec3 v = tangential_velocity;
  v.z() = 0.0;
  const double speed = v.norm();
  Vec3 f(0.0, 0.0, normal);
  if (plane.friction_mu > 0.0 && speed > 0.0) {
    f -= plane.friction_mu * normal / (speed + plane.friction_v_eps) * v;
  }
  return f;
}

double quantize_force(double f, double step) {
  if (step <= 0.0) return f;
  return step * std::round(f / step);
}

}  // namespace deltasea

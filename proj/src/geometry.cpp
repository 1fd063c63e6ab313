#include "deltasea/geometry.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace deltasea {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void RobotGeometry::validate() const {
  if (!(base_radius > 0.0) || !(platform_radius > 0.0) ||
      !(proximal_length > 0.0) || !(distal_length > 0.0)) {
    throw std::invalid_argument("geometry: all lengths must be positive");
  }
  if (!(base_radius > platform_radius)) {
    throw std::invalid_argument(
        "geometry: base radius must exceed platform radius (a > b)");
  }
}

double chain_placement_angle(int chain) {
  assert(chain >= 0 && chain < kNumChains);
  return -std::numbers::pi / 2.0 + kTwoPi * chain / 3.0;
}

Mat3 chain_rotation(int chain) {
  assert(chain >= 0 && chain < kNumChains);
  const double alpha = kTwoPi * chain / 3.0;
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  Mat3 r;
  r << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return r;
}

Vec3 base_joint(const RobotGeometry& g, int chain) {
  return chain_rotation(chain) * Vec3(0.0, -g.base_radius, 0.0);
}

Vec3 platform_attachment(const RobotGeometry& g, int chain) {
  return chain_rotation(chain) * Vec3(0.0, -g.platform_radius, 0.0);
}

Vec3 arm_vector(const RobotGeometry& g, int chain, double theta) {
  const double phi = chain_placement_angle(chain);
  const double radial = g.proximal_length * std::cos(theta);
  return Vec3(radial * std::cos(phi), radial * std::sin(phi),
              -g.proximal_length * std::sin(theta));
}

Vec3 elbow_point(const RobotGeometry& g, int chain, double theta) {
  return base_joint(g, chain) + arm_vector(g, chain, theta);
}

Vec3 distal_vector(const RobotGeometry& g, int chain, double theta,
                   const Vec3& p) {
  return p + platform_attachment(g, chain) - elbow_point(g, chain, theta);
}

}  // namespace deltasea

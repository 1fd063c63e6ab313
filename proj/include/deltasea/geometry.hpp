#pragma once

#include <Eigen/Core>

#include <array>

namespace deltasea {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Actuated joint angles / per-chain torques, chain index 0..2.
using JointAngles = std::array<double, 3>;
using ChainTorques = std::array<double, 3>;

inline constexpr int kNumChains = 3;

// Three-chain translational parallel manipulator. The fixed base {B} and the
// moving platform {P} keep identical orientation; chain i sits at placement
// angle phi_i = -pi/2 + 2*pi*i/3 around the base z-axis. Units: mm.
struct RobotGeometry {
  double base_radius = 100.0;      // a
  double platform_radius = 50.0;   // b
  double proximal_length = 80.0;   // l_a
  double distal_length = 160.0;    // l_b

  // k = a - b; positive for a valid geometry.
  double radial_offset() const { return base_radius - platform_radius; }

  // Throws std::invalid_argument on non-positive lengths or a <= b.
  void validate() const;
};

// phi_i for chain 0..2.
double chain_placement_angle(int chain);

// R_z(2*pi*i/3): maps chain-local coordinates to base coordinates. Chain 0's
// local frame coincides with {B}; the local x-axis is the joint rotation axis.
Mat3 chain_rotation(int chain);

// B_i: base revolute joint point in {B}.
Vec3 base_joint(const RobotGeometry& g, int chain);

// O_P->P_i: platform attachment offset (same components in {B} and {P}).
Vec3 platform_attachment(const RobotGeometry& g, int chain);

// B_i->A_i: proximal link vector in {B}. theta is the joint angle about the
// local x-axis, positive rotating the arm below the base plane.
Vec3 arm_vector(const RobotGeometry& g, int chain, double theta);

// A_i: elbow point in {B}.
Vec3 elbow_point(const RobotGeometry& g, int chain, double theta);

// A_i->P_i: distal link vector in {B} for platform origin p.
Vec3 distal_vector(const RobotGeometry& g, int chain, double theta,
                   const Vec3& p);

}  // namespace deltasea

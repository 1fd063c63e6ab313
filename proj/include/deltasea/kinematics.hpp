#pragma once

#include "deltasea/errors.hpp"
#include "deltasea/geometry.hpp"

namespace deltasea {

// Coefficients of the per-chain closure equation E*cos(th) + F*sin(th) + G = 0.
// The chain is reachable iff E^2 + F^2 >= G^2 (strict for two distinct roots).
struct ChainCoefficients {
  double e = 0.0;
  double f = 0.0;
  double g = 0.0;

  double discriminant() const { return e * e + f * f - g * g; }
  bool reachable() const { return discriminant() >= 0.0; }
};

// Two candidate joint angles for one chain; both satisfy the closure equation.
struct IkSolutionPair {
  double first = 0.0;
  double second = 0.0;
};

ChainCoefficients chain_coefficients(const RobotGeometry& g, const Vec3& p,
                                     int chain);

// Both half-angle roots for one chain, normalized to (-pi, pi].
// Throws Unreachable / DegenerateBranch.
IkSolutionPair ik_candidates(const RobotGeometry& g, const Vec3& p, int chain);

// Inverse position kinematics. Branch policy: roots inside (-pi/2, pi/2) are
// preferred (arm outward-and-down); ties go to the root closest to `previous`,
// or to the smaller |theta| when no previous solution is given.
JointAngles ipk(const RobotGeometry& g, const Vec3& p);
JointAngles ipk(const RobotGeometry& g, const Vec3& p,
                const JointAngles& previous);

// Centers of the three virtual spheres of radius l_b whose intersection is
// the platform origin.
std::array<Vec3, 3> virtual_sphere_centers(const RobotGeometry& g,
                                           const JointAngles& theta);

// Forward position kinematics by trilateration. Keeps the assembly branch
// with p_z < 0; with a hint, the intersection point closest to it.
// Throws NoIntersection / SingularConfiguration.
Vec3 fpk(const RobotGeometry& g, const JointAngles& theta);
Vec3 fpk(const RobotGeometry& g, const JointAngles& theta, const Vec3& hint);

// Per-chain closure residual |A_i P_i|^2 - l_b^2 (mm^2). Zero on a consistent
// (theta, p) pair; the universal correctness oracle for both IPK and FPK.
std::array<double, 3> loop_residual(const RobotGeometry& g,
                                    const JointAngles& theta, const Vec3& p);

}  // namespace deltasea

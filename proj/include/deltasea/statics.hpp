#pragma once

#include "deltasea/errors.hpp"
#include "deltasea/geometry.hpp"
#include "deltasea/kinematics.hpp"

#include <utility>

namespace deltasea {

// Force convention used throughout: EEForce-valued quantities are the force
// acting ON the end-effector from the environment, in {B}, newtons. Pressing
// into a surface below the platform therefore reads as positive F_z.

// Unit vectors along A_i->P_i in {B}. Throws ZeroLengthVector on inconsistent
// inputs.
std::array<Vec3, 3> distal_unit_vectors(const RobotGeometry& g,
                                        const JointAngles& theta,
                                        const Vec3& p);

// {R_{B-2}, R_{B-3}}: z-rotations by +2pi/3 and -2pi/3.
std::pair<Mat3, Mat3> frame_rotations();

// Signed force carried by each distal link, solved from the known x-axis
// torque at each base joint (zero moment arm -> StaticSingularity).
std::array<double, 3> chain_force_magnitudes(const RobotGeometry& g,
                                             const JointAngles& theta,
                                             const Vec3& p,
                                             const ChainTorques& tau);

// Resultant environment force on the end-effector from the three measured
// joint torques (geometric path: per-chain moment arms in the local frames,
// rod forces rotated back to {B} and summed).
Vec3 resultant_force(const RobotGeometry& g, const JointAngles& theta,
                     const Vec3& p, const ChainTorques& tau);

// Independent oracle for resultant_force: virtual work through a central
// finite-difference Jacobian of the inverse kinematics (step 1e-5 mm).
// Throws Unreachable if a probe point leaves the workspace.
Vec3 virtual_work_force(const RobotGeometry& g, const Vec3& p,
                        const ChainTorques& tau);

// Inverse static map: joint torques that correspond to a given end-effector
// force; exact right-inverse of resultant_force. Throws StaticSingularity
// when the force map is rank-deficient.
ChainTorques torques_for_force(const RobotGeometry& g,
                               const JointAngles& theta, const Vec3& p,
                               const Vec3& force);

}  // namespace deltasea

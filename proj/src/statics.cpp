#include "deltasea/statics.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace deltasea {

namespace {

constexpr double kFdStep = 1e-5;        // mm, virtual-work probe step
constexpr double kArmFloor = 1e-9;      // mm, moment-arm singularity cutoff
constexpr double kDetFloor = 1e-9;      // unit-vector matrix rank cutoff

// Moment arm about the local x-axis (the joint axis): x-component of
// (B_i A_i) x e, both expressed in the chain frame O_i.
double moment_arm(const RobotGeometry& g, int chain, double theta,
                  const Vec3& unit_b) {
  const Vec3 e_local = chain_rotation(chain).transpose() * unit_b;
  const double la = g.proximal_length;
  const Vec3 r(0.0, -la * std::cos(theta), -la * std::sin(theta));
  return r.y() * e_local.z() - r.z() * e_local.y();
}

}  // namespace

std::array<Vec3, 3> distal_unit_vectors(const RobotGeometry& g,
                                        const JointAngles& theta,
                                        const Vec3& p) {
  std::array<Vec3, 3> units;
  for (int i = 0; i < kNumChains; ++i) {
    const Vec3 d = distal_vector(g, i, theta[i], p);
    const double n = d.norm();
    if (n < 1e-9) throw ZeroLengthVector(i);
    units[i] = d / n;
  }
  return units;
}

std::pair<Mat3, Mat3> frame_rotations() {
  return {chain_rotation(1), chain_rotation(2)};
}

std::array<double, 3> chain_force_magnitudes(const RobotGeometry& g,
                                             const JointAngles& theta,
                                             const Vec3& p,
                                             const ChainTorques& tau) {
  const auto units = distal_unit_vectors(g, theta, p);
  std::array<double, 3> mags{};
  for (int i = 0; i < kNumChains; ++i) {
    const double h = moment_arm(g, i, theta[i], units[i]);
    if (std::abs(h) < kArmFloor) throw StaticSingularity(i);
    mags[i] = tau[i] / h;
  }
  return mags;
}

Vec3 resultant_force(const RobotGeometry& g, const JointAngles& theta,
                     const Vec3& p, const ChainTorques& tau) {
  const auto units = distal_unit_vectors(g, theta, p);
  const auto mags = chain_force_magnitudes(g, theta, p, tau);
  // The rods push the platform with sum(F_Ai * e_i); the environment force
  // balancing the massless platform is its negative.
  Vec3 f = Vec3::Zero();
  for (int i = 0; i < kNumChains; ++i) f += mags[i] * units[i];
  return -f;
}

Vec3 virtual_work_force(const RobotGeometry& g, const Vec3& p,
                        const ChainTorques& tau) {
  const JointAngles base = ipk(g, p);
  // dtheta/dp by central differences, branch-locked to the base solution.
  Mat3 dtheta_dp;
  for (int j = 0; j < 3; ++j) {
    Vec3 dp = Vec3::Zero();
    dp[j] = kFdStep;
    const JointAngles plus = ipk(g, p + dp, base);
    const JointAngles minus = ipk(g, p - dp, base);
    for (int i = 0; i < 3; ++i) {
      dtheta_dp(i, j) = (plus[i] - minus[i]) / (2.0 * kFdStep);
    }
  }
  // Duality with the environment-force convention: F = -(dtheta/dp)^T tau.
  const Vec3 t(tau[0], tau[1], tau[2]);
  return -(dtheta_dp.transpose() * t);
}

ChainTorques torques_for_force(const RobotGeometry& g,
                               const JointAngles& theta, const Vec3& p,
                               const Vec3& force) {
  const auto units = distal_unit_vectors(g, theta, p);
  Mat3 m;
  for (int i = 0; i < kNumChains; ++i) m.col(i) = units[i];
  if (std::abs(m.determinant()) < kDetFloor) throw StaticSingularity(-1);
  // Rod forces balancing the platform, then back through the moment arms.
  const Vec3 mags = m.partialPivLu().solve(-force);
  ChainTorques tau{};
  for (int i = 0; i < kNumChains; ++i) {
    const double h = moment_arm(g, i, theta[i], units[i]);
    if (std::abs(h) < kArmFloor) throw StaticSingularity(i);
    tau[i] = mags[i] * h;
  }
  return tau;
}

}  // namespace deltasea

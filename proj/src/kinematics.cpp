#include "deltasea/kinematics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <optional>

namespace deltasea {

namespace {

constexpr double kPi = std::numbers::pi;

// Wrapped angular distance, result in [0, pi].
double angle_distance(double a, double b) {
  return std::abs(std::remainder(a - b, 2.0 * kPi));
}

double pick_branch(const IkSolutionPair& pair,
                   const std::optional<double>& previous) {
  const double cands[2] = {pair.first, pair.second};
  // Arm outward-and-down first; fall back to both roots.
  double pool[2];
  int n = 0;
  for (double c : cands) {
    if (c > -kPi / 2.0 && c < kPi / 2.0) pool[n++] = c;
  }
  if (n == 0) {
    pool[0] = cands[0];
    pool[1] = cands[1];
    n = 2;
  }
  if (n == 1) return pool[0];
  auto cost = [&](double c) {
    return previous ? angle_distance(c, *previous) : std::abs(c);
  };
  return cost(pool[0]) <= cost(pool[1]) ? pool[0] : pool[1];
}

JointAngles ipk_impl(const RobotGeometry& g, const Vec3& p,
                     const std::optional<JointAngles>& previous) {
  JointAngles theta{};
  for (int i = 0; i < kNumChains; ++i) {
    const IkSolutionPair pair = ik_candidates(g, p, i);
    theta[i] = pick_branch(
        pair, previous ? std::optional<double>((*previous)[i]) : std::nullopt);
  }
  return theta;
}

}  // namespace

ChainCoefficients chain_coefficients(const RobotGeometry& g, const Vec3& p,
                                     int chain) {
  // Expansion of |A_i P_i|^2 - l_b^2 in the chain-local frame, where every
  // chain looks like chain 0: arm in the local y-z plane, joint axis along x.
  const Vec3 q = chain_rotation(chain).transpose() * p;
  const double k = g.radial_offset();
  const double la = g.proximal_length;
  const double lb = g.distal_length;
  ChainCoefficients c;
  c.e = 2.0 * la * (q.y() + k);
  c.f = 2.0 * la * q.z();
  c.g = q.x() * q.x() + (q.y() + k) * (q.y() + k) + q.z() * q.z() + la * la -
        lb * lb;
  return c;
}

IkSolutionPair ik_candidates(const RobotGeometry& g, const Vec3& p,
                             int chain) {
  const ChainCoefficients c = chain_coefficients(g, p, chain);
  const double disc = c.discriminant();
  if (disc < 0.0) throw Unreachable(chain);

  // Half-angle substitution t = tan(theta/2):
  //   (G - E) t^2 + 2F t + (G + E) = 0
  const double qa = c.g - c.e;
  const double qb = 2.0 * c.f;
  const double qc = c.g + c.e;
  const double scale = std::max({std::abs(c.e), std::abs(c.g), 1.0});

  IkSolutionPair out;
  if (std::abs(qa) <= 1e-12 * scale) {
    // Quadratic degenerates to 2F t + (G + E) = 0; the second root escapes
    // to t = inf, i.e. theta = pi.
    if (std::abs(qb) <= 1e-12 * scale) throw DegenerateBranch(chain);
    out.first = 2.0 * std::atan(-qc / qb);
    out.second = kPi;
    return out;
  }

  const double sqrt_disc = 2.0 * std::sqrt(disc);  // sqrt(qb^2 - 4 qa qc)
  double t1, t2;
  if (std::abs(qb) <= 1e-300) {
    t1 = sqrt_disc / (2.0 * qa);
    t2 = -t1;
  } else {
    // Citardauq pairing avoids cancellation between -qb and the root.
    const double qq = -0.5 * (qb + std::copysign(sqrt_disc, qb));
    t1 = qq / qa;
    t2 = qc / qq;
  }
  out.first = 2.0 * std::atan(t1);
  out.second = 2.0 * std::atan(t2);
  return out;
}

JointAngles ipk(const RobotGeometry& g, const Vec3& p) {
  return ipk_impl(g, p, std::nullopt);
}

JointAngles ipk(const RobotGeometry& g, const Vec3& p,
                const JointAngles& previous) {
  return ipk_impl(g, p, previous);
}

std::array<Vec3, 3> virtual_sphere_centers(const RobotGeometry& g,
                                           const JointAngles& theta) {
  // O_B A_iv = O_B A_i - O_P P_i: shifting each elbow by the platform
  // attachment turns the closure constraints into spheres around fixed
  // centers, all through the platform origin.
  std::array<Vec3, 3> centers;
  for (int i = 0; i < kNumChains; ++i) {
    centers[i] = elbow_point(g, i, theta[i]) - platform_attachment(g, i);
  }
  return centers;
}

namespace {

Vec3 fpk_impl(const RobotGeometry& g, const JointAngles& theta,
              const Vec3* hint) {
  const auto c = virtual_sphere_centers(g, theta);
  const double lb = g.distal_length;

  // Pairwise differences of the sphere equations are planes; their
  // intersection line meets sphere 0 in the two assembly branches.
  const Vec3 n1 = c[2] - c[0];
  const Vec3 n2 = c[2] - c[1];
  const double b1 = 0.5 * (c[2].squaredNorm() - c[0].squaredNorm());
  const double b2 = 0.5 * (c[2].squaredNorm() - c[1].squaredNorm());

  const Vec3 dir = n1.cross(n2);
  if (dir.squaredNorm() <= 1e-12 * n1.squaredNorm() * n2.squaredNorm()) {
    throw SingularConfiguration();
  }
  const Vec3 p0 = (b1 * n2 - b2 * n1).cross(dir) / dir.squaredNorm();

  const Vec3 w = p0 - c[0];
  const double qa = dir.squaredNorm();
  const double qb = 2.0 * dir.dot(w);
  const double qc = w.squaredNorm() - lb * lb;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) throw NoIntersection();

  double s1, s2;
  if (std::abs(qb) <= 1e-300) {
    s1 = std::sqrt(disc) / (2.0 * qa);
    s2 = -s1;
  } else {
    const double qq = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
    s1 = qq / qa;
    s2 = qc / qq;
  }
  const Vec3 r1 = p0 + s1 * dir;
  const Vec3 r2 = p0 + s2 * dir;

  // Assembly branch: platform hangs below the base.
  const bool neg1 = r1.z() < 0.0;
  const bool neg2 = r2.z() < 0.0;
  if (!neg1 && !neg2) {
    throw NoIntersection("no intersection on the hanging branch (p_z < 0)");
  }
  if (neg1 != neg2) return neg1 ? r1 : r2;
  if (hint) {
    return (r1 - *hint).squaredNorm() <= (r2 - *hint).squaredNorm() ? r1 : r2;
  }
  return r1.z() <= r2.z() ? r1 : r2;
}

}  // namespace

Vec3 fpk(const RobotGeometry& g, const JointAngles& theta) {
  return fpk_impl(g, theta, nullptr);
}

Vec3 fpk(const RobotGeometry& g, const JointAngles& theta, const Vec3& hint) {
  return fpk_impl(g, theta, &hint);
}

std::array<double, 3> loop_residual(const RobotGeometry& g,
                                    const JointAngles& theta, const Vec3& p) {
  std::array<double, 3> res{};
  const double lb2 = g.distal_length * g.distal_length;
  for (int i = 0; i < kNumChains; ++i) {
    res[i] = distal_vector(g, i, theta[i], p).squaredNorm() - lb2;
  }
  return res;
}

}  // namespace deltasea

#pragma once

#include <stdexcept>
#include <string>

namespace deltasea {

struct KinematicsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Target point outside the workspace of one chain (E^2 + F^2 < G^2).
struct Unreachable : KinematicsError {
  int chain;
  explicit Unreachable(int chain_idx, const std::string& what = "")
      : KinematicsError("chain " + std::to_string(chain_idx) +
                        " cannot reach target" +
                        (what.empty() ? "" : ": " + what)),
        chain(chain_idx) {}
};

// G == E and F == 0: the half-angle quadratic has no usable root.
struct DegenerateBranch : KinematicsError {
  int chain;
  explicit DegenerateBranch(int chain_idx)
      : KinematicsError("chain " + std::to_string(chain_idx) +
                        ": degenerate half-angle quadratic"),
        chain(chain_idx) {}
};

struct NoIntersection : KinematicsError {
  NoIntersection() : KinematicsError("virtual spheres share no common point") {}
  explicit NoIntersection(const std::string& what) : KinematicsError(what) {}
};

struct SingularConfiguration : KinematicsError {
  SingularConfiguration()
      : KinematicsError("virtual sphere centers are collinear") {}
};

struct StaticsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Zero moment arm (chain >= 0) or rank-deficient force map (chain == -1).
struct StaticSingularity : StaticsError {
  int chain;
  explicit StaticSingularity(int chain_idx)
      : StaticsError(chain_idx < 0
                         ? std::string("static force map is rank-deficient")
                         : "chain " + std::to_string(chain_idx) +
                               ": distal link passes through the joint axis"),
        chain(chain_idx) {}
};

struct ZeroLengthVector : StaticsError {
  int chain;
  explicit ZeroLengthVector(int chain_idx)
      : StaticsError("chain " + std::to_string(chain_idx) +
                     ": distal vector has zero length"),
        chain(chain_idx) {}
};

struct EquilibriumNotConverged : std::runtime_error {
  double residual;
  int iterations;
  EquilibriumNotConverged(double res, int iters)
      : std::runtime_error("plant equilibrium solve did not converge (residual " +
                           std::to_string(res) + " N*mm after " +
                           std::to_string(iters) + " iterations)"),
        residual(res),
        iterations(iters) {}
};

struct ConfigError : std::runtime_error {
  std::string key;
  int line;  // 1-based line in the config file, 0 if not tied to a line
  ConfigError(const std::string& message, std::string key_path = "",
              int line_no = 0)
      : std::runtime_error(message), key(std::move(key_path)), line(line_no) {}
};

}  // namespace deltasea

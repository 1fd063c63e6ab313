#include "deltasea/scenario.hpp"

#include "deltasea/kinematics.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace deltasea {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& path, int line) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw ConfigError("expected a number for '" + path + "', got '" + v + "'",
                      path, line);
  }
}

int parse_int(const std::string& v, const std::string& path, int line) {
  try {
    size_t pos = 0;
    const int i = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return i;
  } catch (...) {
    throw ConfigError("expected an integer for '" + path + "', got '" + v + "'",
                      path, line);
  }
}

std::uint64_t parse_u64(const std::string& v, const std::string& path,
                        int line) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw ConfigError("expected an unsigned integer for '" + path + "', got '" +
                          v + "'",
                      path, line);
  }
  return out;
}

bool parse_bool(const std::string& v, const std::string& path, int line) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("expected true or false for '" + path + "', got '" + v + "'",
                    path, line);
}

Vec3 parse_vec3(const std::string& v, const std::string& path, int line) {
  std::istringstream ss(v);
  std::string part;
  double comp[3];
  int n = 0;
  while (std::getline(ss, part, ',')) {
    if (n >= 3) {
      throw ConfigError("expected 'x, y, z' for '" + path + "'", path, line);
    }
    comp[n++] = parse_double(trim(part), path, line);
  }
  if (n != 3) {
    throw ConfigError("expected 'x, y, z' for '" + path + "'", path, line);
  }
  return Vec3(comp[0], comp[1], comp[2]);
}

std::vector<Vec3> parse_waypoints(const std::string& v, const std::string& path,
                                  int line) {
  std::vector<Vec3> out;
  std::istringstream ss(v);
  std::string part;
  while (std::getline(ss, part, ';')) {
    part = trim(part);
    if (part.empty()) continue;
    out.push_back(parse_vec3(part, path, line));
  }
  if (out.empty()) {
    throw ConfigError("expected 'x,y,z ; x,y,z ; ...' for '" + path + "'",
                      path, line);
  }
  return out;
}

PrimitiveKind parse_kind(const std::string& v, const std::string& path,
                         int line) {
  if (v == "pressing") return PrimitiveKind::Pressing;
  if (v == "tapping" || v == "taping") return PrimitiveKind::Tapping;
  if (v == "rolling") return PrimitiveKind::Rolling;
  if (v == "pushing") return PrimitiveKind::Pushing;
  throw ConfigError("unknown primitive type '" + v +
                        "' (expected pressing|tapping|rolling|pushing)",
                    path, line);
}

[[noreturn]] void unknown_key(const std::string& path, int line) {
  throw ConfigError("unknown key '" + path + "'", path, line);
}

}  // namespace

void ScenarioConfig::validate() const {
  geometry.validate();
  sea.validate();
  plane.validate();
  controller.validate();
  sim.validate();
  const bool has_prims = !primitives.empty();
  const bool has_wps = !waypoints.empty();
  if (has_prims == has_wps) {
    throw std::invalid_argument(
        "scenario: exactly one of primitives or trajectory.waypoints must be "
        "given");
  }
  for (const auto& p : primitives) p.validate();
  if (has_wps && !(waypoint_speed > 0.0)) {
    throw std::invalid_argument(
        "scenario: trajectory.waypoint_speed_mm_s must be positive");
  }
}

std::vector<TrajectorySample> ScenarioConfig::build_trajectory() const {
  if (!waypoints.empty()) {
    return from_waypoints(waypoints, waypoint_speed, sim.dt);
  }
  return generate(primitives, sim.dt);
}

ScenarioConfig parse_scenario(std::istream& in, const std::string& name) {
  ScenarioConfig cfg;
  std::map<int, MassagePrimitive> prims;

  std::string section;
  int prim_index = 0;
  std::string raw;
  int line = 0;

  while (std::getline(in, raw)) {
    ++line;
    std::string text = raw;
    if (const auto hash = text.find('#'); hash != std::string::npos) {
      text.erase(hash);
    }
    text = trim(text);
    if (text.empty()) continue;

    if (text.front() == '[') {
      if (text.back() != ']') {
        throw ConfigError(name + ":" + std::to_string(line) +
                              ": malformed section header '" + text + "'",
                          "", line);
      }
      section = trim(text.substr(1, text.size() - 2));
      if (section.rfind("primitive.", 0) == 0) {
        prim_index = parse_int(section.substr(10), section, line);
        if (prim_index < 1) {
          throw ConfigError("primitive sections are numbered from 1", section,
                            line);
        }
        prims.try_emplace(prim_index);  // defaults
      } else if (section != "geometry" && section != "sea" &&
                 section != "contact" && section != "controller" &&
                 section != "sim" && section != "trajectory") {
        throw ConfigError("unknown section '[" + section + "]'", section, line);
      }
      continue;
    }

    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(name + ":" + std::to_string(line) +
                            ": expected 'key = value', got '" + text + "'",
                        "", line);
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (section.empty()) {
      throw ConfigError("key '" + key + "' appears before any [section]", key,
                        line);
    }
    const std::string path = section + "." + key;

    if (section == "geometry") {
      if (key == "a_mm") cfg.geometry.base_radius = parse_double(value, path, line);
      else if (key == "b_mm") cfg.geometry.platform_radius = parse_double(value, path, line);
      else if (key == "la_mm") cfg.geometry.proximal_length = parse_double(value, path, line);
      else if (key == "lb_mm") cfg.geometry.distal_length = parse_double(value, path, line);
      else unknown_key(path, line);
    } else if (section == "sea") {
      if (key == "ks_nmm_per_rad") cfg.sea.spring_stiffness = parse_double(value, path, line);
      else if (key == "reduction_ratio") cfg.sea.reduction_ratio = parse_double(value, path, line);
      else if (key == "efficiency") cfg.sea.efficiency = parse_double(value, path, line);
      else unknown_key(path, line);
    } else if (section == "contact") {
      if (key == "zs_mm") cfg.plane.surface_z = parse_double(value, path, line);
      else if (key == "kc_n_per_mm") cfg.plane.stiffness = parse_double(value, path, line);
      else if (key == "mu") cfg.plane.friction_mu = parse_double(value, path, line);
      else if (key == "v_eps_mm_per_s") cfg.plane.friction_v_eps = parse_double(value, path, line);
      else unknown_key(path, line);
    } else if (section == "controller") {
      if (key == "mode") {
        if (value == "hybrid") cfg.scheme = ControlScheme::Hybrid;
        else if (value == "position") cfg.scheme = ControlScheme::PositionOnly;
        else throw ConfigError("controller.mode must be hybrid or position, got '" + value + "'", path, line);
      }
      else if (key == "fz_ref_n") cfg.controller.force_ref = parse_double(value, path, line);
      else if (key == "f_trigger_n") cfg.controller.trigger_threshold = parse_double(value, path, line);
      else if (key == "latch") cfg.controller.latch = parse_bool(value, path, line);
      else if (key == "release_n") cfg.controller.release_threshold = parse_double(value, path, line);
      else if (key == "force_kp") cfg.controller.force_gains.kp = parse_double(value, path, line);
      else if (key == "force_ki") cfg.controller.force_gains.ki = parse_double(value, path, line);
      else if (key == "force_kd") cfg.controller.force_gains.kd = parse_double(value, path, line);
      else if (key == "force_i_max") cfg.controller.force_gains.integral_limit = parse_double(value, path, line);
      else if (key == "dpz_max_mm") cfg.controller.dpz_limit = parse_double(value, path, line);
      else if (key == "pos_kp") cfg.controller.position_gains.kp = parse_double(value, path, line);
      else if (key == "pos_ki") cfg.controller.position_gains.ki = parse_double(value, path, line);
      else if (key == "pos_kd") cfg.controller.position_gains.kd = parse_double(value, path, line);
      else if (key == "pos_i_max") cfg.controller.position_gains.integral_limit = parse_double(value, path, line);
      else if (key == "pos_out_max") cfg.controller.position_gains.output_limit = parse_double(value, path, line);
      else unknown_key(path, line);
    } else if (section == "sim") {
      if (key == "dt_s") cfg.sim.dt = parse_double(value, path, line);
      else if (key == "duration_s") cfg.sim.duration = parse_double(value, path, line);
      else if (key == "motor_rate_limit_rad_s") cfg.sim.motor_rate_limit = parse_double(value, path, line);
      else if (key == "equilibrium_tol_nmm") cfg.sim.equilibrium_tol = parse_double(value, path, line);
      else if (key == "max_iterations") cfg.sim.max_iterations = parse_int(value, path, line);
      else if (key == "seed") cfg.sim.seed = parse_u64(value, path, line);
      else if (key == "encoder_quantization") cfg.sim.encoder_quantization = parse_bool(value, path, line);
      else if (key == "encoder_counts") cfg.sim.encoder_counts = parse_int(value, path, line);
      else if (key == "force_quantize_n") cfg.sim.force_quantize_step = parse_double(value, path, line);
      else if (key == "tool_weight_n") cfg.sim.tool_weight = parse_double(value, path, line);
      else unknown_key(path, line);
    } else if (section == "trajectory") {
      if (key == "approach_speed_mm_s") cfg.approach_speed = parse_double(value, path, line);
      else if (key == "hover_mm") cfg.hover_height = parse_double(value, path, line);
      else if (key == "settle_s") cfg.settle_time = parse_double(value, path, line);
      else if (key == "waypoints") cfg.waypoints = parse_waypoints(value, path, line);
      else if (key == "waypoint_speed_mm_s") cfg.waypoint_speed = parse_double(value, path, line);
      else unknown_key(path, line);
    } else {  // primitive.N
      MassagePrimitive& m = prims[prim_index];
      if (key == "type") m.kind = parse_kind(value, path, line);
      else if (key == "target_mm") m.target = parse_vec3(value, path, line);
      else if (key == "hold_force_n") m.hold_force = parse_double(value, path, line);
      else if (key == "duration_s") m.duration = parse_double(value, path, line);
      else if (key == "pre_tap_mm") m.pre_tap_height = parse_double(value, path, line);
      else if (key == "descent_speed_mm_s") m.descent_speed = parse_double(value, path, line);
      else if (key == "tap_dwell_s") m.tap_dwell = parse_double(value, path, line);
      else if (key == "circle_radius_mm") m.circle_radius = parse_double(value, path, line);
      else if (key == "angular_rate_rad_s") m.angular_rate = parse_double(value, path, line);
      else if (key == "end_mm") m.end_point = parse_vec3(value, path, line);
      else if (key == "push_speed_mm_s") m.push_speed = parse_double(value, path, line);
      else unknown_key(path, line);
    }
  }

  cfg.primitives.clear();
  for (auto& [idx, m] : prims) {
    m.approach_speed = cfg.approach_speed;
    m.hover_height = cfg.hover_height;
    m.settle_time = cfg.settle_time;
    cfg.primitives.push_back(m);
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  return parse_scenario(in, path);
}

void validate_scenario(const ScenarioConfig& cfg) {
  try {
    cfg.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }

  if (!cfg.waypoints.empty()) {
    for (size_t i = 0; i < cfg.waypoints.size(); ++i) {
      try {
        (void)ipk(cfg.geometry, cfg.waypoints[i]);
      } catch (const KinematicsError& e) {
        throw ConfigError("waypoint " + std::to_string(i + 1) +
                              " is unreachable: " + e.what(),
                          "trajectory.waypoints");
      }
    }
  }

  const auto traj = cfg.build_trajectory();
  for (size_t i = 0; i < traj.size(); ++i) {
    try {
      (void)ipk(cfg.geometry, traj[i].position);
    } catch (const KinematicsError& e) {
      std::ostringstream os;
      os << "trajectory sample " << i << " (t=" << traj[i].t
         << " s, position " << traj[i].position.x() << ", "
         << traj[i].position.y() << ", " << traj[i].position.z()
         << " mm) is unreachable: " << e.what();
      throw ConfigError(os.str());
    }
  }
}

}  // namespace deltasea

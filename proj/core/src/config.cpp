#include "utpp/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace utpp {

namespace pt = boost::property_tree;

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"road", {"type", "slope", "intercept", "center_x", "center_y", "radius", "file",
                "straight_eps"}},
      {"vehicle", {"start_x", "start_y", "start_yaw_deg", "speed", "wheelbase"}},
      {"controller", {"type", "lookahead_gain", "steering_limit_deg"}},
      {"sim", {"dt", "steps", "paper_literal"}},
      {"noise", {"sigma_x", "sigma_y", "sigma_yaw_deg", "road_sigma_x", "road_sigma_y",
                 "road_sigma_yaw_deg", "max_lateral_dev", "seed"}},
      {"ut", {"dim", "alpha", "kappa"}},
  };
  return keys;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  bool has_section(const std::string& section) const {
    return tree_.get_child_optional(section).has_value();
  }

  std::optional<std::string> raw(const std::string& section, const std::string& key) const {
    const auto sec = tree_.get_child_optional(section);
    if (!sec) return std::nullopt;
    const auto value = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!value) return std::nullopt;
    return *value;
  }

  double number(const std::string& section, const std::string& key) const {
    const auto v = raw(section, key);
    if (!v) throw ConfigError("missing required key '" + section + "." + key + "'");
    return to_number(section, key, *v);
  }

  double number_or(const std::string& section, const std::string& key, double fallback) const {
    const auto v = raw(section, key);
    return v ? to_number(section, key, *v) : fallback;
  }

  std::int64_t integer_or(const std::string& section, const std::string& key,
                          std::int64_t fallback) const {
    const auto v = raw(section, key);
    if (!v) return fallback;
    std::int64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || ptr != v->data() + v->size())
      throw ConfigError("key '" + section + "." + key + "': expected an integer, got '" + *v +
                        "'");
    return out;
  }

  std::uint64_t unsigned_or(const std::string& section, const std::string& key,
                            std::uint64_t fallback) const {
    const auto v = raw(section, key);
    if (!v) return fallback;
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || ptr != v->data() + v->size())
      throw ConfigError("key '" + section + "." + key +
                        "': expected a non-negative integer, got '" + *v + "'");
    return out;
  }

  bool boolean_or(const std::string& section, const std::string& key, bool fallback) const {
    const auto v = raw(section, key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError("key '" + section + "." + key + "': expected true/false, got '" + *v +
                      "'");
  }

  std::string text(const std::string& section, const std::string& key) const {
    const auto v = raw(section, key);
    if (!v || v->empty())
      throw ConfigError("missing required key '" + section + "." + key + "'");
    return *v;
  }

 private:
  static double to_number(const std::string& section, const std::string& key,
                          const std::string& v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out))
      throw ConfigError("key '" + section + "." + key + "': expected a finite number, got '" +
                        v + "'");
    return out;
  }

  const pt::ptree& tree_;
};

void reject_unknown(const pt::ptree& tree) {
  const auto& allowed = allowed_keys();
  for (const auto& [section, body] : tree) {
    const auto it = allowed.find(section);
    if (it == allowed.end() || !body.data().empty()) {
      throw ConfigError("unknown section or top-level key '" + section + "'");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key))
        throw ConfigError("unknown key '" + section + "." + key + "'");
    }
  }
}

RoadModel read_road(const Reader& r, const std::filesystem::path& base_dir) {
  const std::string type = r.text("road", "type");
  if (type == "line") {
    return StraightLine{r.number("road", "slope"), r.number("road", "intercept")};
  }
  if (type == "circle") {
    return Circle{r.number("road", "center_x"), r.number("road", "center_y"),
                  r.number("road", "radius")};
  }
  if (type == "waypoints") {
    std::filesystem::path file = r.text("road", "file");
    if (file.is_relative()) file = base_dir / file;
    return read_waypoint_file(file);
  }
  throw ConfigError("key 'road.type': expected line, circle or waypoints, got '" + type + "'");
}

}  // namespace

std::optional<Controller> parse_controller(std::string_view name) {
  if (name == "pp") return Controller::pp;
  if (name == "utpp") return Controller::utpp;
  return std::nullopt;
}

Scenario parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  reject_unknown(tree);
  const Reader r(tree);

  Scenario s;
  s.road = read_road(r, base_dir);
  s.straight_eps = r.number_or("road", "straight_eps", kDefaultStraightEps);

  s.start_pose = {r.number("vehicle", "start_x"), r.number("vehicle", "start_y"),
                  normalize_angle(r.number("vehicle", "start_yaw_deg") * kDegToRad)};
  s.speed = r.number("vehicle", "speed");
  s.pursuit.wheelbase = r.number("vehicle", "wheelbase");

  s.pursuit.lookahead_gain = r.number("controller", "lookahead_gain");
  s.pursuit.steering_limit = r.number_or("controller", "steering_limit_deg", 35.0) * kDegToRad;
  if (const auto name = r.raw("controller", "type")) {
    const auto c = parse_controller(*name);
    if (!c) throw ConfigError("key 'controller.type': expected pp or utpp, got '" + *name + "'");
    s.controller = *c;
  }

  s.dt = r.number("sim", "dt");
  const std::int64_t steps = r.integer_or("sim", "steps", 300);
  if (steps < 1 || steps > 100'000'000) throw ConfigError("key 'sim.steps' must be >= 1");
  s.steps = static_cast<int>(steps);
  s.paper_literal = r.boolean_or("sim", "paper_literal", false);

  if (r.has_section("noise")) {
    auto variance = [&](const char* key, double scale) {
      const double sigma = r.number_or("noise", key, 0.0);
      if (sigma < 0.0) throw ConfigError(std::string("key 'noise.") + key + "' must be >= 0");
      return (sigma * scale) * (sigma * scale);
    };
    const Covariance3 vehicle{variance("sigma_x", 1.0), variance("sigma_y", 1.0),
                              variance("sigma_yaw_deg", kDegToRad)};
    const Covariance3 road{variance("road_sigma_x", 1.0), variance("road_sigma_y", 1.0),
                           variance("road_sigma_yaw_deg", kDegToRad)};
    NoiseModel noise;
    noise.cov = compose_covariance(vehicle, road);
    noise.max_lateral_dev = r.number_or("noise", "max_lateral_dev", 0.3);
    noise.rng_seed = r.unsigned_or("noise", "seed", 0);
    s.noise = noise;
  }

  const std::int64_t dim = r.integer_or("ut", "dim", 3);
  if (dim != kPoseDim) throw ConfigError("key 'ut.dim' must be 3");
  try {
    s.ut = derive_ut_params(static_cast<int>(dim), r.number_or("ut", "alpha", 1e-3),
                            r.number_or("ut", "kappa", 0.0));
  } catch (const FaultError& e) {
    throw ConfigError(std::string("keys 'ut.alpha'/'ut.kappa': ") + e.what());
  }

  s.validate();
  return s;
}

Scenario parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str(), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

Scenario apply_overrides(Scenario s, const ScenarioOverrides& o) {
  if (o.waypoint_file) s.road = read_waypoint_file(*o.waypoint_file);
  if (o.controller) s.controller = *o.controller;
  if (o.steps) s.steps = *o.steps;
  if (o.noise) {
    if (*o.noise && !s.noise)
      throw ConfigError("--noise on needs a [noise] section in the config");
    if (!*o.noise) {
      if (s.controller == Controller::utpp && s.noise) {
        s.noise->cov = {};
      } else if (s.controller == Controller::utpp) {
        s.noise = NoiseModel{};
      } else {
        s.noise.reset();
      }
    }
  }
  if (o.seed) {
    if (!s.noise) s.noise = NoiseModel{};  // zero covariance, seed only recorded
    s.noise->rng_seed = *o.seed;
  }
  s.validate();
  return s;
}

}  // namespace utpp

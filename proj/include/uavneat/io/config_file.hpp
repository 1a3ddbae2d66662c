#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iterator>
#include <iomanip>
#include <limits>
#include <map>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "uavneat/config.hpp"

namespace uavneat::io {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

inline double parse_double(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  try {
    std::size_t used = 0;
    double v = std::stod(t, &used);
    if (used == t.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("invalid number '" + text + "' for " + key);
}

inline long long parse_int(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  try {
    std::size_t used = 0;
    long long v = std::stoll(t, &used);
    if (used == t.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("invalid integer '" + text + "' for " + key);
}

inline bool parse_bool(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("invalid boolean '" + text + "' for " + key);
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

}  // namespace detail

// "(x, y), (x, y), ..."
inline std::vector<env::Point2> parse_points(const std::string& text, const std::string& key) {
  static const std::regex point(R"(\(\s*([^,()]+?)\s*,\s*([^,()]+?)\s*\))");
  std::vector<env::Point2> pts;
  std::string rest;
  auto begin = std::sregex_iterator(text.begin(), text.end(), point);
  std::size_t last = 0;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    rest += text.substr(last, static_cast<std::size_t>(it->position()) - last);
    last = static_cast<std::size_t>(it->position() + it->length());
    pts.push_back({detail::parse_double((*it)[1], key), detail::parse_double((*it)[2], key)});
  }
  rest += text.substr(last);
  for (char c : rest)
    if (c != ',' && c != ' ' && c != '\t')
      throw ConfigError("invalid point list for " + key + " (expected \"(x, y), (x, y), ...\")");
  if (pts.empty()) throw ConfigError(key + " needs at least one point");
  return pts;
}

inline std::vector<double> parse_doubles(const std::string& text, const std::string& key) {
  std::vector<double> v;
  for (const auto& part : detail::split(text, ',')) v.push_back(detail::parse_double(part, key));
  return v;
}

// Sectioned key-value run configuration. Every key is optional; missing keys
// keep the defaults of RunConfig.
class ConfigReader {
 public:
  RunConfig read(std::istream& in, const std::string& source = "<config>") {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    RunConfig cfg;
    auto handlers = bind(cfg);

    // The INI reader silently drops empty sections, so headers are checked here.
    static const std::regex header(R"(^\s*\[([^\]]*)\]\s*$)");
    std::istringstream lines(text);
    std::string line;
    for (int n = 1; std::getline(lines, line); ++n) {
      std::smatch m;
      if (std::regex_match(line, m, header) && !handlers.count(detail::trim(m[1])))
        throw ConfigError(source + ":" + std::to_string(n) + ": unknown section [" + detail::trim(m[1]) + "]");
    }

    boost::property_tree::ptree tree;
    try {
      std::istringstream body(text);
      boost::property_tree::read_ini(body, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
    }

    for (const auto& [section, body] : tree) {
      if (!body.data().empty() && body.empty())
        throw ConfigError(source + ": key '" + section + "' must appear inside a section");
      auto sec = handlers.find(section);
      if (sec == handlers.end()) throw ConfigError(source + ": unknown section [" + section + "]");
      for (const auto& [key, value] : body) {
        auto h = sec->second.find(key);
        if (h == sec->second.end()) throw ConfigError(source + ": unknown key '" + key + "' in [" + section + "]");
        h->second(value.data(), "[" + section + "] " + key);
      }
    }
    try {
      cfg.finalize();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(source + ": " + e.what());
    }
    return cfg;
  }

 private:
  using Setter = std::function<void(const std::string&, const std::string&)>;
  using Table = std::map<std::string, std::map<std::string, Setter>>;

  static Setter num(double& target) {
    return [&target](const std::string& v, const std::string& k) { target = detail::parse_double(v, k); };
  }
  static Setter integer(int& target) {
    return [&target](const std::string& v, const std::string& k) {
      auto x = detail::parse_int(v, k);
      if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
        throw ConfigError("value out of range for " + k);
      target = static_cast<int>(x);
    };
  }

  static Table bind(RunConfig& c) {
    Table t;
    auto& scene = t["scene"];
    scene["side_length"] = num(c.scene.side);
    scene["users"] = [&c](const std::string& v, const std::string& k) { c.scene.users = parse_points(v, k); };
    scene["min_height"] = num(c.scene.min_height);
    scene["uav_start"] = [&c](const std::string& v, const std::string& k) {
      auto xs = parse_doubles(v, k);
      if (xs.size() != 3) throw ConfigError(k + " needs three values: x, y, h");
      c.scene.uav_start = {xs[0], xs[1], xs[2]};
    };
    scene["step_x"] = num(c.scene.step_x);
    scene["step_y"] = num(c.scene.step_y);
    scene["step_h"] = num(c.scene.step_h);
    scene["alpha_step"] = num(c.scene.alpha_step);
    scene["alpha_floor"] = num(c.scene.alpha_floor);

    auto& ch = t["channel"];
    ch["path_loss_intercept"] = num(c.channel_input.intercept);
    ch["path_loss_exponent"] = num(c.channel_input.exponent);
    ch["noise_dbm"] = num(c.channel_input.noise_dbm);
    ch["tx_power_dbm"] = num(c.channel_input.tx_power_dbm);
    ch["antennas"] = [&c](const std::string& v, const std::string& k) {
      auto parts = detail::split(v, 'x');
      if (parts.size() != 2) throw ConfigError(k + " must look like NxM");
      c.channel_input.antennas_uav = static_cast<int>(detail::parse_int(parts[0], k));
      c.channel_input.antennas_ue = static_cast<int>(detail::parse_int(parts[1], k));
    };
    ch["bandwidth_hz"] = num(c.channel_input.bandwidth_hz);

    auto& n = t["neat"];
    n["population_size"] = integer(c.neat.population_size);
    n["weight_min"] = num(c.neat.weight_min);
    n["weight_max"] = num(c.neat.weight_max);
    n["weight_mutation_rate"] = num(c.neat.weight_mutation_rate);
    n["bias_mutation_rate"] = num(c.neat.bias_mutation_rate);
    n["node_add_prob"] = num(c.neat.node_add_prob);
    n["node_delete_prob"] = num(c.neat.node_delete_prob);
    n["conn_add_prob"] = num(c.neat.conn_add_prob);
    n["conn_delete_prob"] = num(c.neat.conn_delete_prob);
    n["compat_threshold"] = num(c.neat.compat_threshold);
    n["c_excess"] = num(c.neat.c_excess);
    n["c_disjoint"] = num(c.neat.c_disjoint);
    n["c_weight"] = num(c.neat.c_weight);
    n["elite_count"] = integer(c.neat.elite_count);
    n["perturb_stddev"] = num(c.neat.perturb_stddev);
    n["crossover_prob"] = num(c.neat.crossover_prob);
    n["stagnation_generations"] = integer(c.neat.stagnation_generations);
    n["add_connection_attempts"] = integer(c.neat.add_connection_attempts);

    auto& r = t["reward"];
    r["w_rate"] = num(c.reward.w_rate);
    r["w_satisfied"] = num(c.reward.w_satisfied);
    r["w_unsatisfied"] = num(c.reward.w_unsatisfied);
    r["min_se"] = num(c.reward.min_se);

    auto& s = t["schedule"];
    s["generations"] = integer(c.schedule.generations);
    s["steps_per_episode"] = integer(c.schedule.steps_per_episode);
    s["seeds"] = [&c](const std::string& v, const std::string& k) {
      c.schedule.seeds.clear();
      if (detail::trim(v).empty()) return;
      for (const auto& part : detail::split(v, ',')) {
        auto x = detail::parse_int(part, k);
        if (x < 0) throw ConfigError("seeds must be non-negative in " + k);
        c.schedule.seeds.push_back(static_cast<std::uint64_t>(x));
      }
    };

    auto& sw = t["sweep"];
    sw["p_min_dbm"] = num(c.sweep.p_min_dbm);
    sw["p_max_dbm"] = num(c.sweep.p_max_dbm);
    sw["step_dbm"] = num(c.sweep.step_dbm);
    sw["p_static_dbm"] = num(c.sweep.p_static_dbm);

    auto& run = t["run"];
    run["output_dir"] = [&c](const std::string& v, const std::string&) { c.output_dir = detail::trim(v); };
    run["master_seed"] = [&c](const std::string& v, const std::string& k) {
      auto x = detail::parse_int(v, k);
      if (x < 0) throw ConfigError(k + " must be non-negative");
      c.master_seed = static_cast<std::uint64_t>(x);
    };
    run["threads"] = integer(c.threads);
    return t;
  }
};

inline RunConfig parse_config(const std::string& text, const std::string& source = "<config>") {
  std::istringstream in(text);
  return ConfigReader{}.read(in, source);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return ConfigReader{}.read(in, path);
}

// Writes every key, so loading the output reproduces the configuration.
inline std::string serialize_config(const RunConfig& c) {
  using detail::format_double;
  std::ostringstream os;
  os << "[scene]\n";
  os << "side_length = " << format_double(c.scene.side) << '\n';
  os << "users = ";
  for (std::size_t i = 0; i < c.scene.users.size(); ++i)
    os << (i ? ", " : "") << '(' << format_double(c.scene.users[i].x) << ", " << format_double(c.scene.users[i].y)
       << ')';
  os << '\n';
  os << "min_height = " << format_double(c.scene.min_height) << '\n';
  os << "uav_start = " << format_double(c.scene.uav_start.x) << ", " << format_double(c.scene.uav_start.y) << ", "
     << format_double(c.scene.uav_start.h) << '\n';
  os << "step_x = " << format_double(c.scene.step_x) << '\n';
  os << "step_y = " << format_double(c.scene.step_y) << '\n';
  os << "step_h = " << format_double(c.scene.step_h) << '\n';
  os << "alpha_step = " << format_double(c.scene.alpha_step) << '\n';
  os << "alpha_floor = " << format_double(c.scene.alpha_floor) << '\n';

  os << "\n[channel]\n";
  os << "path_loss_intercept = " << format_double(c.channel_input.intercept) << '\n';
  os << "path_loss_exponent = " << format_double(c.channel_input.exponent) << '\n';
  os << "noise_dbm = " << format_double(c.channel_input.noise_dbm) << '\n';
  os << "tx_power_dbm = " << format_double(c.channel_input.tx_power_dbm) << '\n';
  os << "antennas = " << c.channel_input.antennas_uav << 'x' << c.channel_input.antennas_ue << '\n';
  os << "bandwidth_hz = " << format_double(c.channel_input.bandwidth_hz) << '\n';

  os << "\n[neat]\n";
  os << "population_size = " << c.neat.population_size << '\n';
  os << "weight_min = " << format_double(c.neat.weight_min) << '\n';
  os << "weight_max = " << format_double(c.neat.weight_max) << '\n';
  os << "weight_mutation_rate = " << format_double(c.neat.weight_mutation_rate) << '\n';
  os << "bias_mutation_rate = " << format_double(c.neat.bias_mutation_rate) << '\n';
  os << "node_add_prob = " << format_double(c.neat.node_add_prob) << '\n';
  os << "node_delete_prob = " << format_double(c.neat.node_delete_prob) << '\n';
  os << "conn_add_prob = " << format_double(c.neat.conn_add_prob) << '\n';
  os << "conn_delete_prob = " << format_double(c.neat.conn_delete_prob) << '\n';
  os << "compat_threshold = " << format_double(c.neat.compat_threshold) << '\n';
  os << "c_excess = " << format_double(c.neat.c_excess) << '\n';
  os << "c_disjoint = " << format_double(c.neat.c_disjoint) << '\n';
  os << "c_weight = " << format_double(c.neat.c_weight) << '\n';
  os << "elite_count = " << c.neat.elite_count << '\n';
  os << "perturb_stddev = " << format_double(c.neat.perturb_stddev) << '\n';
  os << "crossover_prob = " << format_double(c.neat.crossover_prob) << '\n';
  os << "stagnation_generations = " << c.neat.stagnation_generations << '\n';
  os << "add_connection_attempts = " << c.neat.add_connection_attempts << '\n';

  os << "\n[reward]\n";
  os << "w_rate = " << format_double(c.reward.w_rate) << '\n';
  os << "w_satisfied = " << format_double(c.reward.w_satisfied) << '\n';
  os << "w_unsatisfied = " << format_double(c.reward.w_unsatisfied) << '\n';
  os << "min_se = " << format_double(c.reward.min_se) << '\n';

  os << "\n[schedule]\n";
  os << "generations = " << c.schedule.generations << '\n';
  os << "steps_per_episode = " << c.schedule.steps_per_episode << '\n';
  os << "seeds = ";
  for (std::size_t i = 0; i < c.schedule.seeds.size(); ++i) os << (i ? ", " : "") << c.schedule.seeds[i];
  os << '\n';

  os << "\n[sweep]\n";
  os << "p_min_dbm = " << format_double(c.sweep.p_min_dbm) << '\n';
  os << "p_max_dbm = " << format_double(c.sweep.p_max_dbm) << '\n';
  os << "step_dbm = " << format_double(c.sweep.step_dbm) << '\n';
  os << "p_static_dbm = " << format_double(c.sweep.p_static_dbm) << '\n';

  os << "\n[run]\n";
  os << "output_dir = " << c.output_dir << '\n';
  os << "master_seed = " << c.master_seed << '\n';
  os << "threads = " << c.threads << '\n';
  return os.str();
}

}  // namespace uavneat::io

#pragma once

// YAML configuration files. Keys mirror SimConfig field names; anything
// missing keeps its default and anything unknown is rejected.

#include <yaml-cpp/yaml.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "wbasn/types.hpp"

namespace wbasn {

enum class ConfigFileErrorKind { ParseError, UnknownKey, Io };

class ConfigFileError : public std::runtime_error {
 public:
  ConfigFileError(ConfigFileErrorKind kind, std::string key, int line, const std::string& what)
      : std::runtime_error(what), kind_(kind), key_(std::move(key)), line_(line) {}

  ConfigFileErrorKind kind() const { return kind_; }
  const std::string& key() const { return key_; }
  int line() const { return line_; }  // 1-based, 0 when unknown

 private:
  ConfigFileErrorKind kind_;
  std::string key_;
  int line_;
};

namespace detail {

inline int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

class Reader {
 public:
  explicit Reader(const YAML::Node& map, std::string prefix = {}) : map_(map), prefix_(std::move(prefix)) {
    if (!map_.IsMap())
      throw ConfigFileError(ConfigFileErrorKind::ParseError, prefix_, line_of(map_),
                            "expected a mapping" + (prefix_.empty() ? std::string() : " for '" + prefix_ + "'"));
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    const YAML::Node n = map_[key];
    if (!n) return;
    try {
      out = n.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigFileError(ConfigFileErrorKind::ParseError, full(key), line_of(n),
                            "line " + std::to_string(line_of(n)) + ": bad value for '" + full(key) + "'");
    }
  }

  /// Returns the child mapping if present, marking the key as known.
  std::optional<YAML::Node> child(const char* key) {
    seen_.insert(key);
    const YAML::Node n = map_[key];
    if (!n) return std::nullopt;
    return n;
  }

  std::string full(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  void reject_unknown() const {
    for (const auto& kv : map_) {
      const std::string key = kv.first.as<std::string>();
      if (!seen_.count(key))
        throw ConfigFileError(ConfigFileErrorKind::UnknownKey, full(key), line_of(kv.first),
                              "line " + std::to_string(line_of(kv.first)) + ": unknown key '" + full(key) + "'");
    }
  }

 private:
  YAML::Node map_;
  std::string prefix_;
  std::set<std::string> seen_;
};

inline SimConfig config_from_yaml(const YAML::Node& root) {
  SimConfig cfg;
  if (!root || root.IsNull()) return cfg;
  Reader top(root);

  if (auto n = top.child("area")) {
    Reader r(*n, "area");
    r.read("width", cfg.area.width);
    r.read("height", cfg.area.height);
    r.reject_unknown();
  }
  top.read("node_count", cfg.node_count);
  if (auto n = top.child("sink_position")) {
    Reader r(*n, "sink_position");
    r.read("x", cfg.sink_position.x);
    r.read("y", cfg.sink_position.y);
    r.reject_unknown();
  }
  if (auto n = top.child("initial_energy")) {
    if (n->IsMap()) {
      Reader r(*n, "initial_energy");
      PerClassEnergy pc;
      r.read("parent", pc.parent);
      r.read("level1", pc.level1);
      r.read("level2", pc.level2);
      r.reject_unknown();
      cfg.initial_energy.per_class = pc;
    } else {
      top.read("initial_energy", cfg.initial_energy.scalar);
      cfg.initial_energy.per_class.reset();
    }
  }
  top.read("rounds", cfg.rounds);
  top.read("mobility_period", cfg.mobility_period);
  if (auto n = top.child("radio")) {
    Reader r(*n, "radio");
    r.read("e_elec", cfg.radio.e_elec);
    r.read("e_amp", cfg.radio.e_amp);
    r.read("packet_bits", cfg.radio.packet_bits);
    r.read("path_loss_exponent", cfg.radio.path_loss_exponent);
    r.reject_unknown();
  }
  if (auto n = top.child("thermal")) {
    Reader r(*n, "thermal");
    r.read("enabled", cfg.thermal.enabled);
    r.read("t_max", cfg.thermal.t_max);
    r.read("dt_tx", cfg.thermal.dt_tx);
    r.read("dt_rx", cfg.thermal.dt_rx);
    r.read("dt_cool", cfg.thermal.dt_cool);
    r.read("cooloff_rounds", cfg.thermal.cooloff_rounds);
    r.read("link_hot_threshold", cfg.thermal.link_hot_threshold);
    r.reject_unknown();
  }
  top.read("mu_max", cfg.mu_max);
  top.read("p_critical", cfg.p_critical);
  top.read("p_ondemand", cfg.p_ondemand);
  top.read("velocity", cfg.velocity);
  top.read("velocity_threshold", cfg.velocity_threshold);
  top.read("seed", cfg.seed);
  if (auto n = top.child("protocol")) {
    std::string name;
    top.read("protocol", name);
    auto p = parse_protocol(name);
    if (!p)
      throw ConfigFileError(ConfigFileErrorKind::ParseError, "protocol", line_of(*n),
                            "line " + std::to_string(line_of(*n)) + ": unknown protocol '" + name + "'");
    cfg.protocol = *p;
  }
  top.read("tx_range", cfg.tx_range);
  top.read("boosted_range", cfg.boosted_range);
  if (auto n = top.child("tier_split")) {
    Reader r(*n, "tier_split");
    TierSplit ts;
    r.read("parents", ts.parents);
    r.read("level1", ts.level1);
    r.read("level2", ts.level2);
    r.reject_unknown();
    cfg.tier_split = ts;
  }
  top.read("candidate_routes", cfg.candidate_routes);
  top.read("hold_limit", cfg.hold_limit);
  top.read("mobility_cost_factor", cfg.mobility_cost_factor);
  top.reject_unknown();
  return cfg;
}

}  // namespace detail

/// Parses configuration text. Throws ConfigFileError on syntax errors,
/// malformed values or unknown keys. Does not run validate_config.
inline SimConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    const int line = e.mark.line >= 0 ? e.mark.line + 1 : 0;
    throw ConfigFileError(ConfigFileErrorKind::ParseError, "", line,
                          "line " + std::to_string(line) + ": " + e.msg);
  }
  return detail::config_from_yaml(root);
}

inline SimConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigFileError(ConfigFileErrorKind::Io, "", 0, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigFileError& e) {
    throw ConfigFileError(e.kind(), e.key(), e.line(), path + ": " + e.what());
  }
}

/// Canonical text form: every field, fixed order, round-trippable doubles.
inline std::string format_config(const SimConfig& cfg) {
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
  };
  std::ostringstream o;
  o << "area:\n  width: " << num(cfg.area.width) << "\n  height: " << num(cfg.area.height) << "\n";
  o << "node_count: " << cfg.node_count << "\n";
  o << "sink_position:\n  x: " << num(cfg.sink_position.x) << "\n  y: " << num(cfg.sink_position.y) << "\n";
  if (cfg.initial_energy.per_class) {
    const auto& pc = *cfg.initial_energy.per_class;
    o << "initial_energy:\n  parent: " << num(pc.parent) << "\n  level1: " << num(pc.level1)
      << "\n  level2: " << num(pc.level2) << "\n";
  } else {
    o << "initial_energy: " << num(cfg.initial_energy.scalar) << "\n";
  }
  o << "rounds: " << cfg.rounds << "\n";
  o << "mobility_period: " << cfg.mobility_period << "\n";
  o << "radio:\n  e_elec: " << num(cfg.radio.e_elec) << "\n  e_amp: " << num(cfg.radio.e_amp)
    << "\n  packet_bits: " << cfg.radio.packet_bits << "\n  path_loss_exponent: " << num(cfg.radio.path_loss_exponent)
    << "\n";
  const ThermalParams& t = cfg.thermal;
  o << "thermal:\n  enabled: " << (t.enabled ? "true" : "false") << "\n  t_max: " << num(t.t_max)
    << "\n  dt_tx: " << num(t.dt_tx) << "\n  dt_rx: " << num(t.dt_rx) << "\n  dt_cool: " << num(t.dt_cool)
    << "\n  cooloff_rounds: " << t.cooloff_rounds << "\n  link_hot_threshold: " << num(t.link_hot_threshold)
    << "\n";
  o << "mu_max: " << cfg.mu_max << "\n";
  o << "p_critical: " << num(cfg.p_critical) << "\n";
  o << "p_ondemand: " << num(cfg.p_ondemand) << "\n";
  o << "velocity: " << num(cfg.velocity) << "\n";
  o << "velocity_threshold: " << num(cfg.velocity_threshold) << "\n";
  o << "seed: " << cfg.seed << "\n";
  o << "protocol: " << to_string(cfg.protocol) << "\n";
  o << "tx_range: " << num(cfg.tx_range) << "\n";
  o << "boosted_range: " << num(cfg.boosted_range) << "\n";
  if (cfg.tier_split)
    o << "tier_split:\n  parents: " << cfg.tier_split->parents << "\n  level1: " << cfg.tier_split->level1
      << "\n  level2: " << cfg.tier_split->level2 << "\n";
  o << "candidate_routes: " << cfg.candidate_routes << "\n";
  o << "hold_limit: " << cfg.hold_limit << "\n";
  o << "mobility_cost_factor: " << num(cfg.mobility_cost_factor) << "\n";
  return o.str();
}

}  // namespace wbasn

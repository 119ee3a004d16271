#pragma once

// Shared domain types for the body-area network simulator: node classes,
// per-node state, radio/thermal constants, packets, routes and the run
// configuration together with its validation.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wbasn {

using NodeId = std::size_t;

/// The sink always occupies slot 0 of the node table.
inline constexpr NodeId kSinkId = 0;

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

enum class NodeClass { Sink, Parent, Level1Child, Level2Child };

enum class PacketKind { Normal, Critical, OnDemand };

enum class Protocol { MultiHop, Attempt, MAttempt };

inline std::string_view to_string(NodeClass c) {
  switch (c) {
    case NodeClass::Sink: return "sink";
    case NodeClass::Parent: return "parent";
    case NodeClass::Level1Child: return "level1";
    case NodeClass::Level2Child: return "level2";
  }
  return "?";
}

inline std::string_view to_string(PacketKind k) {
  switch (k) {
    case PacketKind::Normal: return "normal";
    case PacketKind::Critical: return "critical";
    case PacketKind::OnDemand: return "ondemand";
  }
  return "?";
}

inline std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::MultiHop: return "multihop";
    case Protocol::Attempt: return "attempt";
    case Protocol::MAttempt: return "m-attempt";
  }
  return "?";
}

/// Accepts the canonical lower-case names plus a few spellings people type.
inline std::optional<Protocol> parse_protocol(std::string_view name) {
  std::string s;
  for (char c : name) {
    if (c == '_' || c == ' ') c = '-';
    s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (s == "multihop" || s == "multi-hop") return Protocol::MultiHop;
  if (s == "attempt") return Protocol::Attempt;
  if (s == "m-attempt" || s == "mattempt") return Protocol::MAttempt;
  return std::nullopt;
}

// Route first-hop legality between tiers. Direct delivery to the sink by
// non-parent nodes is governed separately by the protocol (see routing).
inline bool tier_link_allowed(NodeClass from, NodeClass to) {
  switch (from) {
    case NodeClass::Parent: return to == NodeClass::Sink;
    case NodeClass::Level1Child: return to == NodeClass::Parent;
    case NodeClass::Level2Child: return to == NodeClass::Level1Child || to == NodeClass::Parent;
    case NodeClass::Sink: return false;
  }
  return false;
}

struct SensorNode {
  NodeId id = 0;
  NodeClass cls = NodeClass::Parent;
  Point position;
  double energy = 0.0;       // joules
  double temperature = 0.0;  // heat units
  double tx_range = 0.0;     // metres, normal multi-hop range
  double boosted_range = 0.0;
  std::optional<NodeId> parent;
  std::vector<NodeId> children;
  bool alive = true;
  int cooloff_remaining = 0;
  int cooloff_started = -1;  // round the current cool-off began
  std::optional<int> death_round;

  bool is_sink() const { return cls == NodeClass::Sink; }
  bool cooling() const { return cooloff_remaining > 0; }
  /// Able to transmit or receive this instant.
  bool available() const { return alive && !cooling(); }
};

struct RadioParams {
  double e_elec = 50e-9;   // J/bit
  double e_amp = 100e-12;  // J/bit/m^2
  int packet_bits = 512;
  double path_loss_exponent = 2.0;

  friend bool operator==(const RadioParams&, const RadioParams&) = default;
};

struct ThermalParams {
  bool enabled = true;
  double t_max = 5.0;
  double dt_tx = 0.2;
  double dt_rx = 0.1;
  double dt_cool = 0.5;
  int cooloff_rounds = 2;
  double link_hot_threshold = 4.0;

  friend bool operator==(const ThermalParams&, const ThermalParams&) = default;
};

struct Packet {
  std::uint64_t id = 0;
  NodeId source = 0;
  PacketKind kind = PacketKind::Normal;
  int size_bits = 0;
  int created_round = 0;

  bool priority() const { return kind != PacketKind::Normal; }
};

struct Route {
  std::vector<NodeId> hops;        // ends at the sink
  std::vector<double> distances;   // metres, one per hop

  std::size_t hop_count() const { return hops.size(); }
  NodeId first_hop() const { return hops.front(); }
  bool contains(NodeId n) const {
    for (NodeId h : hops)
      if (h == n) return true;
    return false;
  }
  friend bool operator==(const Route&, const Route&) = default;
};

struct PerClassEnergy {
  double parent = 10.0;
  double level1 = 5.0;
  double level2 = 1.0;

  friend bool operator==(const PerClassEnergy&, const PerClassEnergy&) = default;
};

/// Either one value for every node or a per-tier assignment.
struct InitialEnergy {
  double scalar = 0.5;
  std::optional<PerClassEnergy> per_class;

  double for_class(NodeClass c) const {
    if (!per_class) return scalar;
    switch (c) {
      case NodeClass::Parent: return per_class->parent;
      case NodeClass::Level1Child: return per_class->level1;
      case NodeClass::Level2Child: return per_class->level2;
      case NodeClass::Sink: return 0.0;
    }
    return scalar;
  }
  friend bool operator==(const InitialEnergy&, const InitialEnergy&) = default;
};

struct TierSplit {
  int parents = 3;
  int level1 = 3;
  int level2 = 4;

  int total() const { return parents + level1 + level2; }
  friend bool operator==(const TierSplit&, const TierSplit&) = default;
};

/// 30% / 30% / remainder, which gives the 3/3/4 prototype for ten nodes.
inline TierSplit default_tier_split(int node_count) {
  TierSplit s;
  s.parents = std::max(1, static_cast<int>(std::lround(0.3 * node_count)));
  s.level1 = std::max(0, std::min(node_count - s.parents,
                                  static_cast<int>(std::lround(0.3 * node_count))));
  s.level2 = node_count - s.parents - s.level1;
  return s;
}

struct Area {
  double width = 5.0;
  double height = 5.0;

  friend bool operator==(const Area&, const Area&) = default;
};

struct SimConfig {
  Area area;
  int node_count = 10;
  Point sink_position{2.5, 2.5};
  InitialEnergy initial_energy;
  int rounds = 5000;
  int mobility_period = 5;
  RadioParams radio;
  ThermalParams thermal;
  int mu_max = 3;
  double p_critical = 0.05;
  double p_ondemand = 0.02;
  double velocity = 0.5;            // m/s, displacement bound per mobility event
  double velocity_threshold = 1.0;  // m/s
  std::uint64_t seed = 1;
  Protocol protocol = Protocol::Attempt;

  double tx_range = 2.5;
  double boosted_range = 10.0;
  std::optional<TierSplit> tier_split;
  int candidate_routes = 2;
  int hold_limit = 3;
  double mobility_cost_factor = 1e-6;  // joules per unit of mobility cost

  TierSplit effective_split() const { return tier_split ? *tier_split : default_tier_split(node_count); }

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

enum class ConfigErrorCode {
  NegativeEnergy,
  SinkOutsideArea,
  ZeroNodes,
  BadProbability,
  BadArea,
  BadRadio,
  BadThermal,
  BadRange,
  BadTierSplit,
  BadInteger,
  BadVelocity,
};

inline std::string_view to_string(ConfigErrorCode c) {
  switch (c) {
    case ConfigErrorCode::NegativeEnergy: return "NegativeEnergy";
    case ConfigErrorCode::SinkOutsideArea: return "SinkOutsideArea";
    case ConfigErrorCode::ZeroNodes: return "ZeroNodes";
    case ConfigErrorCode::BadProbability: return "BadProbability";
    case ConfigErrorCode::BadArea: return "BadArea";
    case ConfigErrorCode::BadRadio: return "BadRadio";
    case ConfigErrorCode::BadThermal: return "BadThermal";
    case ConfigErrorCode::BadRange: return "BadRange";
    case ConfigErrorCode::BadTierSplit: return "BadTierSplit";
    case ConfigErrorCode::BadInteger: return "BadInteger";
    case ConfigErrorCode::BadVelocity: return "BadVelocity";
  }
  return "?";
}

class ConfigError : public std::runtime_error {
 public:
  ConfigError(ConfigErrorCode code, std::string field, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + " (" + field + "): " + detail),
        code_(code),
        field_(std::move(field)) {}

  ConfigErrorCode code() const { return code_; }
  const std::string& field() const { return field_; }

 private:
  ConfigErrorCode code_;
  std::string field_;
};

/// Returns cfg unchanged when every invariant holds, throws ConfigError naming
/// the first offending field otherwise.
inline SimConfig validate_config(const SimConfig& cfg) {
  auto fail = [](ConfigErrorCode code, const char* field, const std::string& detail) {
    throw ConfigError(code, field, detail);
  };
  auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };

  if (cfg.node_count <= 0) fail(ConfigErrorCode::ZeroNodes, "node_count", "at least one sensor node is required");
  if (!finite_pos(cfg.area.width)) fail(ConfigErrorCode::BadArea, "area.width", "must be positive");
  if (!finite_pos(cfg.area.height)) fail(ConfigErrorCode::BadArea, "area.height", "must be positive");
  const Point s = cfg.sink_position;
  if (!(s.x >= 0.0 && s.x <= cfg.area.width && s.y >= 0.0 && s.y <= cfg.area.height))
    fail(ConfigErrorCode::SinkOutsideArea, "sink_position", "sink must lie inside the area");

  const InitialEnergy& e = cfg.initial_energy;
  if (e.per_class) {
    if (!(e.per_class->parent >= 0.0)) fail(ConfigErrorCode::NegativeEnergy, "initial_energy.parent", "must be >= 0");
    if (!(e.per_class->level1 >= 0.0)) fail(ConfigErrorCode::NegativeEnergy, "initial_energy.level1", "must be >= 0");
    if (!(e.per_class->level2 >= 0.0)) fail(ConfigErrorCode::NegativeEnergy, "initial_energy.level2", "must be >= 0");
  } else if (!(e.scalar >= 0.0)) {
    fail(ConfigErrorCode::NegativeEnergy, "initial_energy", "must be >= 0");
  }

  if (cfg.rounds < 0) fail(ConfigErrorCode::BadInteger, "rounds", "must be >= 0");
  if (cfg.mobility_period < 1) fail(ConfigErrorCode::BadInteger, "mobility_period", "must be >= 1");
  if (cfg.mu_max < 1) fail(ConfigErrorCode::BadInteger, "mu_max", "must be >= 1");
  if (cfg.candidate_routes < 1) fail(ConfigErrorCode::BadInteger, "candidate_routes", "must be >= 1");
  if (cfg.hold_limit < 0) fail(ConfigErrorCode::BadInteger, "hold_limit", "must be >= 0");

  auto prob = [&](double p, const char* field) {
    if (!(p >= 0.0 && p <= 1.0)) fail(ConfigErrorCode::BadProbability, field, "must lie in [0, 1]");
  };
  prob(cfg.p_critical, "p_critical");
  prob(cfg.p_ondemand, "p_ondemand");

  if (!(cfg.velocity >= 0.0) || !std::isfinite(cfg.velocity))
    fail(ConfigErrorCode::BadVelocity, "velocity", "must be finite and >= 0");
  if (!(cfg.velocity_threshold >= 0.0)) fail(ConfigErrorCode::BadVelocity, "velocity_threshold", "must be >= 0");
  if (!(cfg.mobility_cost_factor >= 0.0)) fail(ConfigErrorCode::BadVelocity, "mobility_cost_factor", "must be >= 0");

  const RadioParams& r = cfg.radio;
  if (!finite_pos(r.e_elec)) fail(ConfigErrorCode::BadRadio, "radio.e_elec", "must be > 0");
  if (!finite_pos(r.e_amp)) fail(ConfigErrorCode::BadRadio, "radio.e_amp", "must be > 0");
  if (r.packet_bits <= 0 || r.packet_bits > 512)
    fail(ConfigErrorCode::BadRadio, "radio.packet_bits", "must lie in (0, 512]");
  if (!finite_pos(r.path_loss_exponent)) fail(ConfigErrorCode::BadRadio, "radio.path_loss_exponent", "must be > 0");

  const ThermalParams& t = cfg.thermal;
  if (!(t.link_hot_threshold > 0.0)) fail(ConfigErrorCode::BadThermal, "thermal.link_hot_threshold", "must be > 0");
  if (!(t.t_max > t.link_hot_threshold))
    fail(ConfigErrorCode::BadThermal, "thermal.t_max", "must exceed link_hot_threshold");
  if (!(t.dt_tx >= 0.0)) fail(ConfigErrorCode::BadThermal, "thermal.dt_tx", "must be >= 0");
  if (!(t.dt_rx >= 0.0)) fail(ConfigErrorCode::BadThermal, "thermal.dt_rx", "must be >= 0");
  if (!(t.dt_cool >= 0.0)) fail(ConfigErrorCode::BadThermal, "thermal.dt_cool", "must be >= 0");
  if (t.cooloff_rounds < 1) fail(ConfigErrorCode::BadThermal, "thermal.cooloff_rounds", "must be >= 1");

  if (!finite_pos(cfg.tx_range) || cfg.tx_range > 10.0)
    fail(ConfigErrorCode::BadRange, "tx_range", "must lie in (0, 10] m");
  if (!finite_pos(cfg.boosted_range) || cfg.boosted_range > 10.0 || cfg.boosted_range < cfg.tx_range)
    fail(ConfigErrorCode::BadRange, "boosted_range", "must lie in [tx_range, 10] m");

  if (cfg.tier_split) {
    const TierSplit& ts = *cfg.tier_split;
    if (ts.parents < 1 || ts.level1 < 0 || ts.level2 < 0 || ts.total() != cfg.node_count)
      fail(ConfigErrorCode::BadTierSplit, "tier_split", "needs >= 1 parent and must sum to node_count");
  }
  return cfg;
}

}  // namespace wbasn

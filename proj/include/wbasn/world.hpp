#pragma once

// Mutable simulation state and the topology builder. Everything a run needs
// lives in one World value so independent runs never share anything.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "wbasn/rng.hpp"
#include "wbasn/types.hpp"

namespace wbasn {

struct NeighborTable {
  NodeId owner = 0;
  std::vector<std::pair<NodeId, double>> neighbors;  // (id, metres)
  int hop_count_to_sink = kUnreachable;
  std::vector<Route> candidate_routes;

  bool reachable() const { return hop_count_to_sink != kUnreachable; }
};

struct Schedule {
  int round = 0;
  std::vector<std::pair<int, NodeId>> slots;  // (slot index, owner)

  /// Slot index owned by `node`, or -1.
  int slot_of(NodeId node) const {
    for (const auto& [slot, owner] : slots)
      if (owner == node) return slot;
    return -1;
  }
};

struct LinkHeatState {
  std::pair<NodeId, NodeId> link;
  double heat = 0.0;
  bool hot = false;
  std::optional<int> marked_round;
};

/// Links marked as hot-spots after a returned packet, keyed (from, to).
class HotLinks {
 public:
  void mark(NodeId from, NodeId to, int round) { marks_[{from, to}] = round; }

  bool marked(NodeId from, NodeId to, int round, int lifetime) const {
    auto it = marks_.find({from, to});
    return it != marks_.end() && round <= it->second + lifetime;
  }

  std::optional<int> marked_round(NodeId from, NodeId to) const {
    auto it = marks_.find({from, to});
    if (it == marks_.end()) return std::nullopt;
    return it->second;
  }

  /// Drops marks whose lifetime ends with `round`.
  void expire(int round, int lifetime) {
    std::erase_if(marks_, [&](const auto& kv) { return round >= kv.second + lifetime; });
  }

  std::size_t size() const { return marks_.size(); }
  const std::map<std::pair<NodeId, NodeId>, int>& all() const { return marks_; }

 private:
  std::map<std::pair<NodeId, NodeId>, int> marks_;
};

enum class DropReason { NoRoute, AllLinksHot, RangeExceeded, DeadNextHop, ThermalReturn };
inline constexpr std::size_t kDropReasonCount = 5;

inline std::string_view to_string(DropReason r) {
  switch (r) {
    case DropReason::NoRoute: return "NoRoute";
    case DropReason::AllLinksHot: return "AllLinksHot";
    case DropReason::RangeExceeded: return "RangeExceeded";
    case DropReason::DeadNextHop: return "DeadNextHop";
    case DropReason::ThermalReturn: return "ThermalReturn";
  }
  return "?";
}

using DropCounts = std::array<std::uint64_t, kDropReasonCount>;

inline std::uint64_t total(const DropCounts& d) { return std::accumulate(d.begin(), d.end(), std::uint64_t{0}); }

enum class ChargeKind { Transmit, Receive, Hello, Join, Mobility };

struct Charge {
  NodeId node = 0;
  ChargeKind kind = ChargeKind::Transmit;
  double requested = 0.0;
  double applied = 0.0;
};

enum class HopKind { Forward, Direct, Return };

/// One over-the-air data packet transfer, with the link state observed at
/// send time. Audits consume these.
struct HopRecord {
  NodeId from = 0;
  NodeId to = 0;
  std::uint64_t packet = 0;
  PacketKind kind = PacketKind::Normal;
  HopKind hop = HopKind::Forward;
  bool link_marked = false;
  double receiver_temperature = 0.0;
  bool from_available = true;
  bool to_available = true;
  int slot = -1;  // TDMA slot of final-hop Normal deliveries
};

struct Delivery {
  Packet packet;
  int hops = 0;
  NodeId final_hop = 0;
  int slot = -1;
};

struct InFlight {
  Packet packet;
  int held_rounds = 0;
  int hops = 0;
  int attempted_round = -1;
};

struct Handover {
  NodeId child = 0;
  std::optional<NodeId> old_parent;
  NodeId new_parent = 0;
};

struct MobilityEvent {
  int round = 0;
  std::vector<std::tuple<NodeId, Point, Point>> moved;
  std::vector<Handover> handovers;
  std::vector<std::pair<NodeId, NodeId>> rejections;  // (child, rejecting parent)
  std::vector<NodeId> orphaned;
};

/// Per-round event log, cleared at the start of every round.
struct RoundLog {
  std::vector<Charge> charges;
  std::vector<HopRecord> hops;
  std::vector<Delivery> deliveries;
  std::vector<std::pair<std::uint64_t, DropReason>> drops;
  std::vector<Packet> generated;
  std::optional<MobilityEvent> mobility;
  bool discovery_ran = false;
  bool schedule_rebuilt = false;

  void clear() { *this = RoundLog{}; }
};

struct Counters {
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  DropCounts dropped{};
  std::uint64_t handovers = 0;
  std::uint64_t delivered_hops = 0;
};

struct World {
  SimConfig config;
  std::vector<SensorNode> nodes;  // nodes[0] is the sink
  std::vector<NeighborTable> tables;
  Schedule schedule;
  HotLinks hot_links;
  std::vector<std::deque<InFlight>> queues;
  Rng rng;           // topology placement
  Rng traffic_rng;   // packet generation and on-demand requests
  Rng mobility_rng;  // repositioning
  int round = 0;
  bool epoch_dirty = true;
  std::vector<NodeId> last_discovery_excluded;
  std::vector<NodeId> last_schedule_owners;
  std::uint64_t next_packet_id = 1;
  Counters counters;
  RoundLog log;

  std::size_t sensor_count() const { return nodes.size() - 1; }
  const SensorNode& sink() const { return nodes[kSinkId]; }

  std::size_t alive_count() const {
    return static_cast<std::size_t>(std::count_if(nodes.begin() + 1, nodes.end(), [](const auto& n) { return n.alive; }));
  }

  double total_energy() const {
    double e = 0.0;
    for (std::size_t i = 1; i < nodes.size(); ++i) e += nodes[i].energy;
    return e;
  }

  std::size_t held_count() const {
    std::size_t n = 0;
    for (const auto& q : queues) n += q.size();
    return n;
  }

  double link_distance(NodeId a, NodeId b) const { return distance(nodes[a].position, nodes[b].position); }
};

inline LinkHeatState link_state(const World& w, NodeId from, NodeId to) {
  LinkHeatState s;
  s.link = {from, to};
  s.heat = w.nodes[to].is_sink() ? 0.0 : w.nodes[to].temperature;
  s.marked_round = w.hot_links.marked_round(from, to);
  const bool marked = w.hot_links.marked(from, to, w.round, w.config.thermal.cooloff_rounds);
  s.hot = marked || (w.config.thermal.enabled && s.heat > w.config.thermal.link_hot_threshold);
  return s;
}

/// Places nodes uniformly in the area and assigns tiers by distance rank to
/// the sink: nearest become parents, then first-level, then second-level
/// children.
inline World build_topology(const SimConfig& cfg, std::uint64_t rng_seed) {
  World w;
  w.config = cfg;
  w.rng = Rng(rng_seed);
  w.traffic_rng = Rng(rng_seed ^ 0x9E3779B97F4A7C15ULL);
  w.mobility_rng = Rng(rng_seed ^ 0xC2B2AE3D27D4EB4FULL);

  SensorNode sink;
  sink.id = kSinkId;
  sink.cls = NodeClass::Sink;
  sink.position = cfg.sink_position;
  sink.tx_range = cfg.boosted_range;
  sink.boosted_range = cfg.boosted_range;
  w.nodes.push_back(sink);

  for (int i = 0; i < cfg.node_count; ++i) {
    SensorNode n;
    n.id = static_cast<NodeId>(i + 1);
    n.position.x = w.rng.uniform(0.0, cfg.area.width);
    n.position.y = w.rng.uniform(0.0, cfg.area.height);
    n.tx_range = cfg.tx_range;
    n.boosted_range = cfg.boosted_range;
    w.nodes.push_back(n);
  }

  std::vector<NodeId> order(cfg.node_count);
  std::iota(order.begin(), order.end(), NodeId{1});
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return distance(w.nodes[a].position, cfg.sink_position) < distance(w.nodes[b].position, cfg.sink_position);
  });
  const TierSplit split = cfg.effective_split();
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    SensorNode& n = w.nodes[order[rank]];
    const int r = static_cast<int>(rank);
    if (r < split.parents)
      n.cls = NodeClass::Parent;
    else if (r < split.parents + split.level1)
      n.cls = NodeClass::Level1Child;
    else
      n.cls = NodeClass::Level2Child;
    n.energy = cfg.initial_energy.for_class(n.cls);
    if (n.energy <= 0.0) {
      n.alive = false;
      n.death_round = 0;
    }
  }

  w.tables.resize(w.nodes.size());
  w.queues.resize(w.nodes.size());
  return w;
}

/// Canonical text dump of the node table, used to check determinism.
inline std::string serialize_nodes(const World& w) {
  std::string out;
  char buf[256];
  for (const auto& n : w.nodes) {
    std::snprintf(buf, sizeof buf, "%zu %s %.17g %.17g %.17g %.17g %d %d", n.id, std::string(to_string(n.cls)).c_str(),
                  n.position.x, n.position.y, n.energy, n.temperature, n.alive ? 1 : 0, n.cooloff_remaining);
    out += buf;
    out += n.parent ? " p" + std::to_string(*n.parent) : std::string(" p-");
    for (NodeId c : n.children) out += " c" + std::to_string(c);
    out += '\n';
  }
  return out;
}

}  // namespace wbasn

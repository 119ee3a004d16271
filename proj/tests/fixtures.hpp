#pragma once

// Hand-built worlds for tests that need exact geometry.

#include <vector>

#include "wbasn/wbasn.hpp"

namespace wbasn::testing {

struct Placement {
  NodeClass cls;
  Point position;
};

/// Sink at cfg.sink_position, then one sensor per placement, ids from 1.
inline World make_world(SimConfig cfg, const std::vector<Placement>& sensors) {
  cfg.node_count = static_cast<int>(sensors.size());
  World w;
  w.config = cfg;
  w.rng = Rng(cfg.seed);
  w.traffic_rng = Rng(cfg.seed ^ 0x9E3779B97F4A7C15ULL);
  w.mobility_rng = Rng(cfg.seed ^ 0xC2B2AE3D27D4EB4FULL);
  SensorNode sink;
  sink.id = kSinkId;
  sink.cls = NodeClass::Sink;
  sink.position = cfg.sink_position;
  sink.tx_range = cfg.boosted_range;
  sink.boosted_range = cfg.boosted_range;
  w.nodes.push_back(sink);
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    SensorNode n;
    n.id = i + 1;
    n.cls = sensors[i].cls;
    n.position = sensors[i].position;
    n.tx_range = cfg.tx_range;
    n.boosted_range = cfg.boosted_range;
    n.energy = cfg.initial_energy.for_class(n.cls);
    w.nodes.push_back(n);
  }
  w.tables.resize(w.nodes.size());
  w.queues.resize(w.nodes.size());
  return w;
}

inline Packet make_packet(std::uint64_t id, NodeId src, PacketKind kind, int round = 1, int bits = 512) {
  Packet p;
  p.id = id;
  p.source = src;
  p.kind = kind;
  p.size_bits = bits;
  p.created_round = round;
  return p;
}

/// Config with traffic, mobility and heating switched off; tests opt back in.
inline SimConfig quiet_config() {
  SimConfig cfg;
  cfg.p_critical = 0.0;
  cfg.p_ondemand = 0.0;
  cfg.sink_position = {0.0, 0.0};
  cfg.area = {10.0, 10.0};
  return cfg;
}

}  // namespace wbasn::testing

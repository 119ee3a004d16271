#pragma once

// Node temperature, cool-off and link hot-spot bookkeeping. Temperature rises
// linearly per packet handled and decays by a fixed amount every round.

#include <algorithm>

#include "wbasn/energy.hpp"
#include "wbasn/world.hpp"

namespace wbasn {

enum class ThermalEvent { Transmit, Receive, Idle };

inline void apply_heat(SensorNode& node, ThermalEvent event, const ThermalParams& thermal) {
  if (!thermal.enabled || node.is_sink()) return;
  switch (event) {
    case ThermalEvent::Transmit: node.temperature += thermal.dt_tx; break;
    case ThermalEvent::Receive: node.temperature += thermal.dt_rx; break;
    case ThermalEvent::Idle: node.temperature = std::max(0.0, node.temperature - thermal.dt_cool); break;
  }
}

inline SensorNode heat_on_event(SensorNode node, ThermalEvent event, const ThermalParams& thermal) {
  apply_heat(node, event, thermal);
  return node;
}

/// Starts a cool-off when the node is at or above its threshold. Returns
/// true when a new cool-off began.
inline bool enter_cooloff_if_hot(SensorNode& node, const ThermalParams& thermal, int round) {
  if (!thermal.enabled || !node.alive || node.is_sink()) return false;
  if (node.temperature >= thermal.t_max && node.cooloff_remaining == 0) {
    node.cooloff_remaining = thermal.cooloff_rounds;
    node.cooloff_started = round;
    return true;
  }
  return false;
}

inline SensorNode check_threshold(SensorNode node, const ThermalParams& thermal, int round = 0) {
  enter_cooloff_if_hot(node, thermal, round);
  return node;
}

/// End-of-round countdown. A cool-off that began this round is not counted
/// down until the next one. Returns true when the node became usable again.
inline bool tick_cooloff(SensorNode& node, int round) {
  if (node.cooloff_remaining == 0 || node.cooloff_started == round) return false;
  --node.cooloff_remaining;
  return node.cooloff_remaining == 0;
}

// --- accounting shared by every module that spends energy --------------

inline double charge(World& w, NodeId id, ChargeKind kind, double joules) {
  SensorNode& n = w.nodes[id];
  if (n.is_sink() || !n.alive) return 0.0;
  const double applied = charge_node(n, joules, w.round);
  w.log.charges.push_back({id, kind, joules, applied});
  return applied;
}

/// Transmission of one frame of `bits` over `d` metres: energy plus heat.
inline void radio_transmit(World& w, NodeId id, double bits, double d, ChargeKind kind = ChargeKind::Transmit) {
  charge(w, id, kind, transmit_energy(bits, d, w.config.radio));
  apply_heat(w.nodes[id], ThermalEvent::Transmit, w.config.thermal);
}

inline void radio_receive(World& w, NodeId id, double bits, ChargeKind kind = ChargeKind::Receive) {
  charge(w, id, kind, receive_energy(bits, w.config.radio));
  apply_heat(w.nodes[id], ThermalEvent::Receive, w.config.thermal);
}

/// The hot node sends the packet straight back over the same link and the
/// sender records the link as a hot-spot. The hot node then enters its
/// cool-off; the caller decides what the sender does with the packet.
inline void return_packet(World& w, NodeId sender, NodeId hot_node, const Packet& packet, bool mark_link) {
  const double d = w.link_distance(sender, hot_node);
  HopRecord rec;
  rec.from = hot_node;
  rec.to = sender;
  rec.packet = packet.id;
  rec.kind = packet.kind;
  rec.hop = HopKind::Return;
  rec.link_marked = w.hot_links.marked(hot_node, sender, w.round, w.config.thermal.cooloff_rounds);
  rec.receiver_temperature = w.nodes[sender].temperature;
  rec.from_available = w.nodes[hot_node].available();
  rec.to_available = w.nodes[sender].available();
  w.log.hops.push_back(rec);
  radio_transmit(w, hot_node, packet.size_bits, d);
  enter_cooloff_if_hot(w.nodes[hot_node], w.config.thermal, w.round);
  if (mark_link) w.hot_links.mark(sender, hot_node, w.round);
}

/// Number of links currently carrying a hot-spot mark.
inline std::size_t active_hot_links(const World& w) {
  std::size_t n = 0;
  for (const auto& [link, marked] : w.hot_links.all())
    if (w.round <= marked + w.config.thermal.cooloff_rounds) ++n;
  return n;
}

}  // namespace wbasn

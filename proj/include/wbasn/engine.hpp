#pragma once

// Round loop: mobility, discovery, scheduling, traffic, dispatch, cooling,
// death bookkeeping and metrics, in that order.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <tuple>
#include <vector>

#include "wbasn/energy.hpp"
#include "wbasn/mobility.hpp"
#include "wbasn/routing.hpp"
#include "wbasn/tdma.hpp"
#include "wbasn/thermal.hpp"
#include "wbasn/world.hpp"

namespace wbasn {

struct MetricsRow {
  int round = 0;
  std::size_t alive = 0;
  std::size_t dead = 0;
  double total_energy = 0.0;
  std::uint64_t generated = 0;  // cumulative
  std::uint64_t received = 0;   // cumulative
  DropCounts dropped{};         // cumulative, by reason
  double pdr = 0.0;
  std::size_t hot_links = 0;    // marks active at end of round
  std::size_t handovers = 0;    // this round
  std::size_t held = 0;         // buffered at end of round

  std::uint64_t dropped_total() const { return total(dropped); }
};

struct RunSummary {
  Protocol protocol = Protocol::Attempt;
  int stability_period = 0;
  int lifetime = 0;
  int instability_period = 0;
  double final_pdr = 0.0;
  double mean_hops = 0.0;  // per delivered packet
};

/// One Normal packet per alive node per round, upgraded to Critical with
/// probability p_critical; with probability p_ondemand the sink polls one
/// random alive node, which adds an OnDemand packet.
inline std::vector<Packet> generate_traffic(World& w) {
  std::vector<Packet> out;
  const int bits = w.config.radio.packet_bits;
  std::vector<NodeId> alive;
  for (const SensorNode& n : w.nodes) {
    if (n.is_sink() || !n.alive) continue;
    alive.push_back(n.id);
    Packet p;
    p.id = w.next_packet_id++;
    p.source = n.id;
    p.size_bits = bits;
    p.created_round = w.round;
    p.kind = w.traffic_rng.bernoulli(w.config.p_critical) ? PacketKind::Critical : PacketKind::Normal;
    out.push_back(p);
  }
  if (w.traffic_rng.bernoulli(w.config.p_ondemand) && !alive.empty()) {
    const NodeId target = alive[w.traffic_rng.below(alive.size())];
    Packet p;
    p.id = w.next_packet_id++;
    p.source = target;
    p.size_bits = bits;
    p.created_round = w.round;
    p.kind = PacketKind::OnDemand;
    out.push_back(p);
  }
  return out;
}

namespace detail {

inline void drop(World& w, const InFlight& item, DropReason reason) {
  ++w.counters.dropped[static_cast<std::size_t>(reason)];
  w.log.drops.emplace_back(item.packet.id, reason);
}

inline void deliver(World& w, const InFlight& item, NodeId final_hop, int slot) {
  ++w.counters.delivered;
  w.counters.delivered_hops += static_cast<std::uint64_t>(item.hops);
  w.log.deliveries.push_back({item.packet, item.hops, final_hop, slot});
}

inline HopRecord observe_hop(const World& w, NodeId from, NodeId to, const Packet& p, HopKind kind) {
  HopRecord rec;
  rec.from = from;
  rec.to = to;
  rec.packet = p.id;
  rec.kind = p.kind;
  rec.hop = kind;
  rec.link_marked = w.hot_links.marked(from, to, w.round, w.config.thermal.cooloff_rounds);
  rec.receiver_temperature = w.nodes[to].is_sink() ? 0.0 : w.nodes[to].temperature;
  rec.from_available = w.nodes[from].available();
  rec.to_available = w.nodes[to].available();
  return rec;
}

enum class Outcome { Delivered, Forwarded, Held, Dropped };

/// Handles one packet at `node` until it leaves the node, is held or dropped.
inline Outcome process_packet(World& w, NodeId node, InFlight& item) {
  const double bits = item.packet.size_bits;
  for (;;) {
    const DispatchDecision d = classify_and_dispatch(w, node, item);
    switch (d.kind) {
      case DispatchKind::Drop:
        drop(w, item, d.reason);
        return Outcome::Dropped;
      case DispatchKind::Hold:
        ++item.held_rounds;
        item.attempted_round = w.round;
        return Outcome::Held;
      case DispatchKind::Direct:
      case DispatchKind::DirectBoosted: {
        HopRecord rec = observe_hop(w, node, kSinkId, item.packet, HopKind::Direct);
        w.log.hops.push_back(rec);
        radio_transmit(w, node, bits, d.distance);
        if (!w.nodes[node].alive) {
          drop(w, item, DropReason::DeadNextHop);
          return Outcome::Dropped;
        }
        item.hops += 1;
        deliver(w, item, node, -1);
        return Outcome::Delivered;
      }
      case DispatchKind::Forward: {
        const NodeId j = d.next_hop;
        HopRecord rec = observe_hop(w, node, j, item.packet, HopKind::Forward);
        if (j == kSinkId) rec.slot = w.schedule.slot_of(node);
        w.log.hops.push_back(rec);
        radio_transmit(w, node, bits, d.distance);
        if (!w.nodes[node].alive) {
          // The battery ran out mid-frame; nothing usable left the radio.
          drop(w, item, DropReason::DeadNextHop);
          return Outcome::Dropped;
        }
        if (j == kSinkId) {
          item.hops += 1;
          deliver(w, item, node, rec.slot);
          return Outcome::Delivered;
        }
        radio_receive(w, j, bits);
        SensorNode& next = w.nodes[j];
        if (!next.alive) {
          drop(w, item, DropReason::DeadNextHop);
          return Outcome::Dropped;
        }
        const ThermalParams& th = w.config.thermal;
        if (th.enabled && next.temperature >= th.t_max && next.cooloff_remaining == 0) {
          const bool aware = thermal_aware(w.config.protocol);
          return_packet(w, node, j, item.packet, aware);
          if (!aware || !next.alive) {
            drop(w, item, next.alive ? DropReason::ThermalReturn : DropReason::DeadNextHop);
            return Outcome::Dropped;
          }
          continue;  // reroute from the sender with the link now marked
        }
        InFlight moved = item;
        moved.hops += 1;
        moved.attempted_round = -1;
        w.queues[j].push_back(moved);
        return Outcome::Forwarded;
      }
    }
  }
}

/// Length of the node's active route, used to drain leaves before relays.
inline std::size_t route_depth(const World& w, NodeId id) {
  const auto& routes = w.tables[id].candidate_routes;
  return routes.empty() ? std::size_t{1000} : routes.front().hop_count();
}

inline void dispatch_round(World& w) {
  const std::size_t n = w.nodes.size();
  const bool direct = direct_children_allowed(w.config.protocol);

  // Priority traffic goes first; everything else waits for it.
  if (direct) {
    for (NodeId i = 1; i < n; ++i) {
      auto& q = w.queues[i];
      std::deque<InFlight> keep;
      while (!q.empty()) {
        InFlight item = q.front();
        q.pop_front();
        if (!item.packet.priority()) {
          keep.push_back(item);
          continue;
        }
        if (process_packet(w, i, item) == Outcome::Held) keep.push_back(item);
      }
      w.queues[i] = std::move(keep);
    }
  }

  std::vector<NodeId> order;
  for (NodeId i = 1; i < n; ++i) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return std::tuple(route_depth(w, b), a) < std::tuple(route_depth(w, a), b);
  });

  bool progress = true;
  while (progress) {
    progress = false;
    for (NodeId i : order) {
      auto& q = w.queues[i];
      std::deque<InFlight> keep;
      while (!q.empty()) {
        InFlight item = q.front();
        q.pop_front();
        if (item.attempted_round == w.round) {
          keep.push_back(item);
          continue;
        }
        progress = true;
        if (process_packet(w, i, item) == Outcome::Held) keep.push_back(item);
      }
      // Packets forwarded to i while it was draining were appended to q.
      auto& tail = w.queues[i];
      for (InFlight& it : tail) keep.push_back(it);
      tail = std::move(keep);
    }
  }
}

inline void thermal_phase(World& w) {
  const ThermalParams& th = w.config.thermal;
  for (SensorNode& node : w.nodes) {
    if (node.is_sink() || !node.alive) continue;
    apply_heat(node, ThermalEvent::Idle, th);
    if (tick_cooloff(node, w.round)) {
      const bool was_excluded = std::find(w.last_discovery_excluded.begin(), w.last_discovery_excluded.end(),
                                          node.id) != w.last_discovery_excluded.end();
      if (was_excluded && node.temperature < th.t_max) w.epoch_dirty = true;
    }
    enter_cooloff_if_hot(node, th, w.round);
  }
  w.hot_links.expire(w.round, th.cooloff_rounds);
}

inline void death_phase(World& w, const std::vector<bool>& alive_before) {
  for (SensorNode& node : w.nodes) {
    if (node.is_sink() || node.alive || !alive_before[node.id]) continue;
    for (const InFlight& item : w.queues[node.id]) drop(w, item, DropReason::DeadNextHop);
    w.queues[node.id].clear();
    if (node.parent) std::erase(w.nodes[*node.parent].children, node.id);
    for (NodeId c : node.children) w.nodes[c].parent.reset();
    node.parent.reset();
    node.children.clear();
    w.tables[node.id] = NeighborTable{};
    w.tables[node.id].owner = node.id;
    w.epoch_dirty = true;
  }
}

}  // namespace detail

inline MetricsRow make_row(const World& w, std::size_t handovers) {
  MetricsRow row;
  row.round = w.round;
  row.alive = w.alive_count();
  row.dead = w.sensor_count() - row.alive;
  row.total_energy = w.total_energy();
  row.generated = w.counters.generated;
  row.received = w.counters.delivered;
  row.dropped = w.counters.dropped;
  row.pdr = row.generated == 0 ? 0.0 : static_cast<double>(row.received) / static_cast<double>(row.generated);
  row.hot_links = active_hot_links(w);
  row.handovers = handovers;
  row.held = w.held_count();
  return row;
}

/// Advances the world by one round and returns that round's metrics.
inline MetricsRow step_round(World& w) {
  ++w.round;
  w.log.clear();
  std::vector<bool> alive_before(w.nodes.size());
  for (const SensorNode& n : w.nodes) alive_before[n.id] = n.alive;

  bool mobility_event = false;
  if (mobility_due(w, w.round)) {
    w.log.mobility = run_mobility_event(w);
    mobility_event = true;
    w.epoch_dirty = true;
  }

  if (w.epoch_dirty) {
    discover(w);
    w.epoch_dirty = false;
    std::vector<NodeId> owners = root_nodes(w);
    if (mobility_event || owners != w.last_schedule_owners || w.schedule.slots.empty()) {
      w.schedule = assign_slots(w);
      w.last_schedule_owners = std::move(owners);
      w.log.schedule_rebuilt = true;
    }
  }

  std::vector<Packet> fresh = generate_traffic(w);
  w.counters.generated += fresh.size();
  for (const Packet& p : fresh) w.queues[p.source].push_back(InFlight{p, 0, 0, -1});
  w.log.generated = std::move(fresh);

  detail::dispatch_round(w);
  detail::thermal_phase(w);
  detail::death_phase(w, alive_before);

  return make_row(w, w.log.mobility ? w.log.mobility->handovers.size() : 0);
}

inline RunSummary summarize(const World& w, int rounds) {
  RunSummary s;
  s.protocol = w.config.protocol;
  std::optional<int> first, last;
  bool all_dead = true;
  for (const SensorNode& n : w.nodes) {
    if (n.is_sink()) continue;
    if (n.death_round) {
      first = first ? std::min(*first, *n.death_round) : *n.death_round;
      last = last ? std::max(*last, *n.death_round) : *n.death_round;
    } else {
      all_dead = false;
    }
  }
  s.stability_period = first ? *first : rounds;
  s.lifetime = (all_dead && last) ? *last : rounds;
  s.instability_period = s.lifetime - s.stability_period;
  s.final_pdr = w.counters.generated == 0
                    ? 0.0
                    : static_cast<double>(w.counters.delivered) / static_cast<double>(w.counters.generated);
  s.mean_hops = w.counters.delivered == 0 ? 0.0
                                          : static_cast<double>(w.counters.delivered_hops) /
                                                static_cast<double>(w.counters.delivered);
  return s;
}

struct RunResult {
  std::vector<MetricsRow> rows;
  RunSummary summary;
};

/// Callback invoked after every round with the world in its end-of-round
/// state; audits hook in here.
template <typename Observer>
RunResult run(const SimConfig& cfg, Observer&& observe) {
  const SimConfig valid = validate_config(cfg);
  World w = build_topology(valid, valid.seed);
  RunResult out;
  out.rows.reserve(static_cast<std::size_t>(valid.rounds));
  for (int r = 0; r < valid.rounds; ++r) {
    out.rows.push_back(step_round(w));
    observe(static_cast<const World&>(w), out.rows.back());
  }
  out.summary = summarize(w, valid.rounds);
  return out;
}

inline RunResult run(const SimConfig& cfg) {
  return run(cfg, [](const World&, const MetricsRow&) {});
}

}  // namespace wbasn

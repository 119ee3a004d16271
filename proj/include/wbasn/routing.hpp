#pragma once

// Neighbour discovery (Hello flooding with hop counts), route selection and
// the per-packet single-hop/multi-hop dispatch decision.

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "wbasn/energy.hpp"
#include "wbasn/thermal.hpp"
#include "wbasn/world.hpp"

namespace wbasn {

class RoutingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-parent nodes may hand Normal traffic straight to the sink when it is
/// within range; plain multi-hop keeps every child on the tier tree.
inline bool direct_children_allowed(Protocol p) { return p != Protocol::MultiHop; }

inline bool link_allowed(const SensorNode& from, const SensorNode& to, Protocol protocol) {
  if (to.is_sink()) return from.cls == NodeClass::Parent || direct_children_allowed(protocol);
  return tier_link_allowed(from.cls, to.cls);
}

/// Ordering key used by select_route: hop count, delivery energy, first hop.
inline std::tuple<std::size_t, double, NodeId> route_key(const Route& r, const RadioParams& radio) {
  return {r.hop_count(), route_energy(r, radio.packet_bits, radio), r.first_hop()};
}

inline bool route_less(const Route& a, const Route& b, const RadioParams& radio) {
  return route_key(a, radio) < route_key(b, radio);
}

inline Route select_route(const std::vector<Route>& candidates, const RadioParams& radio) {
  if (candidates.empty()) throw RoutingError("NoRoute: no candidate routes");
  auto best = std::min_element(candidates.begin(), candidates.end(),
                               [&](const Route& a, const Route& b) { return route_less(a, b, radio); });
  return *best;
}

/// Adjacency of legal forwarding links i -> j among participating nodes.
inline std::vector<std::vector<NodeId>> forwarding_links(const World& w, const std::vector<bool>& participating) {
  std::vector<std::vector<NodeId>> out(w.nodes.size());
  for (const SensorNode& from : w.nodes) {
    if (from.is_sink() || !participating[from.id]) continue;
    for (const SensorNode& to : w.nodes) {
      if (to.id == from.id || !participating[to.id]) continue;
      if (!link_allowed(from, to, w.config.protocol)) continue;
      if (w.link_distance(from.id, to.id) <= from.tx_range) out[from.id].push_back(to.id);
    }
  }
  return out;
}

/// Breadth-first flood outward from the sink over reversed forwarding links.
inline std::vector<int> hop_counts(const std::vector<std::vector<NodeId>>& links) {
  const std::size_t n = links.size();
  std::vector<std::vector<NodeId>> reverse(n);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j : links[i]) reverse[j].push_back(i);
  std::vector<int> hc(n, kUnreachable);
  std::queue<NodeId> q;
  hc[kSinkId] = 0;
  q.push(kSinkId);
  while (!q.empty()) {
    NodeId v = q.front();
    q.pop();
    for (NodeId u : reverse[v]) {
      if (hc[u] == kUnreachable) {
        hc[u] = hc[v] + 1;
        q.push(u);
      }
    }
  }
  return hc;
}

struct DiscoveryOptions {
  bool charge_hello = true;
};

/// Rebuilds neighbour tables, hop counts, candidate routes and the
/// parent/child registrations for every alive node not in cool-off. A node
/// keeps its current parent when that parent is still a usable first hop;
/// otherwise it registers with the best candidate that has spare capacity.
inline void discover(World& w, DiscoveryOptions opts = {}) {
  const SimConfig& cfg = w.config;
  const std::size_t n = w.nodes.size();
  std::vector<bool> participating(n, false);
  participating[kSinkId] = true;
  w.last_discovery_excluded.clear();
  for (std::size_t i = 1; i < n; ++i) {
    const SensorNode& node = w.nodes[i];
    participating[i] = node.available();
    if (node.alive && !participating[i]) w.last_discovery_excluded.push_back(node.id);
  }

  const auto links = forwarding_links(w, participating);
  const auto hc = hop_counts(links);

  std::vector<NeighborTable> tables(n);
  for (NodeId i = 0; i < n; ++i) {
    NeighborTable& t = tables[i];
    t.owner = i;
    if (!participating[i]) continue;
    t.hop_count_to_sink = hc[i];
    for (NodeId j = 0; j < n; ++j) {
      if (j == i || !participating[j]) continue;
      const double d = w.link_distance(i, j);
      if (d <= w.nodes[i].tx_range) t.neighbors.emplace_back(j, d);
    }
  }

  // Previous registrations seed the keepers; everything is re-registered.
  std::vector<std::optional<NodeId>> previous(n);
  for (SensorNode& node : w.nodes) {
    previous[node.id] = node.parent;
    node.parent.reset();
    node.children.clear();
  }

  std::vector<NodeId> order;
  for (NodeId i = 1; i < n; ++i)
    if (participating[i] && hc[i] != kUnreachable) order.push_back(i);
  auto keeps = [&](NodeId i) {
    return previous[i] && participating[*previous[i]] ? 0 : 1;
  };
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return std::tuple(hc[a], keeps(a), a) < std::tuple(hc[b], keeps(b), b);
  });

  std::vector<bool> settled(n, false);
  settled[kSinkId] = true;
  const RadioParams& radio = cfg.radio;
  for (NodeId i : order) {
    std::vector<Route> routes;
    for (NodeId j : links[i]) {
      if (!settled[j]) continue;
      Route r;
      r.hops.push_back(j);
      r.distances.push_back(w.link_distance(i, j));
      if (j != kSinkId) {
        const Route& up = tables[j].candidate_routes.front();
        if (up.contains(i)) continue;
        r.hops.insert(r.hops.end(), up.hops.begin(), up.hops.end());
        r.distances.insert(r.distances.end(), up.distances.begin(), up.distances.end());
      }
      routes.push_back(std::move(r));
    }
    std::sort(routes.begin(), routes.end(), [&](const Route& a, const Route& b) { return route_less(a, b, radio); });

    auto has_capacity = [&](NodeId p) {
      return p == kSinkId || static_cast<int>(w.nodes[p].children.size()) < cfg.mu_max;
    };
    std::optional<std::size_t> chosen;
    if (previous[i]) {
      for (std::size_t k = 0; k < routes.size(); ++k)
        if (routes[k].first_hop() == *previous[i] && has_capacity(*previous[i])) chosen = k;
    }
    if (!chosen) {
      for (std::size_t k = 0; k < routes.size(); ++k)
        if (has_capacity(routes[k].first_hop())) {
          chosen = k;
          break;
        }
    }
    if (!chosen) continue;  // orphaned until the next discovery

    std::rotate(routes.begin(), routes.begin() + static_cast<std::ptrdiff_t>(*chosen),
                routes.begin() + static_cast<std::ptrdiff_t>(*chosen) + 1);
    if (routes.size() > static_cast<std::size_t>(cfg.candidate_routes)) routes.resize(cfg.candidate_routes);
    const NodeId p = routes.front().first_hop();
    w.nodes[i].parent = p;
    w.nodes[p].children.push_back(i);
    tables[i].candidate_routes = std::move(routes);
    settled[i] = true;
  }
  for (SensorNode& node : w.nodes) std::sort(node.children.begin(), node.children.end());

  w.tables = std::move(tables);
  w.log.discovery_ran = true;

  if (opts.charge_hello) {
    const double bits = radio.packet_bits;
    for (NodeId i = 1; i < n; ++i) {
      if (!participating[i]) continue;
      radio_transmit(w, i, bits, w.nodes[i].tx_range, ChargeKind::Hello);
    }
    for (NodeId i = 1; i < n; ++i) {
      if (!participating[i]) continue;
      for (std::size_t k = 0; k < w.tables[i].neighbors.size(); ++k) radio_receive(w, i, bits, ChargeKind::Hello);
    }
  }
}

// --- per-packet dispatch decision ----------------------------------------

enum class DispatchKind { Direct, DirectBoosted, Forward, Hold, Drop };

struct DispatchDecision {
  DispatchKind kind = DispatchKind::Drop;
  NodeId next_hop = kSinkId;
  double distance = 0.0;  // metres charged for the transmission
  DropReason reason = DropReason::NoRoute;
};

inline bool thermal_aware(Protocol p) { return p != Protocol::MultiHop; }

/// Decision for the packet at the head of `node`'s queue. Priority traffic
/// goes straight to the sink (boosting range if needed); Normal traffic
/// follows the candidate routes, skipping hot or unusable first hops, and is
/// held for a bounded number of rounds when nothing is usable.
inline DispatchDecision classify_and_dispatch(const World& w, NodeId node, const InFlight& item) {
  const SimConfig& cfg = w.config;
  const SensorNode& self = w.nodes[node];
  const bool aware = thermal_aware(cfg.protocol);
  auto hold_or_drop = [&](DropReason reason) {
    DispatchDecision d;
    if (aware && item.held_rounds < cfg.hold_limit) {
      d.kind = DispatchKind::Hold;
    } else {
      d.kind = DispatchKind::Drop;
      d.reason = reason;
    }
    return d;
  };

  if (!self.alive) return {DispatchKind::Drop, kSinkId, 0.0, DropReason::DeadNextHop};
  if (self.cooling()) return hold_or_drop(DropReason::AllLinksHot);

  const double sink_distance = w.link_distance(node, kSinkId);
  if (item.packet.priority() && direct_children_allowed(cfg.protocol)) {
    if (sink_distance <= self.tx_range) return {DispatchKind::Direct, kSinkId, sink_distance, DropReason::NoRoute};
    if (sink_distance <= self.boosted_range)
      return {DispatchKind::DirectBoosted, kSinkId, self.boosted_range, DropReason::NoRoute};
    return {DispatchKind::Drop, kSinkId, 0.0, DropReason::RangeExceeded};
  }

  const NeighborTable& table = w.tables[node];
  if (table.candidate_routes.empty()) return {DispatchKind::Drop, kSinkId, 0.0, DropReason::NoRoute};

  bool any_alive = false;
  for (const Route& r : table.candidate_routes) {
    const NodeId j = r.first_hop();
    const SensorNode& next = w.nodes[j];
    if (!next.alive) continue;
    any_alive = true;
    if (w.link_distance(node, j) > self.tx_range) continue;
    if (j == kSinkId) return {DispatchKind::Forward, j, r.distances.front(), DropReason::NoRoute};
    if (!aware) {
      // Thermal-unaware: the registered route is used or the packet is lost.
      if (next.cooling()) return {DispatchKind::Drop, kSinkId, 0.0, DropReason::AllLinksHot};
      return {DispatchKind::Forward, j, r.distances.front(), DropReason::NoRoute};
    }
    if (next.cooling()) continue;
    if (link_state(w, node, j).hot) continue;
    return {DispatchKind::Forward, j, r.distances.front(), DropReason::NoRoute};
  }
  if (!any_alive) return {DispatchKind::Drop, kSinkId, 0.0, DropReason::DeadNextHop};
  return hold_or_drop(DropReason::AllLinksHot);
}

}  // namespace wbasn

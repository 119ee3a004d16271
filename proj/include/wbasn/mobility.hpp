#pragma once

// Body movement: periodic child repositioning, join-request handover to a
// new parent, and the attenuation / centroid / movement-cost helpers.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>

#include "wbasn/routing.hpp"
#include "wbasn/thermal.hpp"
#include "wbasn/world.hpp"

namespace wbasn {

/// Sum of squared hop lengths along a route.
inline double attenuation(const Route& route) {
  double a = 0.0;
  for (double d : route.distances) a += d * d;
  return a;
}

inline Point parent_centroid(std::span<const Point> children) {
  if (children.empty()) throw std::domain_error("centroid of an empty set");
  Point c;
  for (const Point& p : children) {
    c.x += p.x;
    c.y += p.y;
  }
  const double n = static_cast<double>(children.size());
  return {c.x / n, c.y / n};
}

/// Velocity clamped at the threshold, times the distance to the centroid.
inline double mobility_cost(double v, Point node, Point centroid, double v_threshold) {
  if (!(v >= 0.0)) throw std::domain_error("velocity must be >= 0");
  const double v_eff = v < v_threshold ? v : v_threshold;
  return v_eff * distance(node, centroid);
}

inline bool mobility_due(const World& w, int round) {
  return w.config.protocol == Protocol::MAttempt && round > 0 && round % w.config.mobility_period == 0;
}

inline bool is_mobile(const SensorNode& n) {
  return n.cls == NodeClass::Level1Child || n.cls == NodeClass::Level2Child;
}

/// Moves every alive child by a random displacement of length at most
/// velocity * 1 round, clamped to the area. Parents and the sink stay put.
inline MobilityEvent reposition(World& w) {
  MobilityEvent ev;
  ev.round = w.round;
  const double reach = w.config.velocity * 1.0;
  for (SensorNode& n : w.nodes) {
    if (!is_mobile(n) || !n.alive) continue;
    const double angle = w.mobility_rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double mag = reach * w.mobility_rng.uniform();
    const Point old = n.position;
    n.position.x = std::clamp(old.x + mag * std::cos(angle), 0.0, w.config.area.width);
    n.position.y = std::clamp(old.y + mag * std::sin(angle), 0.0, w.config.area.height);
    if (!(n.position == old)) ev.moved.emplace_back(n.id, old, n.position);
  }
  return ev;
}

enum class InvitationResult { Accepted, Orphaned };

inline void detach_from_parent(World& w, NodeId child) {
  SensorNode& c = w.nodes[child];
  if (!c.parent) return;
  auto& siblings = w.nodes[*c.parent].children;
  std::erase(siblings, child);
  c.parent.reset();
}

/// Join-request handover: the child asks in-range eligible parents nearest
/// first; a parent accepts while it has fewer than mu_max children.
inline InvitationResult invitation(World& w, NodeId child, MobilityEvent& ev) {
  const SimConfig& cfg = w.config;
  SensorNode& c = w.nodes[child];
  const std::optional<NodeId> old_parent = c.parent;

  std::vector<std::pair<double, NodeId>> options;
  for (const SensorNode& p : w.nodes) {
    if (p.id == child || !p.available()) continue;
    if (!link_allowed(c, p, cfg.protocol)) continue;
    if (!p.is_sink() && !w.nodes[p.id].parent) continue;  // candidate must itself reach the sink
    const double d = w.link_distance(child, p.id);
    if (d <= c.tx_range) options.emplace_back(d, p.id);
  }
  std::sort(options.begin(), options.end());

  const double bits = cfg.radio.packet_bits;
  for (const auto& [d, pid] : options) {
    radio_transmit(w, child, bits, d, ChargeKind::Join);
    radio_receive(w, pid, bits, ChargeKind::Join);
    SensorNode& p = w.nodes[pid];
    const bool accept = p.is_sink() || static_cast<int>(p.children.size()) < cfg.mu_max;
    if (!accept) {
      ev.rejections.emplace_back(child, pid);
      continue;
    }
    radio_transmit(w, pid, bits, d, ChargeKind::Join);
    radio_receive(w, child, bits, ChargeKind::Join);
    detach_from_parent(w, child);
    w.nodes[child].parent = pid;
    auto& kids = w.nodes[pid].children;
    kids.insert(std::upper_bound(kids.begin(), kids.end(), child), child);
    ev.handovers.push_back({child, old_parent, pid});
    return InvitationResult::Accepted;
  }
  detach_from_parent(w, child);
  ev.orphaned.push_back(child);
  return InvitationResult::Orphaned;
}

/// Full mobility event: reposition, handovers for children that lost their
/// parent, then the movement cost charged to each parent with children.
inline MobilityEvent run_mobility_event(World& w) {
  MobilityEvent ev = reposition(w);
  for (const auto& [id, from, to] : ev.moved) {
    SensorNode& c = w.nodes[id];
    if (!c.alive || c.cooling()) continue;
    const bool lost = !c.parent || !w.nodes[*c.parent].alive || w.link_distance(id, *c.parent) > c.tx_range;
    if (lost) invitation(w, id, ev);
  }
  for (SensorNode& p : w.nodes) {
    if (p.is_sink() || !p.alive || p.children.empty()) continue;
    std::vector<Point> pts;
    for (NodeId k : p.children) pts.push_back(w.nodes[k].position);
    const double cost = mobility_cost(w.config.velocity, p.position, parent_centroid(pts), w.config.velocity_threshold);
    if (cost > 0.0) charge(w, p.id, ChargeKind::Mobility, cost * w.config.mobility_cost_factor);
  }
  w.counters.handovers += ev.handovers.size();
  return ev;
}

}  // namespace wbasn

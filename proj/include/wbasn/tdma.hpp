#pragma once

#include <algorithm>
#include <vector>

#include "wbasn/world.hpp"

namespace wbasn {

/// Nodes that hand Normal traffic to the sink themselves: alive nodes with a
/// direct sink route in their current table.
inline std::vector<NodeId> root_nodes(const World& w) {
  std::vector<NodeId> roots;
  for (const SensorNode& n : w.nodes) {
    if (n.is_sink() || !n.alive) continue;
    const auto& routes = w.tables[n.id].candidate_routes;
    const bool direct = std::any_of(routes.begin(), routes.end(),
                                    [](const Route& r) { return r.hop_count() == 1 && r.first_hop() == kSinkId; });
    if (direct) roots.push_back(n.id);
  }
  return roots;
}

/// One slot per root node, ascending id, numbered without gaps.
inline Schedule assign_slots(const World& w) {
  Schedule s;
  s.round = w.round;
  std::vector<NodeId> roots = root_nodes(w);
  std::sort(roots.begin(), roots.end());
  for (std::size_t i = 0; i < roots.size(); ++i) s.slots.emplace_back(static_cast<int>(i), roots[i]);
  return s;
}

}  // namespace wbasn

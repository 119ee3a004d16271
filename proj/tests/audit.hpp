#pragma once

// Per-round audits shared by the engine tests and the acceptance binary.

#include <sstream>
#include <string>
#include <vector>

#include "wbasn/wbasn.hpp"

namespace wbasn::audit {

struct Findings {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
  void add(const World& w, const std::string& what) {
    if (problems.size() < 20) problems.push_back("round " + std::to_string(w.round) + ": " + what);
  }
};

/// Replays the logged charges against the previous round's energies; the
/// result must match every node's current energy bit for bit.
class EnergyAudit {
 public:
  explicit EnergyAudit(const World& w) { snapshot(w); }

  void check(const World& w, Findings& f) {
    std::vector<double> replay = energy_;
    for (const Charge& c : w.log.charges) replay[c.node] -= c.applied;
    for (const SensorNode& n : w.nodes) {
      if (n.is_sink()) continue;
      const double want = replay[n.id] <= 0.0 ? 0.0 : replay[n.id];
      if (want != n.energy) f.add(w, "energy mismatch at node " + std::to_string(n.id));
      if (n.energy > energy_[n.id]) f.add(w, "energy increased at node " + std::to_string(n.id));
      if (n.alive && !alive_[n.id]) f.add(w, "node " + std::to_string(n.id) + " came back to life");
    }
    snapshot(w);
  }

 private:
  void snapshot(const World& w) {
    energy_.assign(w.nodes.size(), 0.0);
    alive_.assign(w.nodes.size(), 0);
    for (const SensorNode& n : w.nodes) {
      energy_[n.id] = n.energy;
      alive_[n.id] = n.alive ? 1 : 0;
    }
  }
  std::vector<double> energy_;
  std::vector<char> alive_;
};

inline void check_packets(const World& w, const MetricsRow& row, Findings& f) {
  if (row.generated != row.received + row.dropped_total() + row.held)
    f.add(w, "packet conservation: " + std::to_string(row.generated) + " != " + std::to_string(row.received) + " + " +
                 std::to_string(row.dropped_total()) + " + " + std::to_string(row.held));
}

/// Normal packets never cross a marked or over-threshold link, nothing is
/// handled by a cooling or dead node, and priority traffic is single-hop.
inline void check_hot_spots(const World& w, Findings& f) {
  for (const HopRecord& h : w.log.hops) {
    if (h.hop == HopKind::Return) continue;
    if (!h.from_available) f.add(w, "packet sent by unavailable node " + std::to_string(h.from));
    if (h.to != kSinkId && !h.to_available) f.add(w, "packet sent to unavailable node " + std::to_string(h.to));
    if (h.kind == PacketKind::Normal) {
      if (h.link_marked) f.add(w, "normal packet on marked link " + std::to_string(h.from) + "->" + std::to_string(h.to));
      if (h.to != kSinkId && h.receiver_temperature > w.config.thermal.link_hot_threshold)
        f.add(w, "normal packet on hot link " + std::to_string(h.from) + "->" + std::to_string(h.to));
    }
  }
  for (const Delivery& d : w.log.deliveries) {
    if (d.packet.priority() && d.hops != 1) f.add(w, "priority packet took " + std::to_string(d.hops) + " hops");
  }
}

inline void check_handovers(const World& w, Findings& f) {
  for (const SensorNode& p : w.nodes) {
    if (!p.is_sink() && static_cast<int>(p.children.size()) > w.config.mu_max)
      f.add(w, "node " + std::to_string(p.id) + " has " + std::to_string(p.children.size()) + " children");
    for (NodeId c : p.children)
      if (w.nodes[c].parent != p.id) f.add(w, "child " + std::to_string(c) + " not reciprocal");
    if (p.parent) {
      const auto& kids = w.nodes[*p.parent].children;
      if (std::count(kids.begin(), kids.end(), p.id) != 1) f.add(w, "parent link of " + std::to_string(p.id) + " not reciprocal");
    }
  }
}

}  // namespace wbasn::audit

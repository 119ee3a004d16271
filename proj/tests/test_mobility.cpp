#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace wbasn;
using namespace wbasn::testing;

TEST(Mobility, Attenuation) {
  EXPECT_EQ(attenuation(Route{{0}, {1.0}}), 1.0);
  EXPECT_EQ(attenuation(Route{{2, 0}, {1.0, 2.0}}), 5.0);
  EXPECT_EQ(attenuation(Route{}), 0.0);
}

TEST(Mobility, Centroid) {
  const Point one[] = {{1.25, -3.0}};
  EXPECT_EQ(parent_centroid(one), (Point{1.25, -3.0}));
  const Point tri[] = {{0, 0}, {2, 0}, {1, 3}};
  EXPECT_EQ(parent_centroid(tri), (Point{1, 1}));
  const Point pair[] = {{-0.7, 2.0}, {0.7, 2.0}};
  EXPECT_EQ(parent_centroid(pair), (Point{0, 2.0}));
  EXPECT_THROW(parent_centroid(std::span<const Point>{}), std::domain_error);
}

TEST(Mobility, Cost) {
  EXPECT_EQ(mobility_cost(0.0, {0, 0}, {3, 4}, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(mobility_cost(2.0, {0, 0}, {3, 4}, 5.0), 10.0);
  EXPECT_DOUBLE_EQ(mobility_cost(2.0, {0, 0}, {3, 4}, 1.0), 5.0);  // clamped at the threshold
  EXPECT_EQ(mobility_cost(3.0, {1, 2}, {1, 2}, 5.0), 0.0);
  EXPECT_THROW(mobility_cost(-1.0, {0, 0}, {1, 1}, 1.0), std::domain_error);
}

TEST(Mobility, CentroidAndCostAreTranslationEquivariant) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int t = 0; t < 200; ++t) {
    std::vector<Point> pts(1 + gen() % 4);
    for (Point& p : pts) p = {u(gen), u(gen)};
    const Point node{u(gen), u(gen)}, shift{u(gen), u(gen)};
    std::vector<Point> moved = pts;
    for (Point& p : moved) p = {p.x + shift.x, p.y + shift.y};
    const Point c = parent_centroid(pts), cm = parent_centroid(moved);
    EXPECT_NEAR(cm.x, c.x + shift.x, 1e-12);
    EXPECT_NEAR(cm.y, c.y + shift.y, 1e-12);
    EXPECT_NEAR(mobility_cost(0.7, {node.x + shift.x, node.y + shift.y}, cm, 1.0), mobility_cost(0.7, node, c, 1.0),
                1e-12);
  }
}

TEST(Mobility, Schedule) {
  SimConfig cfg;
  cfg.protocol = Protocol::MAttempt;
  World w = build_topology(cfg, 1);
  EXPECT_FALSE(mobility_due(w, 3));
  EXPECT_TRUE(mobility_due(w, 5));
  w.config.protocol = Protocol::Attempt;
  EXPECT_FALSE(mobility_due(w, 5));
}

TEST(Mobility, ZeroVelocityMovesNothing) {
  SimConfig cfg;
  cfg.velocity = 0.0;
  World w = build_topology(cfg, 2);
  const std::string before = serialize_nodes(w);
  EXPECT_TRUE(reposition(w).moved.empty());
  EXPECT_EQ(serialize_nodes(w), before);
}

TEST(Mobility, DisplacementBoundedByVelocity) {
  SimConfig cfg;
  World w = build_topology(cfg, 4);
  for (int k = 0; k < 1000; ++k) {
    const MobilityEvent ev = reposition(w);
    for (const auto& [id, from, to] : ev.moved) {
      EXPECT_LE(distance(from, to), cfg.velocity + 1e-12);
      EXPECT_TRUE(is_mobile(w.nodes[id]));
      EXPECT_GE(to.x, 0.0);
      EXPECT_LE(to.x, cfg.area.width);
      EXPECT_GE(to.y, 0.0);
      EXPECT_LE(to.y, cfg.area.height);
    }
  }
}

namespace {

// Sink at the origin, parents P1 (id 1) and P2 (id 2) on either side,
// P1 with two children (3, 4) and C4 (id 5) attached to P2.
World handover_scene(bool third_child, bool spare_parent) {
  SimConfig cfg = quiet_config();
  cfg.protocol = Protocol::MAttempt;
  cfg.tx_range = 2.0;
  std::vector<Placement> nodes = {{NodeClass::Parent, {1.5, 0}},
                                  {NodeClass::Parent, {-1.5, 0}},
                                  {NodeClass::Level1Child, {3.0, 0.5}},
                                  {NodeClass::Level1Child, {3.0, -0.5}},
                                  {NodeClass::Level1Child, {-3.0, 0}}};
  if (third_child) nodes.push_back({NodeClass::Level1Child, {3.0, 0.0}});
  if (spare_parent) nodes.push_back({NodeClass::Parent, {1.6, 1.0}});
  World w = make_world(cfg, nodes);
  auto link = [&](NodeId c, NodeId p) {
    w.nodes[c].parent = p;
    w.nodes[p].children.push_back(c);
  };
  link(1, 0);
  link(2, 0);
  link(3, 1);
  link(4, 1);
  link(5, 2);
  if (third_child) link(6, 1);
  if (spare_parent) link(w.nodes.size() - 1, 0);
  w.round = 5;
  return w;
}

}  // namespace

TEST(Invitation, ChildMovingAcrossJoinsTheNewParent) {
  World w = handover_scene(false, false);
  w.nodes[5].position = {3.2, 0.0};
  MobilityEvent ev;
  EXPECT_EQ(invitation(w, 5, ev), InvitationResult::Accepted);
  ASSERT_EQ(ev.handovers.size(), 1u);
  EXPECT_EQ(ev.handovers[0].child, 5u);
  EXPECT_EQ(ev.handovers[0].old_parent, NodeId{2});
  EXPECT_EQ(ev.handovers[0].new_parent, 1u);
  EXPECT_EQ(w.nodes[1].children, (std::vector<NodeId>{3, 4, 5}));
  EXPECT_TRUE(w.nodes[2].children.empty());
}

TEST(Invitation, FullParentRejectsAndTheNextOneAccepts) {
  World w = handover_scene(true, true);
  const NodeId spare = w.nodes.size() - 1;
  w.nodes[5].position = {3.2, 0.0};
  MobilityEvent ev;
  EXPECT_EQ(invitation(w, 5, ev), InvitationResult::Accepted);
  ASSERT_EQ(ev.rejections.size(), 1u);
  EXPECT_EQ(ev.rejections[0], (std::pair<NodeId, NodeId>{5, 1}));
  EXPECT_EQ(ev.handovers.at(0).new_parent, spare);
  EXPECT_EQ(w.nodes[1].children.size(), 3u);
}

TEST(Invitation, IsolatedChildIsOrphanedButCriticalStillGetsThrough) {
  World w = handover_scene(false, false);
  w.nodes[5].position = {-4.9, 4.9};
  MobilityEvent ev;
  EXPECT_EQ(invitation(w, 5, ev), InvitationResult::Orphaned);
  EXPECT_EQ(ev.orphaned, std::vector<NodeId>{5});
  EXPECT_FALSE(w.nodes[5].parent);
  EXPECT_TRUE(w.nodes[2].children.empty());
  InFlight item{make_packet(1, 5, PacketKind::Critical), 0, 0, -1};
  EXPECT_EQ(classify_and_dispatch(w, 5, item).kind, DispatchKind::DirectBoosted);
}

TEST(Invitation, JoinMessagesCostEnergy) {
  World w = handover_scene(false, false);
  w.nodes[5].position = {3.2, 0.0};
  MobilityEvent ev;
  invitation(w, 5, ev);
  const RadioParams& r = w.config.radio;
  const double d = distance(w.nodes[5].position, w.nodes[1].position);
  EXPECT_NEAR(0.5 - w.nodes[5].energy, transmit_energy(512, d, r) + receive_energy(512, r), 1e-15);
  EXPECT_NEAR(0.5 - w.nodes[1].energy, transmit_energy(512, d, r) + receive_energy(512, r), 1e-15);
}

TEST(Mobility, RunChargesParentsForTheCentroidDistance) {
  SimConfig cfg;
  cfg.protocol = Protocol::MAttempt;
  World w = build_topology(cfg, 11);
  w.round = 1;
  discover(w, {.charge_hello = false});
  w.round = 5;
  w.log.clear();
  const MobilityEvent ev = run_mobility_event(w);
  for (const SensorNode& p : w.nodes) {
    if (p.is_sink() || p.children.empty()) continue;
    std::vector<Point> pts;
    for (NodeId c : p.children) pts.push_back(w.nodes[c].position);
    const double want = mobility_cost(cfg.velocity, p.position, parent_centroid(pts), cfg.velocity_threshold) *
                        cfg.mobility_cost_factor;
    double got = 0.0;
    for (const Charge& c : w.log.charges)
      if (c.node == p.id && c.kind == ChargeKind::Mobility) got += c.applied;
    EXPECT_DOUBLE_EQ(got, want);
  }
  EXPECT_EQ(w.counters.handovers, ev.handovers.size());
}

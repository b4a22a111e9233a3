#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "lofusion/strategies.hpp"
#include "support.hpp"

using namespace lofusion;
using namespace lofusion::testing;

namespace {

// Linear cluster on the given photon order, built directly from CZs.
GraphState chain_reference(const std::deque<int>& order) {
  const int max_id = *std::max_element(order.begin(), order.end());
  auto g = GraphState::from_edges(max_id + 1, {});
  for (std::size_t i = 0; i + 1 < order.size(); ++i) g.apply_cz(order[i], order[i + 1]);
  for (int v = 0; v <= max_id; ++v)
    if (std::find(order.begin(), order.end(), v) == order.end()) g.measure(v, Basis::Z, Choice::force(0));
  return g;
}

// Reference graph on the ids of `g`, dressed with g's S slots so that only a
// Pauli difference can remain.
GraphState layout_reference(const GraphState& g, const std::vector<std::pair<int, int>>& edges) {
  const auto vs = g.vertices();
  const int max_id = vs.back();
  auto ref = GraphState::from_edges(max_id + 1, edges);
  for (int v = 0; v <= max_id; ++v)
    if (!g.has_vertex(v)) ref.measure(v, Basis::Z, Choice::force(0));
  for (int v : vs)
    if (g.frame(v).s()) ref.apply_s(v);
  return ref;
}

double mean_of(const StrategyConfig& cfg, const std::string& metric) {
  return estimate_resources(cfg).metric(metric).mean;
}

}  // namespace

TEST(ThreeCluster, FirstTrySuccessUsesTwoPairs) {
  bool seen = false;
  for (std::uint64_t seed = 0; seed < 64 && !seen; ++seed) {
    Rng rng(seed);
    ResourceTally t;
    build_three_cluster(rng, t);
    if (t.type_i_attempts != 1) continue;
    seen = true;
    EXPECT_EQ(t.bell_pairs_consumed, 2U);
    EXPECT_EQ(t.bell_pairs_recycled, 0U);
  }
  EXPECT_TRUE(seen);
}

TEST(ThreeCluster, MeanCostIsFour) {
  StrategyConfig cfg{Strategy::ThreeCluster, 0, 1, 100000, 11};
  EXPECT_NEAR(mean_of(cfg, "net_cost"), 4.0, 0.05);
}

TEST(ThreeCluster, FailureLeavesTwoLoosePhotons) {
  // Bell pairs 0-1 and 2-3; Type-I on 1 and 2 fails.
  const auto kraus = [] {
    auto ch = fock::derive_channel(fock::type_i_circuit(), {0, 1});
    std::vector<const fock::ChannelEntry*> zero;
    for (const auto& e : ch.entries)
      if (classify_detection(FusionOp::TypeI, e.detections).first == FusionKind::FailZero) zero.push_back(&e);
    return *fock::merge_proportional(zero);
  }();
  auto dense = QubitState::plus({0, 1, 2, 3});
  dense.cz(0, 1);
  dense.cz(2, 3);
  auto out = apply_kraus(dense, 1, 2, kraus);
  ASSERT_EQ(out.ids(), (std::vector<int>{0, 3}));
  // product state: the 2x2 amplitude matrix has zero determinant
  const auto& a = out.amplitudes();
  EXPECT_NEAR(std::abs(a[0] * a[3] - a[1] * a[2]), 0.0, 1e-12);
  auto g = GraphState::bell_pair();
  g.absorb(GraphState::bell_pair());
  fuse_type_i(g, 1, 2, FusionChoice::force(FusionKind::FailZero));
  EXPECT_TRUE(g.edges().empty());
  EXPECT_GT(graph_fidelity(g, out), 1 - 1e-9);
}

TEST(ThreeCluster, GraphModeBuildsChain) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng a(seed), b(seed);
    ResourceTally ta, tb;
    Chain c = build_three_cluster(a, ta, Mode::Graph);
    build_three_cluster(b, tb, Mode::Counting);
    EXPECT_EQ(ta, tb);
    ASSERT_EQ(c.order.size(), 3U);
    EXPECT_TRUE(equal_up_to_pauli(*c.g, chain_reference(c.order)));
  }
}

TEST(NaiveGrowth, AttachStepIsPlusTwoOrMinusOne) {
  Rng rng(5);
  const int draws = 100000;
  double sum = 0;
  for (int i = 0; i < draws; ++i) {
    Chain c;
    c.length = 10;
    std::deque<int> piece;
    std::size_t len = 3;
    ResourceTally t;
    attach_type_i(c, piece, len, rng, t, nullptr);
    const int d = static_cast<int>(c.length) - 10;
    ASSERT_TRUE(d == 2 || d == -1);
    sum += d;
  }
  // +1/2 qubit per attempt; per-attempt standard deviation is 1.5
  EXPECT_NEAR(sum / draws, 0.5, 3 * 1.5 / std::sqrt(static_cast<double>(draws)));
}

TEST(NaiveGrowth, FailedAttachShortensChainByOne) {
  auto g = GraphState::linear_cluster(5);
  Chain c;
  c.g = g;
  c.order = {0, 1, 2, 3, 4};
  c.length = 5;
  Chain three;
  three.g = GraphState::linear_cluster(3);
  three.order = {0, 1, 2};
  auto piece = absorb_chain(c, three);
  fuse_type_i(*c.g, c.order.back(), piece.front(), FusionChoice::force(FusionKind::FailTwo));
  c.order.pop_back();
  piece.pop_front();
  EXPECT_TRUE(equal_up_to_pauli(*c.g, [&] {
    auto ref = GraphState::from_edges(8, {{0, 1}, {1, 2}, {2, 3}, {6, 7}});
    ref.measure(4, Basis::Z, Choice::force(0));
    ref.measure(5, Basis::Z, Choice::force(0));
    return ref;
  }()));
  // the leftover of the 3-chain is a Bell pair
  EXPECT_TRUE(c.g->has_edge(piece[0], piece[1]));
}

TEST(NaiveGrowth, GraphModeMatchesCountingAndLayout) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng a(seed), b(seed);
    FusionLog la;
    auto rg = grow_linear_naive(12, a, Mode::Graph, &la);
    auto rc = grow_linear_naive(12, b, Mode::Counting);
    EXPECT_EQ(rg.tally, rc.tally);
    ASSERT_EQ(rg.chain.length, 12U);
    ASSERT_EQ(rg.chain.order.size(), 12U);
    ASSERT_EQ(rg.chain.g->vertex_count(), 12U);
    EXPECT_TRUE(equal_up_to_pauli(*rg.chain.g, chain_reference(rg.chain.order)));
    EXPECT_EQ(la.events().size(), rg.tally.type_i_attempts);
  }
}

TEST(NaiveGrowth, SevenPerQubit) {
  StrategyConfig cfg{Strategy::Naive3, 200, 1, 10000, 21};
  EXPECT_NEAR(mean_of(cfg, "cost_per_qubit"), 7.0, 0.1);
}

TEST(FiveCluster, MeanCostIsFourteen) {
  // attempts are geometric with mean 2, each uses two 3-clusters (mean 4 each) and
  // a failure returns two Bell pairs: 2 * 8 - 1 * 2 = 14
  StrategyConfig cfg{Strategy::FiveCluster, 0, 1, 100000, 12};
  EXPECT_NEAR(mean_of(cfg, "net_cost"), 14.0, 0.2);
}

TEST(FiveCluster, FirstTrySuccessRecyclesNothing) {
  bool seen = false;
  for (std::uint64_t seed = 0; seed < 256 && !seen; ++seed) {
    Rng rng(seed);
    ResourceTally t;
    build_five_cluster(rng, t);
    // two 3-chains and the joining fusion, all first time
    if (t.type_i_attempts != 3) continue;
    seen = true;
    EXPECT_EQ(t.type_i_successes, 3U);
    EXPECT_EQ(t.bell_pairs_consumed, 4U);
    EXPECT_EQ(t.bell_pairs_recycled, 0U);
  }
  EXPECT_TRUE(seen);
}

TEST(FiveCluster, GraphModeBuildsChain) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    ResourceTally t;
    Chain c = build_five_cluster(rng, t, Mode::Graph);
    ASSERT_EQ(c.order.size(), 5U);
    EXPECT_TRUE(equal_up_to_pauli(*c.g, chain_reference(c.order)));
  }
}

TEST(FiveGrowth, RoundExpectation) {
  // branches: success (1/2, +4), fail then success (1/4, -1 + 3), double failure
  // (1/4, -2 with a 3-chain returned, credit 4); a 5-chain costs 14 on average
  const double dq = 0.5 * 4 + 0.25 * 2 + 0.25 * -2;
  const double cost = 14 - 0.25 * kThreeClusterCredit;
  EXPECT_DOUBLE_EQ(dq, 2.0);
  EXPECT_DOUBLE_EQ(cost, 13.0);
  EXPECT_DOUBLE_EQ(cost / dq, 6.5);
}

TEST(FiveGrowth, GraphModeMatchesCountingAndLayout) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng a(seed), b(seed);
    auto rg = grow_linear_five(14, a, Mode::Graph);
    auto rc = grow_linear_five(14, b, Mode::Counting);
    EXPECT_EQ(rg.tally, rc.tally);
    ASSERT_EQ(rg.chain.order.size(), 14U);
    ASSERT_EQ(rg.chain.g->vertex_count(), 14U);
    EXPECT_TRUE(equal_up_to_pauli(*rg.chain.g, chain_reference(rg.chain.order)));
  }
}

TEST(FiveGrowth, DoubleFailureRecyclesThreeCluster) {
  bool seen = false;
  for (std::uint64_t seed = 0; seed < 50 && !seen; ++seed) {
    Rng rng(seed);
    auto r = grow_linear_five(40, rng);
    seen = r.tally.three_clusters_recycled > 0;
  }
  EXPECT_TRUE(seen);
}

TEST(FiveGrowth, SixAndAHalfPerQubit) {
  StrategyConfig cfg{Strategy::Five, 200, 1, 10000, 22};
  EXPECT_NEAR(mean_of(cfg, "cost_per_qubit"), 6.5, 0.1);
}

TEST(LShape, GraphModeGivesLShape) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng a(seed), b(seed);
    auto rg = build_lshape(a, Mode::Graph);
    auto rc = build_lshape(b, Mode::Counting);
    EXPECT_EQ(rg.tally, rc.tally);
    const auto& u = rg.unit;
    ASSERT_EQ(rg.g->vertices(), (std::vector<int>{u.p, u.u, u.m, u.d}));
    EXPECT_TRUE(rg.g->fast_ops() > 0);
    EXPECT_FALSE(rg.g->delegated());
    EXPECT_TRUE(equal_up_to_pauli(*rg.g, layout_reference(*rg.g, {{u.p, u.u}, {u.u, u.m}, {u.m, u.d}})));
    EXPECT_EQ(rg.tally.bonds_consumed, 4 * rg.tally.type_ii_attempts);
  }
}

TEST(LShape, AttemptsBondsAndCost) {
  StrategyConfig cfg{Strategy::LShape, 0, 1, 100000, 13};
  auto rep = estimate_resources(cfg);
  EXPECT_NEAR(rep.metric("type_ii_attempts").mean, 2.0, 0.05);
  EXPECT_NEAR(rep.metric("bonds_consumed").mean, 8.0, 0.1);
  EXPECT_NEAR(rep.metric("net_cost").mean, 52.0, 3 * rep.metric("net_cost").stderr_);
}

TEST(LShape, BoundedSupplyRunsOut) {
  bool thrown = false;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    try {
      build_lshape(rng, Mode::Counting, ChainSupply{4});
    } catch (const std::runtime_error&) {
      thrown = true;
    }
  }
  EXPECT_TRUE(thrown);
}

TEST(Tile, SingleUnitIsOneLShape) {
  auto L = make_tile_layout(1, 1);
  EXPECT_EQ(L.vertex_count(), 4);
  const int p = L.wire.at({0, 0}), u = L.wire.at({1, 0}), d = L.wire.at({1, 1}), m = L.mediator.at({0, 0});
  std::vector<std::pair<int, int>> e{{std::min(p, u), std::max(p, u)},
                                     {std::min(u, m), std::max(u, m)},
                                     {std::min(m, d), std::max(m, d)}};
  std::sort(e.begin(), e.end());
  EXPECT_EQ(L.edges, e);
}

TEST(Tile, TwoByTwoAdjacency) {
  auto L = make_tile_layout(2, 2);
  // wires: row 0 -> 0 1 2, row 1 -> 3 4 5, bottom -> 6 7; mediators (c, r): (0,0)=8 (1,0)=9 (0,1)=10 (1,1)=11
  const std::vector<std::pair<int, int>> expected{{0, 1}, {1, 2}, {1, 8}, {2, 9},  {3, 4},  {4, 5},
                                                  {4, 8}, {4, 10}, {5, 9}, {5, 11}, {6, 10}, {7, 11}};
  EXPECT_EQ(L.edges, expected);
}

TEST(Tile, GraphModeMatchesLayout) {
  for (auto [c, r] : {std::pair{1, 1}, std::pair{2, 2}, std::pair{3, 1}}) {
    Rng a(c * 10 + r), b(c * 10 + r);
    auto tg = tile_layout(c, r, a, Mode::Graph);
    auto tc = tile_layout(c, r, b, Mode::Counting);
    EXPECT_EQ(tg.tally, tc.tally);
    EXPECT_EQ(tg.g->edges(), tg.layout.edges);
    EXPECT_TRUE(equal_up_to_pauli(*tg.g, layout_reference(*tg.g, tg.layout.edges)));
  }
  EXPECT_THROW(make_tile_layout(0, 1), std::invalid_argument);
}

TEST(Tile, CostIsSumOfLShapes) {
  StrategyConfig tile{Strategy::Tile, 2, 2, 4000, 31};
  StrategyConfig one{Strategy::LShape, 0, 1, 100000, 32};
  const double per_l = mean_of(one, "net_cost");
  EXPECT_NEAR(mean_of(tile, "net_cost") / (4 * per_l), 1.0, 0.05);
}

TEST(Estimate, DeterministicAndThreadIndependent) {
  StrategyConfig a{Strategy::Naive3, 30, 1, 200, 99, 1};
  StrategyConfig b = a;
  b.threads = 4;
  auto ra = estimate_resources(a), rb = estimate_resources(b);
  std::ostringstream ca, cb;
  write_trials_csv(ra, ca);
  write_trials_csv(rb, cb);
  EXPECT_EQ(ca.str(), cb.str());
  EXPECT_EQ(summary_json(ra).dump(), summary_json(rb).dump());
  b.seed = 100;
  std::ostringstream cc;
  write_trials_csv(estimate_resources(b), cc);
  EXPECT_NE(ca.str(), cc.str());
}

TEST(Estimate, SingleTrialHasDegenerateInterval) {
  StrategyConfig cfg{Strategy::ThreeCluster, 0, 1, 1, 5};
  auto rep = estimate_resources(cfg);
  for (const auto& [name, m] : rep.metrics) {
    EXPECT_EQ(m.stderr_, 0.0) << name;
    EXPECT_EQ(m.ci_low, m.mean);
    EXPECT_EQ(m.ci_high, m.mean);
  }
}

TEST(Estimate, ReportShapeAndConservation) {
  StrategyConfig cfg{Strategy::Five, 20, 1, 50, 6};
  auto rep = estimate_resources(cfg);
  EXPECT_EQ(rep.metrics.size(), metric_names().size());
  for (const auto& r : rep.trials) {
    const auto& t = r.tally;
    EXPECT_LE(t.type_i_successes, t.type_i_attempts);
    EXPECT_DOUBLE_EQ(r.net_cost, static_cast<double>(t.bell_pairs_consumed) -
                                     static_cast<double>(t.bell_pairs_recycled) -
                                     4.0 * static_cast<double>(t.three_clusters_recycled));
  }
  for (const auto& [name, m] : rep.metrics) {
    EXPECT_LE(m.ci_low, m.mean);
    EXPECT_GE(m.ci_high, m.mean);
  }
  std::ostringstream os;
  write_trials_csv(rep, os);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
            "trial,strategy,target,consumed,recycled,attempts_I,attempts_II,bonds,qubits,net_cost");
}

TEST(Estimate, InvalidConfig) {
  EXPECT_THROW(estimate_resources({Strategy::Naive3, 2, 1, 10, 0}), std::invalid_argument);
  EXPECT_THROW(estimate_resources({Strategy::Five, 4, 1, 10, 0}), std::invalid_argument);
  EXPECT_THROW(estimate_resources({Strategy::ThreeCluster, 0, 1, 0, 0}), std::invalid_argument);
  EXPECT_THROW(estimate_resources({Strategy::Tile, 0, 1, 10, 0}), std::invalid_argument);
  EXPECT_THROW(strategy_from_name("bogus"), std::invalid_argument);
}

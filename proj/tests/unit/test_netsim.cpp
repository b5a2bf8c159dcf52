#include "dcs/netsim.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>

#include <atomic>

using namespace dcs;

namespace {

Stacked scalar_payloads(std::initializer_list<double> values) {
  Stacked x(static_cast<int>(values.size()), 1);
  int i = 0;
  for (double v : values) x.block(i++)(0) = v;
  return x;
}

}  // namespace

TEST(Broadcast, MailboxHoldsNeighborsAndSelf) {
  Graph g = build_graph("path:3");
  RoundLedger ledger(3);
  auto boxes = broadcast_round(ledger, g, scalar_payloads({10.0, 20.0, 30.0}));
  const Mailbox& mid = boxes[1];
  ASSERT_EQ(mid.entries().size(), 3u);
  EXPECT_EQ(mid.from(0)(0), 10.0);
  EXPECT_EQ(mid.from(1)(0), 20.0);
  EXPECT_EQ(mid.from(2)(0), 30.0);
  EXPECT_EQ(boxes[0].entries().size(), 2u);
  EXPECT_EQ(ledger.comm_rounds, 1);
}

TEST(Broadcast, NonNeighborReadIsLocalityError) {
  Graph g = build_graph("path:3");
  RoundLedger ledger(3);
  auto boxes = broadcast_round(ledger, g, scalar_payloads({1.0, 2.0, 3.0}));
  EXPECT_THROW(boxes[0].from(2), LocalityError);
  EXPECT_FALSE(boxes[0].has(2));
}

TEST(Broadcast, PerEdgeMessageCounts) {
  Graph g = build_graph("star:4");
  RoundLedger ledger(4);
  for (int r = 0; r < 3; ++r) broadcast_round(ledger, g, scalar_payloads({0, 0, 0, 0}));
  EXPECT_EQ(ledger.comm_rounds, 3);
  std::int64_t total = 0;
  for (const auto& [edge, count] : ledger.per_edge_messages) {
    EXPECT_TRUE(g.adjacent(edge.first, edge.second));
    EXPECT_EQ(count, 3);
    total += count;
  }
  EXPECT_EQ(total, 3 * 2 * static_cast<std::int64_t>(g.edge_count()));
}

TEST(Broadcast, MissingPayloadRejected) {
  Graph g = build_graph("path:3");
  RoundLedger ledger(3);
  std::map<int, Vector> partial{{0, Vector::Zero(1)}, {1, Vector::Zero(1)}};
  EXPECT_THROW(broadcast_round(ledger, g, partial), std::invalid_argument);
}

TEST(NeighborSum, Examples) {
  Graph g = build_graph("path:3");
  auto L = laplacian(g, 1);
  RoundLedger ledger(3);
  auto boxes = broadcast_round(ledger, g, scalar_payloads({4.0, 4.0, 4.0}));
  for (int i = 0; i < 3; ++i) EXPECT_EQ(neighbor_weighted_sum(i, boxes[i], L.row(i))(0), 0.0);
  boxes = broadcast_round(ledger, g, scalar_payloads({1.0, 0.0, 0.0}));
  EXPECT_EQ(neighbor_weighted_sum(1, boxes[1], L.row(1))(0), -1.0);
}

TEST(NeighborSum, StackedMatchesGlobalLaplacian) {
  std::mt19937_64 rng(12);
  for (const char* spec : {"path:6", "cycle:5", "erdos_renyi:9:0.4:2"}) {
    Graph g = build_graph(spec);
    auto L = laplacian(g, 3);
    Stacked x = fixtures::random_stacked(rng, g.agents(), 3);
    RoundLedger ledger(g.agents());
    auto boxes = broadcast_round(ledger, g, x);
    Stacked local(g.agents(), 3);
    for (int i = 0; i < g.agents(); ++i) local.block(i) = neighbor_weighted_sum(i, boxes[i], L.row(i));
    close_round(ledger, boxes);
    EXPECT_LT((local.flat() - apply_laplacian(L, x).flat()).norm(), 1e-13) << spec;
    for (const auto& [pair, reads] : ledger.payload_reads) {
      EXPECT_TRUE(pair.first == pair.second || g.adjacent(pair.first, pair.second));
      EXPECT_GT(reads, 0);
    }
  }
}

TEST(ForEachAgent, VisitsEveryAgentOnce) {
  for (int threads : {1, 3, 8}) {
    std::vector<std::atomic<int>> hits(17);
    for_each_agent(17, threads, [&](int i) { hits[i]++; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

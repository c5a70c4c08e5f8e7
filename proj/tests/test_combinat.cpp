#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "mgibbs/combinat.hpp"
#include "mgibbs/oracle.hpp"

using namespace mgibbs;

TEST(Partitions, EmptyGroundTwoParts) { EXPECT_EQ(count_partitions(0, 2, true), 1u); }

TEST(Partitions, TwoElementsTwoPartsWithEmpty) { EXPECT_EQ(count_partitions(2, 2, true), 4u); }

TEST(Partitions, ThreeElementsTwoNonemptyParts) { EXPECT_EQ(count_partitions(3, 2, false), 6u); }

TEST(Partitions, CountsMatchColoringFormulas) {
  for (int n = 0; n <= 6; ++n) {
    for (int p = 1; p <= 4; ++p) {
      EXPECT_EQ(count_partitions(n, p, true), static_cast<std::uint64_t>(std::pow(p, n) + 0.5));
      // Surjections by inclusion-exclusion.
      double surj = 0.0;
      for (int j = 0; j <= p; ++j) {
        surj += ((j % 2) ? -1.0 : 1.0) * std::tgamma(p + 1) / (std::tgamma(j + 1) * std::tgamma(p - j + 1)) *
                std::pow(p - j, n);
      }
      EXPECT_EQ(count_partitions(n, p, false), static_cast<std::uint64_t>(std::llround(surj))) << n << " " << p;
    }
  }
}

TEST(Partitions, BlocksCoverGroundDisjointly) {
  for_each_partition(4, 3, true, [](const std::vector<std::vector<int>>& blocks) {
    std::vector<int> seen(4, 0);
    for (const auto& b : blocks) {
      for (int v : b) ++seen[static_cast<std::size_t>(v)];
    }
    for (int s : seen) EXPECT_EQ(s, 1);
  });
}

TEST(Trees, TwoVerticesSingleEdge) {
  const auto trees = enumerate_trees(2);
  ASSERT_EQ(trees.size(), 1u);
  EXPECT_EQ(trees[0].edges, (std::vector<std::pair<int, int>>{{0, 1}}));
}

TEST(Trees, FourVerticesSixteenTrees) { EXPECT_EQ(enumerate_trees(4).size(), 16u); }

TEST(Trees, SevenVerticesDistinctConnectedTrees) {
  const auto trees = enumerate_trees(7);
  EXPECT_EQ(trees.size(), 16807u);
  EXPECT_EQ(cayley_count(7), 16807u);
  std::set<LabeledGraph> distinct(trees.begin(), trees.end());
  EXPECT_EQ(distinct.size(), trees.size());
  for (const auto& t : trees) {
    EXPECT_EQ(t.edges.size(), 6u);
    EXPECT_TRUE(is_connected(t));
  }
}

TEST(Trees, CayleyBelowExponentialFactorial) {
  for (int n = 2; n <= 12; ++n) {
    EXPECT_LT(static_cast<double>(cayley_count(n)), std::exp(n) * std::tgamma(n + 1));
  }
}

TEST(Trees, PrueferDecodeKnownCode) {
  // Code (3, 3, 3) on 5 vertices is the star centred at 3.
  const auto t = pruefer_decode(5, {3, 3, 3});
  EXPECT_EQ(t.edges, (std::vector<std::pair<int, int>>{{0, 3}, {1, 3}, {2, 3}, {3, 4}}));
}

TEST(Trees, WeightedSumMatchesCayleyForUnitWeights) {
  for (int n = 2; n <= 7; ++n) {
    std::vector<std::vector<double>> w(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 1.0));
    EXPECT_DOUBLE_EQ(oracle::tree_sum(w), static_cast<double>(cayley_count(n)));
  }
}

TEST(ConnectedGraphs, SmallCounts) {
  EXPECT_EQ(enumerate_connected_graphs(1).size(), 1u);
  EXPECT_TRUE(enumerate_connected_graphs(1)[0].edges.empty());
  EXPECT_EQ(enumerate_connected_graphs(2).size(), 1u);
  EXPECT_EQ(enumerate_connected_graphs(4).size(), 38u);
}

TEST(ConnectedGraphs, MatchExhaustiveFilter) {
  const long expected[] = {1, 1, 4, 38, 728};
  for (int n = 1; n <= 5; ++n) {
    const auto graphs = enumerate_connected_graphs(n);
    EXPECT_EQ(static_cast<long>(graphs.size()), expected[n - 1]);
    EXPECT_EQ(oracle::connected_graph_count(n), expected[n - 1]);
    std::set<LabeledGraph> distinct(graphs.begin(), graphs.end());
    EXPECT_EQ(distinct.size(), graphs.size());
  }
}

TEST(Components, EmptyEdgeSetGivesSingletons) {
  const auto comps = connected_components(LabeledGraph::make(4, {}));
  ASSERT_EQ(comps.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(comps[static_cast<std::size_t>(i)].vertices, std::vector<int>{i});
}

TEST(Components, TreeIsOneComponent) {
  EXPECT_EQ(connected_components(pruefer_decode(6, {0, 1, 2, 3})).size(), 1u);
}

TEST(Components, EdgeOnThreeVertices) {
  const auto comps = connected_components(LabeledGraph::make(3, {{0, 1}}));
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_EQ(comps[0].vertices, (std::vector<int>{0, 1}));
  EXPECT_EQ(comps[0].graph.edges, (std::vector<std::pair<int, int>>{{0, 1}}));
  EXPECT_EQ(comps[1].vertices, std::vector<int>{2});
}

TEST(LabeledGraph, RejectsBadEdges) {
  EXPECT_THROW(LabeledGraph::make(3, {{1, 1}}), Error);
  EXPECT_THROW(LabeledGraph::make(3, {{0, 3}}), Error);
}

#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <queue>
#include <sstream>

#include "anontx/keygraph/key_sharing_graph.hpp"
#include "anontx/rng.hpp"

namespace anontx::keygraph {
namespace {

// Independent oracle: BFS over an explicit adjacency matrix.
struct Matrix {
  int n;
  std::vector<std::vector<bool>> adj;
  explicit Matrix(const KeySharingGraph& g)
      : n(g.num_nodes()), adj(n, std::vector<bool>(n, false)) {
    for (const auto& [i, j] : g.edges()) adj[i][j] = adj[j][i] = true;
  }
  bool splits(const std::vector<bool>& removed) const {
    int start = -1, alive = 0;
    for (int i = 0; i < n; ++i)
      if (!removed[i]) {
        ++alive;
        if (start < 0) start = i;
      }
    if (alive <= 1) return false;
    std::vector<bool> seen(n, false);
    std::queue<int> q;
    q.push(start);
    seen[start] = true;
    int reached = 1;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v = 0; v < n; ++v) {
        if (adj[u][v] && !removed[v] && !seen[v]) {
          seen[v] = true;
          ++reached;
          q.push(v);
        }
      }
    }
    return reached < alive;
  }
  int tolerance() const {
    if (splits(std::vector<bool>(n, false))) return -1;
    for (int size = 1; size <= n - 2; ++size) {
      std::vector<bool> pick(n, false);
      std::fill(pick.begin(), pick.begin() + size, true);
      // Iterate all size-subsets via prev_permutation on a sorted mask.
      do {
        if (splits(pick)) return size - 1;
      } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    return n - 2;
  }
};

TEST(Graph, Construction) {
  KeySharingGraph g(4);
  g.add_edge(2, 0);
  EXPECT_TRUE(g.has_edge(0, 2));
  EXPECT_TRUE(g.has_edge(2, 0));
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_THROW(g.add_edge(1, 1), std::invalid_argument);
  EXPECT_THROW(g.add_edge(0, 2), std::invalid_argument);
  EXPECT_THROW(g.add_edge(0, 4), std::invalid_argument);
  EXPECT_THROW(KeySharingGraph(0), std::invalid_argument);
  EXPECT_THROW(KeySharingGraph(65), std::invalid_argument);
  EXPECT_EQ(KeySharingGraph::complete(6).num_edges(), 15u);
  EXPECT_EQ(KeySharingGraph::cycle(6).num_edges(), 6u);
  EXPECT_EQ(KeySharingGraph::star(5).degree(0), 4);
  EXPECT_EQ(KeySharingGraph::path(4).num_edges(), 3u);
  EXPECT_EQ(KeySharingGraph::from_edge_mask(3, 0b111), KeySharingGraph::complete(3));
}

TEST(Partition, Examples) {
  EXPECT_TRUE(is_partitioning_set(KeySharingGraph::star(5), {0}));
  const auto k5 = KeySharingGraph::complete(5);
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b)
      for (int c = b + 1; c < 5; ++c) EXPECT_FALSE(is_partitioning_set(k5, {a, b, c}));
  EXPECT_TRUE(is_partitioning_set(KeySharingGraph::path(3), {1}));
  EXPECT_FALSE(is_partitioning_set(KeySharingGraph::path(3), {0}));
}

TEST(Partition, RejectsOversizedSets) {
  const auto g = KeySharingGraph::complete(4);
  EXPECT_THROW(is_partitioning_set(g, {0, 1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(is_partitioning_set(g, {0, 1, 2}), std::invalid_argument);
  EXPECT_THROW(is_partitioning_set(g, {7}), std::invalid_argument);
}

TEST(Degree, Examples) {
  const auto c6 = min_degree(KeySharingGraph::cycle(6));
  EXPECT_EQ(c6.min_degree, 2);
  EXPECT_TRUE(c6.anonymity_requirement_met);
  const auto p = min_degree(KeySharingGraph::path(5));
  EXPECT_EQ(p.min_degree, 1);
  EXPECT_FALSE(p.anonymity_requirement_met);
  const auto k4 = min_degree(KeySharingGraph::complete(4));
  EXPECT_EQ(k4.min_degree, 3);
  EXPECT_TRUE(k4.anonymity_requirement_met);
}

TEST(Tolerance, Examples) {
  EXPECT_EQ(tolerance(KeySharingGraph::cycle(6)), 1);
  EXPECT_EQ(tolerance(KeySharingGraph::complete(6)), 4);
  EXPECT_EQ(tolerance(KeySharingGraph::star(5)), 0);
  EXPECT_EQ(tolerance(KeySharingGraph(4, {{0, 1}, {2, 3}})), -1);
}

TEST(Tolerance, CompleteGraphs) {
  for (int n = 3; n <= 10; ++n) {
    EXPECT_EQ(tolerance(KeySharingGraph::complete(n)), n - 2) << n;
  }
  EXPECT_EQ(tolerance(KeySharingGraph::complete(20)), 18);
}

TEST(Tolerance, MatchesOracleOnAllSmallGraphs) {
  for (int n = 2; n <= 6; ++n) {
    const int pairs = n * (n - 1) / 2;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << pairs); ++m) {
      const auto g = KeySharingGraph::from_edge_mask(n, m);
      ASSERT_EQ(tolerance_by_enumeration(g), Matrix(g).tolerance()) << n << " " << m;
      if (g.connected()) {
        ASSERT_EQ(vertex_connectivity(g) - 1, tolerance_by_enumeration(g))
            << n << " " << m;
      }
    }
  }
}

TEST(Tolerance, ConnectivityMatchesEnumerationOnRandomGraphs) {
  RngStream rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 7 + static_cast<int>(rng.below(6));
    KeySharingGraph g(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.below(100) < 55) g.add_edge(i, j);
    const int by_enum = tolerance_by_enumeration(g);
    EXPECT_EQ(by_enum, g.connected() ? vertex_connectivity(g) - 1 : -1);
  }
}

TEST(Tolerance, LargeGraphsUseConnectivity) {
  EXPECT_EQ(tolerance(KeySharingGraph::cycle(16)), 1);
  EXPECT_EQ(tolerance(KeySharingGraph::star(16)), 0);
  KeySharingGraph split(14, {{0, 1}});
  EXPECT_EQ(tolerance(split), -1);
}

TEST(Tolerance, MonotoneUnderEdgeAddition) {
  const int n = 5, pairs = 10;
  std::vector<int> tol(1 << pairs);
  for (std::uint64_t m = 0; m < tol.size(); ++m) {
    tol[m] = tolerance(KeySharingGraph::from_edge_mask(n, m));
  }
  for (std::uint64_t m = 0; m < tol.size(); ++m) {
    for (int e = 0; e < pairs; ++e) {
      EXPECT_GE(tol[m | (std::uint64_t{1} << e)], tol[m]);
    }
  }
}

TEST(Tolerance, DegreeOneMeansZero) {
  for (int n = 3; n <= 6; ++n) {
    const int pairs = n * (n - 1) / 2;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << pairs); ++m) {
      const auto g = KeySharingGraph::from_edge_mask(n, m);
      if (!g.connected() || min_degree(g).min_degree != 1) continue;
      EXPECT_EQ(tolerance(g), 0);
      for (int i = 0; i < n; ++i) {
        if (g.degree(i) != 1) continue;
        const int neighbor = std::countr_zero(g.neighbors(i));
        EXPECT_TRUE(is_partitioning_set(g, {neighbor}));
      }
    }
  }
}

// Walks every edge subset of size < n and checks for a node of degree <= 1.
bool sparse_graph_has_weak_node(int n, const std::vector<std::pair<int, int>>& pairs,
                                std::size_t next, int budget, std::vector<int>& deg) {
  if (*std::min_element(deg.begin(), deg.end()) > 1) return false;
  if (budget == 0) return true;
  for (std::size_t e = next; e < pairs.size(); ++e) {
    ++deg[pairs[e].first];
    ++deg[pairs[e].second];
    const bool ok = sparse_graph_has_weak_node(n, pairs, e + 1, budget - 1, deg);
    --deg[pairs[e].first];
    --deg[pairs[e].second];
    if (!ok) return false;
  }
  return true;
}

TEST(Bounds, FewerThanNEdgesForcesWeakNode) {
  for (int n = 3; n <= 8; ++n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::vector<int> deg(n, 0);
    EXPECT_TRUE(sparse_graph_has_weak_node(n, pairs, 0, n - 1, deg)) << n;
  }
}

TEST(Bounds, Examples) {
  EXPECT_EQ(key_lower_bound(5, 0).keys, 5);
  EXPECT_EQ(key_lower_bound(5, 0).source, BoundSource::Corollary);
  EXPECT_EQ(key_lower_bound(5, 3).keys, 10);
  const auto mid = key_lower_bound(4, 1);
  EXPECT_EQ(mid.source, BoundSource::Enumeration);
  EXPECT_EQ(mid.keys, 4);  // the 4-cycle
}

TEST(Bounds, CorollaryEndpoints) {
  for (int n = 3; n <= 10; ++n) {
    EXPECT_EQ(key_lower_bound(n, 0).keys, n);
    EXPECT_EQ(key_lower_bound(n, n - 2).keys, n * (n - 1) / 2);
  }
  EXPECT_THROW(key_lower_bound(5, 4), std::invalid_argument);
  EXPECT_THROW(key_lower_bound(5, -1), std::invalid_argument);
  EXPECT_THROW(key_lower_bound(2, 0), std::invalid_argument);
}

TEST(Bounds, CorollaryEndpointsAgreeWithSearchWhereApplicable) {
  // t = n-2 needs the complete graph; for t = 0 a min-degree-2 graph needs
  // at least n edges and the cycle achieves it.
  for (int n = 3; n <= 6; ++n) {
    EXPECT_EQ(min_edges_for_tolerance(n, n - 2), n * (n - 1) / 2);
    EXPECT_EQ(static_cast<long long>(KeySharingGraph::cycle(n).num_edges()),
              key_lower_bound(n, 0).keys);
    EXPECT_TRUE(min_degree(KeySharingGraph::cycle(n)).anonymity_requirement_met);
  }
}

TEST(Bounds, HararyMatchesSearchOnSmallGraphs) {
  for (int n = 4; n <= 6; ++n) {
    for (int t = 1; t <= n - 2; ++t) {
      EXPECT_EQ(min_edges_for_tolerance(n, t), ((t + 1) * n + 1) / 2) << n << " " << t;
    }
  }
  EXPECT_EQ(key_lower_bound(8, 2).source, BoundSource::Harary);
  EXPECT_EQ(key_lower_bound(8, 2).keys, 12);
}

TEST(Io, EdgeListRoundTrip) {
  const auto g = KeySharingGraph::cycle(5);
  std::istringstream in(write_edge_list(g));
  EXPECT_EQ(read_edge_list(in, 5), g);
  std::istringstream commented("# header\n0 1\n\n1 2  # trailing\n");
  const auto h = read_edge_list(commented);
  EXPECT_EQ(h.num_nodes(), 3);
  EXPECT_EQ(h.num_edges(), 2u);
  std::istringstream bad("0 1 2\n");
  EXPECT_THROW(read_edge_list(bad), std::invalid_argument);
  std::istringstream loop("1 1\n");
  EXPECT_THROW(read_edge_list(loop), std::invalid_argument);
}

TEST(Io, JsonRoundTrip) {
  const auto g = KeySharingGraph::star(6);
  EXPECT_EQ(graph_from_json(graph_to_json(g)), g);
  const nlohmann::json asym = {{"n", 2}, {"adjacency", {{1}, nlohmann::json::array()}}};
  EXPECT_THROW(graph_from_json(asym), std::invalid_argument);
}

}  // namespace
}  // namespace anontx::keygraph

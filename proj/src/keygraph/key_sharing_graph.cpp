#include "anontx/keygraph/key_sharing_graph.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace anontx::keygraph {

namespace {

std::uint64_t node_bit(int i) { return std::uint64_t{1} << i; }

/// Max number of internally vertex-disjoint s-t paths (s, t non-adjacent).
int disjoint_paths(const KeySharingGraph& g, int s, int t) {
  const int n = g.num_nodes();
  // Node v splits into in = 2v and out = 2v + 1.
  const int size = 2 * n;
  constexpr int kInf = std::numeric_limits<int>::max() / 2;
  std::vector<int> cap(static_cast<std::size_t>(size) * size, 0);
  auto at = [&](int a, int b) -> int& {
    return cap[static_cast<std::size_t>(a) * size + b];
  };
  for (int v = 0; v < n; ++v) {
    at(2 * v, 2 * v + 1) = (v == s || v == t) ? kInf : 1;
  }
  for (const auto& [i, j] : g.edges()) {
    at(2 * i + 1, 2 * j) = kInf;
    at(2 * j + 1, 2 * i) = kInf;
  }
  const int source = 2 * s + 1;
  const int sink = 2 * t;
  int flow = 0;
  std::vector<int> parent(size);
  while (true) {
    std::fill(parent.begin(), parent.end(), -1);
    parent[source] = source;
    std::queue<int> q;
    q.push(source);
    while (!q.empty() && parent[sink] == -1) {
      const int u = q.front();
      q.pop();
      for (int v = 0; v < size; ++v) {
        if (parent[v] == -1 && at(u, v) > 0) {
          parent[v] = u;
          q.push(v);
        }
      }
    }
    if (parent[sink] == -1) break;
    // Unit node capacities make every augmenting path carry exactly 1.
    for (int v = sink; v != source; v = parent[v]) {
      at(parent[v], v) -= 1;
      at(v, parent[v]) += 1;
    }
    ++flow;
  }
  return flow;
}

}  // namespace

KeySharingGraph::KeySharingGraph(int n) : n_(n) {
  if (n < 1 || n > kMaxNodes) {
    throw std::invalid_argument("node count must be in [1, 64]");
  }
  adjacency_.assign(n, 0);
}

KeySharingGraph::KeySharingGraph(int n,
                                 const std::vector<std::pair<int, int>>& edges)
    : KeySharingGraph(n) {
  for (const auto& [i, j] : edges) add_edge(i, j);
}

KeySharingGraph KeySharingGraph::complete(int n) {
  KeySharingGraph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

KeySharingGraph KeySharingGraph::cycle(int n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least 3 nodes");
  KeySharingGraph g(n);
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

KeySharingGraph KeySharingGraph::star(int n) {
  KeySharingGraph g(n);
  for (int i = 1; i < n; ++i) g.add_edge(0, i);
  return g;
}

KeySharingGraph KeySharingGraph::path(int n) {
  KeySharingGraph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

KeySharingGraph KeySharingGraph::from_edge_mask(int n, std::uint64_t mask) {
  KeySharingGraph g(n);
  int e = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++e) {
      if (e < 64 && ((mask >> e) & 1)) g.add_edge(i, j);
    }
  }
  return g;
}

void KeySharingGraph::add_edge(int i, int j) {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) {
    throw std::invalid_argument("edge endpoint out of range");
  }
  if (i == j) throw std::invalid_argument("self-loops are not allowed");
  const auto key = std::minmax(i, j);
  if (!edges_.emplace(key.first, key.second).second) {
    throw std::invalid_argument("duplicate edge " + std::to_string(key.first) +
                                "-" + std::to_string(key.second));
  }
  adjacency_[i] |= node_bit(j);
  adjacency_[j] |= node_bit(i);
}

bool KeySharingGraph::has_edge(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) return false;
  return (adjacency_[i] >> j) & 1;
}

int KeySharingGraph::degree(int i) const {
  return std::popcount(adjacency_.at(i));
}

bool KeySharingGraph::induced_connected(std::uint64_t nodes) const {
  if (std::popcount(nodes) <= 1) return true;
  std::uint64_t reached = nodes & (~nodes + 1);  // lowest node
  std::uint64_t frontier = reached;
  while (frontier) {
    std::uint64_t next = 0;
    for (std::uint64_t f = frontier; f; f &= f - 1) {
      next |= adjacency_[std::countr_zero(f)];
    }
    next &= nodes & ~reached;
    reached |= next;
    frontier = next;
  }
  return reached == nodes;
}

bool KeySharingGraph::connected() const { return induced_connected(all_nodes()); }

bool is_partitioning_set(const KeySharingGraph& g, const PlayerSet& colluders) {
  const int n = g.num_nodes();
  const auto who = normalize_players(colluders, n, "colluder");
  if (static_cast<int>(who.size()) > n - 2) {
    throw std::invalid_argument(
        "colluder sets must leave at least two honest nodes");
  }
  std::uint64_t honest = g.all_nodes();
  for (PlayerId c : who) honest &= ~node_bit(c);
  return !g.induced_connected(honest);
}

DegreeReport min_degree(const KeySharingGraph& g) {
  int d = std::numeric_limits<int>::max();
  for (int i = 0; i < g.num_nodes(); ++i) d = std::min(d, g.degree(i));
  return {d, d >= 2};
}

int vertex_connectivity(const KeySharingGraph& g) {
  const int n = g.num_nodes();
  if (!g.connected()) return 0;
  int best = n - 1;
  for (int s = 0; s < n; ++s) {
    for (int t = s + 1; t < n; ++t) {
      if (g.has_edge(s, t)) continue;
      best = std::min(best, disjoint_paths(g, s, t));
    }
  }
  return best;
}

int tolerance_by_enumeration(const KeySharingGraph& g) {
  const int n = g.num_nodes();
  if (n > 24) {
    throw std::invalid_argument("graph too large for subset enumeration");
  }
  if (!g.connected()) return -1;
  const std::uint64_t all = g.all_nodes();
  int smallest = n - 1;  // nothing of size <= n-2 partitions
  for (std::uint64_t removed = 1; removed <= all; ++removed) {
    const int size = std::popcount(removed);
    if (size >= smallest || size > n - 2) continue;
    if (!g.induced_connected(all & ~removed)) smallest = size;
  }
  return smallest - 1;
}

int tolerance(const KeySharingGraph& g) {
  if (g.num_nodes() <= kEnumerationNodeLimit) {
    return tolerance_by_enumeration(g);
  }
  return vertex_connectivity(g) - 1;
}

long long min_edges_for_tolerance(int n, int t) {
  if (n < 2 || n > kGraphSearchNodeLimit) {
    throw std::invalid_argument("graph search limited to 2..6 nodes");
  }
  const int pairs = n * (n - 1) / 2;
  long long best = std::numeric_limits<long long>::max();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) {
    const int edges = std::popcount(mask);
    if (edges >= best) continue;
    if (tolerance_by_enumeration(KeySharingGraph::from_edge_mask(n, mask)) >= t) {
      best = edges;
    }
  }
  return best;
}

KeyBound key_lower_bound(int n, int t) {
  if (n < 3) throw std::invalid_argument("key_lower_bound needs n >= 3");
  if (t < 0 || t > n - 2) {
    throw std::invalid_argument("t must lie in [0, n-2]");
  }
  if (t == 0) return {n, BoundSource::Corollary};
  if (t == n - 2) {
    return {static_cast<long long>(n) * (n - 1) / 2, BoundSource::Corollary};
  }
  if (n <= kGraphSearchNodeLimit) {
    return {min_edges_for_tolerance(n, t), BoundSource::Enumeration};
  }
  const long long k = t + 1;
  return {(k * n + 1) / 2, BoundSource::Harary};
}

KeySharingGraph read_edge_list(std::istream& in, int n) {
  std::vector<std::pair<int, int>> edges;
  int max_index = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    int i, j;
    if (!(ss >> i)) continue;
    std::string trailing;
    if (!(ss >> j) || (ss >> trailing)) {
      throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                  ": expected \"i j\"");
    }
    edges.emplace_back(i, j);
    max_index = std::max({max_index, i, j});
  }
  if (n < 0) n = max_index + 1;
  if (n < 1) throw std::invalid_argument("edge list describes no nodes");
  return KeySharingGraph(n, edges);
}

std::string write_edge_list(const KeySharingGraph& g) {
  std::string out;
  for (const auto& [i, j] : g.edges()) {
    out += std::to_string(i) + " " + std::to_string(j) + "\n";
  }
  return out;
}

KeySharingGraph graph_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  const auto& adj = j.at("adjacency");
  if (!adj.is_array() || static_cast<int>(adj.size()) != n) {
    throw std::invalid_argument("adjacency must list every node");
  }
  KeySharingGraph g(n);
  for (int i = 0; i < n; ++i) {
    for (const auto& v : adj[i]) {
      const int k = v.get<int>();
      if (k < 0 || k >= n || k == i) {
        throw std::invalid_argument("bad adjacency entry");
      }
      if (!g.has_edge(i, k)) g.add_edge(i, k);
    }
  }
  // Adjacency must be symmetric.
  for (int i = 0; i < n; ++i) {
    std::uint64_t listed = 0;
    for (const auto& v : adj[i]) listed |= std::uint64_t{1} << v.get<int>();
    if (listed != g.neighbors(i)) {
      throw std::invalid_argument("adjacency lists are not symmetric");
    }
  }
  return g;
}

nlohmann::json graph_to_json(const KeySharingGraph& g) {
  nlohmann::json adj = nlohmann::json::array();
  for (int i = 0; i < g.num_nodes(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < g.num_nodes(); ++k) {
      if (g.has_edge(i, k)) row.push_back(k);
    }
    adj.push_back(std::move(row));
  }
  return {{"n", g.num_nodes()}, {"adjacency", std::move(adj)}};
}

}  // namespace anontx::keygraph

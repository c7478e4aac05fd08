#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "anontx/bits.hpp"
#include "json.hpp"

namespace anontx::keygraph {

/// Players as nodes, one edge per pairwise shared key bit.
class KeySharingGraph {
 public:
  static constexpr int kMaxNodes = 64;

  explicit KeySharingGraph(int n);
  KeySharingGraph(int n, const std::vector<std::pair<int, int>>& edges);

  static KeySharingGraph complete(int n);
  static KeySharingGraph cycle(int n);
  /// Node 0 is the center.
  static KeySharingGraph star(int n);
  static KeySharingGraph path(int n);
  /// Bit e of `mask` selects the e-th pair in (0,1), (0,2), ..., (n-2,n-1)
  /// order.
  static KeySharingGraph from_edge_mask(int n, std::uint64_t mask);

  /// Throws std::invalid_argument on self-loops, out-of-range nodes or
  /// duplicate edges.
  void add_edge(int i, int j);
  bool has_edge(int i, int j) const;

  int num_nodes() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::set<std::pair<int, int>>& edges() const { return edges_; }
  std::uint64_t neighbors(int i) const { return adjacency_.at(i); }
  int degree(int i) const;

  /// Whether the nodes in `nodes` (bitmask) induce a connected subgraph.
  /// The empty set and singletons count as connected.
  bool induced_connected(std::uint64_t nodes) const;
  bool connected() const;

  std::uint64_t all_nodes() const {
    return n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
  }

  friend bool operator==(const KeySharingGraph& a, const KeySharingGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_;
  std::set<std::pair<int, int>> edges_;
  std::vector<std::uint64_t> adjacency_;
};

/// True iff removing `colluders` leaves the honest nodes disconnected.
/// Colluder sets larger than n - 2 are rejected with std::invalid_argument.
bool is_partitioning_set(const KeySharingGraph& g, const PlayerSet& colluders);

struct DegreeReport {
  int min_degree = 0;
  /// min_degree >= 2
  bool anonymity_requirement_met = false;
};
DegreeReport min_degree(const KeySharingGraph& g);

/// Size of the smallest node set whose removal disconnects the rest; n - 1
/// for complete graphs, 0 for disconnected ones. Max-flow over node-split
/// graphs.
int vertex_connectivity(const KeySharingGraph& g);

/// Largest t such that no colluder set of size <= t partitions g, by
/// exhaustive subset search. -1 for disconnected graphs.
int tolerance_by_enumeration(const KeySharingGraph& g);

inline constexpr int kEnumerationNodeLimit = 12;
inline constexpr int kGraphSearchNodeLimit = 6;

/// Enumeration for n <= 12, vertex connectivity minus one above that.
int tolerance(const KeySharingGraph& g);

enum class BoundSource {
  /// n for t = 0, n(n-1)/2 for t = n-2.
  Corollary,
  /// Minimum over all graphs on n nodes, n <= 6.
  Enumeration,
  /// ceil((t+1) n / 2): fewest edges of a (t+1)-connected graph.
  Harary,
};

struct KeyBound {
  long long keys = 0;
  BoundSource source = BoundSource::Corollary;
};

/// Minimum number of pairwise key bits for sender anonymity against
/// collusions of t players. Requires n >= 3 and 0 <= t <= n - 2.
KeyBound key_lower_bound(int n, int t);

/// Minimum edge count over all graphs on n nodes with tolerance >= t.
/// Exhaustive; n <= kGraphSearchNodeLimit.
long long min_edges_for_tolerance(int n, int t);

// I/O. Edge list: one "i j" pair per line, node count given by the caller or
// taken as max index + 1; blank lines and '#' comments are skipped.
KeySharingGraph read_edge_list(std::istream& in, int n = -1);
std::string write_edge_list(const KeySharingGraph& g);

/// {"n": 4, "adjacency": [[1, 3], [0, 2], ...]}
KeySharingGraph graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const KeySharingGraph& g);

}  // namespace anontx::keygraph

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <tuple>
#include <utility>
#include <vector>

#include "mgibbs/error.hpp"

namespace mgibbs {

/// Undirected simple graph on vertices 0..n-1. Edges are stored as (i<j), sorted.
struct LabeledGraph {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;

  static LabeledGraph make(int n, std::vector<std::pair<int, int>> edges) {
    require(n >= 0, ErrorKind::invalid_argument, "negative vertex count");
    for (auto& e : edges) {
      require(e.first != e.second, ErrorKind::invalid_argument, "self-loop");
      require(e.first >= 0 && e.second >= 0 && e.first < n && e.second < n, ErrorKind::invalid_argument,
              "edge endpoint out of range");
      if (e.first > e.second) std::swap(e.first, e.second);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return LabeledGraph{n, std::move(edges)};
  }

  bool operator==(const LabeledGraph&) const = default;
  bool operator<(const LabeledGraph& o) const {
    return std::tie(vertex_count, edges) < std::tie(o.vertex_count, o.edges);
  }
};

/// A connected component: `vertices` in ascending order, `graph` relabelled to 0..k-1.
struct Component {
  std::vector<int> vertices;
  LabeledGraph graph;
};

namespace detail {
struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};
}  // namespace detail

inline std::vector<Component> connected_components(const LabeledGraph& g) {
  detail::DisjointSets sets(g.vertex_count);
  for (auto [a, b] : g.edges) sets.unite(a, b);
  std::vector<int> root_slot(static_cast<std::size_t>(g.vertex_count), -1);
  std::vector<Component> out;
  std::vector<int> local(static_cast<std::size_t>(g.vertex_count), -1);
  for (int v = 0; v < g.vertex_count; ++v) {
    const int r = sets.find(v);
    if (root_slot[r] < 0) {
      root_slot[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    auto& c = out[static_cast<std::size_t>(root_slot[r])];
    local[v] = static_cast<int>(c.vertices.size());
    c.vertices.push_back(v);
  }
  for (auto& c : out) c.graph.vertex_count = static_cast<int>(c.vertices.size());
  for (auto [a, b] : g.edges) {
    auto& c = out[static_cast<std::size_t>(root_slot[sets.find(a)])];
    c.graph.edges.emplace_back(local[a], local[b]);
  }
  for (auto& c : out) std::sort(c.graph.edges.begin(), c.graph.edges.end());
  return out;
}

inline bool is_connected(const LabeledGraph& g) { return connected_components(g).size() <= 1; }

/// Connectivity of the graph on the vertex subset `mask` given adjacency bitmasks.
inline bool mask_connected(std::uint32_t mask, const std::vector<std::uint32_t>& adjacency) {
  if (mask == 0) return true;
  std::uint32_t seen = mask & (~mask + 1);
  std::uint32_t frontier = seen;
  while (frontier != 0) {
    std::uint32_t next = 0;
    for (std::uint32_t f = frontier; f != 0; f &= f - 1) {
      next |= adjacency[static_cast<std::size_t>(__builtin_ctz(f))];
    }
    next &= mask & ~seen;
    seen |= next;
    frontier = next;
  }
  return seen == mask;
}

/// Visits every ordered p-tuple of disjoint blocks covering {0..n-1}. Without
/// `allow_empty`, every block must be nonempty.
template <class Visit>
void for_each_partition(int n, int parts, bool allow_empty, Visit&& visit) {
  require(n >= 0 && parts >= 1, ErrorKind::invalid_argument, "need n >= 0 and p >= 1");
  require(n <= 30, ErrorKind::size_limit, "ground set too large for partition enumeration");
  std::vector<int> colour(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<int>> blocks(static_cast<std::size_t>(parts));
  for (;;) {
    for (auto& b : blocks) b.clear();
    for (int i = 0; i < n; ++i) blocks[static_cast<std::size_t>(colour[i])].push_back(i);
    const bool ok = allow_empty || std::none_of(blocks.begin(), blocks.end(), [](const auto& b) { return b.empty(); });
    if (ok) visit(static_cast<const std::vector<std::vector<int>>&>(blocks));
    int i = 0;
    while (i < n && colour[i] == parts - 1) colour[i++] = 0;
    if (i == n) return;
    ++colour[i];
  }
}

inline std::uint64_t count_partitions(int n, int parts, bool allow_empty) {
  std::uint64_t count = 0;
  for_each_partition(n, parts, allow_empty, [&](const auto&) { ++count; });
  return count;
}

inline constexpr int kDefaultTreeCap = 9;

/// Decodes a Pruefer sequence (values in 0..n-1, length n-2) into its tree.
inline LabeledGraph pruefer_decode(int n, const std::vector<int>& code) {
  std::vector<int> degree(static_cast<std::size_t>(n), 1);
  for (int c : code) ++degree[c];
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(n - 1));
  for (int c : code) {
    int leaf = 0;
    while (degree[leaf] != 1) ++leaf;
    edges.emplace_back(std::min(leaf, c), std::max(leaf, c));
    --degree[leaf];
    --degree[c];
  }
  int u = -1;
  for (int v = 0; v < n; ++v) {
    if (degree[v] == 1) {
      if (u < 0) {
        u = v;
      } else {
        edges.emplace_back(u, v);
        break;
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  return LabeledGraph{n, std::move(edges)};
}

/// Visits each labeled tree on n vertices exactly once.
template <class Visit>
void for_each_tree(int n, Visit&& visit, int cap = kDefaultTreeCap) {
  require(n >= 1, ErrorKind::invalid_argument, "tree needs at least one vertex");
  require(n <= cap, ErrorKind::size_limit, "tree enumeration above size cap");
  if (n == 1) {
    visit(LabeledGraph{1, {}});
    return;
  }
  if (n == 2) {
    visit(LabeledGraph{2, {{0, 1}}});
    return;
  }
  std::vector<int> code(static_cast<std::size_t>(n - 2), 0);
  for (;;) {
    visit(static_cast<const LabeledGraph&>(pruefer_decode(n, code)));
    std::size_t i = 0;
    while (i < code.size() && code[i] == n - 1) code[i++] = 0;
    if (i == code.size()) return;
    ++code[i];
  }
}

inline std::vector<LabeledGraph> enumerate_trees(int n, int cap = kDefaultTreeCap) {
  std::vector<LabeledGraph> out;
  for_each_tree(n, [&](const LabeledGraph& t) { out.push_back(t); }, cap);
  return out;
}

inline constexpr int kConnectedGraphCap = 5;

/// Visits each connected labeled graph on n vertices (exhaustive filter).
template <class Visit>
void for_each_connected_graph(int n, Visit&& visit) {
  require(n >= 1, ErrorKind::invalid_argument, "graph needs at least one vertex");
  require(n <= kConnectedGraphCap, ErrorKind::size_limit, "connected-graph enumeration is limited to n <= 5");
  std::vector<std::pair<int, int>> all;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) all.emplace_back(i, j);
  }
  const std::uint32_t total = 1u << all.size();
  for (std::uint32_t bits = 0; bits < total; ++bits) {
    std::vector<std::uint32_t> adjacency(static_cast<std::size_t>(n), 0);
    LabeledGraph g{n, {}};
    for (std::size_t e = 0; e < all.size(); ++e) {
      if (bits & (1u << e)) {
        g.edges.push_back(all[e]);
        adjacency[static_cast<std::size_t>(all[e].first)] |= 1u << all[e].second;
        adjacency[static_cast<std::size_t>(all[e].second)] |= 1u << all[e].first;
      }
    }
    if (mask_connected((1u << n) - 1, adjacency)) visit(static_cast<const LabeledGraph&>(g));
  }
}

inline std::vector<LabeledGraph> enumerate_connected_graphs(int n) {
  std::vector<LabeledGraph> out;
  for_each_connected_graph(n, [&](const LabeledGraph& g) { out.push_back(g); });
  return out;
}

/// n^{n-2} for n >= 2, 1 for n = 1.
inline std::uint64_t cayley_count(int n) {
  if (n <= 2) return 1;
  std::uint64_t c = 1;
  for (int i = 0; i < n - 2; ++i) c *= static_cast<std::uint64_t>(n);
  return c;
}

}  // namespace mgibbs

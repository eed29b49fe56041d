#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "jacloc/errors.hpp"

namespace jacloc {

// Enumeration routines iterate over 2^#E edge subsets / assignments; beyond
// this the exhaustive algorithms are no longer appropriate.
inline constexpr int kMaxEnumerationEdges = 16;

/// One edge of a multigraph. The stored (src, dst) pair is the reference
/// orientation; loops (src == dst) and parallel edges are allowed.
struct Edge {
  int id;
  int src;
  int dst;

  bool is_loop() const { return src == dst; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class Direction { Forward, Backward };

inline const char* to_string(Direction d) {
  return d == Direction::Forward ? "forward" : "backward";
}

/// A total assignment of a direction to every edge, relative to the
/// reference orientation.
struct Orientation {
  std::map<int, Direction> assignment;

  friend bool operator==(const Orientation&, const Orientation&) = default;
};

/// A simple directed cycle: cyclically ordered head-to-tail directed edges
/// visiting no vertex twice. A loop edge alone is a circuit. Canonical form
/// starts at the smallest edge id of the support.
struct OrientedCircuit {
  std::vector<std::pair<int, Direction>> edges;

  OrientedCircuit reversed() const {
    OrientedCircuit r;
    r.edges.assign(edges.rbegin(), edges.rend());
    for (auto& [id, dir] : r.edges)
      dir = dir == Direction::Forward ? Direction::Backward : Direction::Forward;
    // keep the canonical starting point (minimal edge id first)
    auto it = std::min_element(r.edges.begin(), r.edges.end());
    std::rotate(r.edges.begin(), it, r.edges.end());
    return r;
  }

  friend bool operator==(const OrientedCircuit&, const OrientedCircuit&) = default;
  friend auto operator<=>(const OrientedCircuit&, const OrientedCircuit&) = default;
};

class Circulation;
struct GraphContraction;

/// Vertex-labelled multigraph with stable integer ids. Immutable after
/// construction; all operations are const and pure.
class MultiGraph {
 public:
  MultiGraph() = default;

  MultiGraph(std::vector<int> vertices, std::vector<Edge> edges)
      : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    std::sort(vertices_.begin(), vertices_.end());
    if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
      throw InvalidDataError("duplicate vertex id");
    std::set<int> edge_ids;
    for (const Edge& e : edges_) {
      if (!edge_ids.insert(e.id).second)
        throw InvalidDataError("duplicate edge id " + std::to_string(e.id));
      if (!has_vertex(e.src) || !has_vertex(e.dst))
        throw InvalidDataError("edge " + std::to_string(e.id) +
                               " references an undeclared vertex");
    }
  }

  const std::vector<int>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  bool has_vertex(int v) const {
    return std::binary_search(vertices_.begin(), vertices_.end(), v);
  }

  bool has_edge(int id) const { return find_edge(id) != nullptr; }

  const Edge& edge(int id) const {
    if (const Edge* e = find_edge(id)) return *e;
    throw InvalidDataError("unknown edge id " + std::to_string(id));
  }

  std::set<int> edge_ids() const {
    std::set<int> ids;
    for (const Edge& e : edges_) ids.insert(e.id);
    return ids;
  }

  /// Number of connected components of the underlying undirected graph.
  int component_count() const {
    std::map<int, int> comp = component_labels();
    std::set<int> labels;
    for (const auto& [v, c] : comp) labels.insert(c);
    return static_cast<int>(labels.size());
  }

  /// Component label per vertex: the smallest vertex id in its component.
  std::map<int, int> component_labels() const {
    std::map<int, int> parent;
    for (int v : vertices_) parent[v] = v;
    for (const Edge& e : edges_) unite(parent, e.src, e.dst);
    std::map<int, int> label;
    for (int v : vertices_) label[v] = find(parent, v);
    return label;
  }

  bool connected() const { return vertices_.empty() || component_count() == 1; }

  /// First Betti number #E - #V + #components.
  int b1() const { return num_edges() - num_vertices() + component_count(); }

  /// Bridges: edges whose removal increases the component count. Loops and
  /// members of parallel families are never bridges.
  std::set<int> separating_edges() const {
    std::set<int> bridges;
    const auto inc = incidence();
    std::map<int, int> disc;  // discovery index; absent = unvisited
    std::map<int, int> low;
    int timer = 0;
    // DFS low-link over edge ids: the edge used to enter a vertex is skipped
    // exactly once, so a parallel twin still closes the cycle.
    auto dfs = [&](auto&& self, int v, int via_edge) -> void {
      disc[v] = low[v] = timer++;
      bool entry_skipped = false;
      for (const auto& [eid, other] : inc.at(v)) {
        if (eid == via_edge && !entry_skipped) {
          entry_skipped = true;
          continue;
        }
        if (other == v) continue;  // loop
        auto it = disc.find(other);
        if (it == disc.end()) {
          self(self, other, eid);
          low[v] = std::min(low[v], low[other]);
          if (low[other] > disc[v]) bridges.insert(eid);
        } else {
          low[v] = std::min(low[v], it->second);
        }
      }
    };
    for (int root : vertices_)
      if (!disc.count(root)) dfs(dfs, root, -1);
    return bridges;
  }

  /// Contracts every edge whose id is NOT in `keep`; kept edges survive with
  /// mapped endpoints (possibly becoming loops). Surviving vertex classes are
  /// named by their smallest original vertex id.
  GraphContraction contract_edges(const std::set<int>& keep) const;

  /// All orientations in which every edge lies on a directed cycle,
  /// equivalently every connected component is strongly connected. An
  /// edgeless graph has exactly one (empty) such orientation; a graph with a
  /// bridge has none. Output is lexicographic in the direction vector taken
  /// in stored edge order, Forward < Backward.
  std::vector<Orientation> totally_cyclic_orientations() const {
    if (num_edges() > kMaxEnumerationEdges)
      throw ScaleLimitError("orientation enumeration limited to " +
                            std::to_string(kMaxEnumerationEdges) + " edges");
    std::vector<Orientation> result;
    if (edges_.empty()) {
      result.push_back(Orientation{});
      return result;
    }
    if (!separating_edges().empty()) return result;
    const int m = num_edges();
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
      Orientation o;
      for (int i = 0; i < m; ++i)
        o.assignment[edges_[i].id] =
            (mask >> (m - 1 - i)) & 1u ? Direction::Backward : Direction::Forward;
      if (is_totally_cyclic(o)) result.push_back(std::move(o));
    }
    return result;
  }

  /// Checks the defining property directly: every connected component of the
  /// oriented graph is strongly connected. The orientation must be total.
  bool is_totally_cyclic(const Orientation& o) const {
    for (const Edge& e : edges_)
      if (!o.assignment.count(e.id))
        throw InvalidDataError("orientation is missing edge " + std::to_string(e.id));
    std::map<int, int> comp = component_labels();
    std::map<int, std::vector<int>> out, in;
    for (const Edge& e : edges_) {
      const bool fwd = o.assignment.at(e.id) == Direction::Forward;
      const int a = fwd ? e.src : e.dst;
      const int b = fwd ? e.dst : e.src;
      out[a].push_back(b);
      in[b].push_back(a);
    }
    std::set<int> roots;
    for (int v : vertices_) roots.insert(comp.at(v));
    for (int root : roots) {
      std::set<int> members;
      for (int v : vertices_)
        if (comp.at(v) == root) members.insert(v);
      if (members.size() == 1) continue;
      if (reach(root, out) != members) return false;
      if (reach(root, in) != members) return false;
    }
    return true;
  }

  /// All simple directed cycles. Each undirected circuit contributes exactly
  /// two traversal directions; a loop contributes two. Output is ordered
  /// lexicographically by (sorted edge-id support, direction vector).
  std::vector<OrientedCircuit> oriented_circuits() const {
    if (num_edges() > kMaxEnumerationEdges)
      throw ScaleLimitError("circuit enumeration limited to " +
                            std::to_string(kMaxEnumerationEdges) + " edges");
    std::vector<OrientedCircuit> result;
    const int m = num_edges();
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
      std::vector<Edge> sub;
      for (int i = 0; i < m; ++i)
        if ((mask >> i) & 1u) sub.push_back(edges_[i]);
      if (!subset_is_circuit(sub)) continue;
      auto [fwd, bwd] = traversals(sub);
      result.push_back(std::move(fwd));
      result.push_back(std::move(bwd));
    }
    std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) {
      auto key = [](const OrientedCircuit& c) {
        std::vector<int> support;
        for (auto& [id, dir] : c.edges) support.push_back(id);
        std::sort(support.begin(), support.end());
        std::vector<int> dirs;
        for (int id : support)
          for (auto& [eid, dir] : c.edges)
            if (eid == id) dirs.push_back(dir == Direction::Forward ? 0 : 1);
        return std::make_pair(support, dirs);
      };
      return key(a) < key(b);
    });
    return result;
  }

  /// Incidence list: for each vertex, (edge id, other endpoint) pairs in
  /// stored edge order; loops appear twice.
  std::map<int, std::vector<std::pair<int, int>>> incidence() const {
    std::map<int, std::vector<std::pair<int, int>>> inc;
    for (int v : vertices_) inc[v];
    for (const Edge& e : edges_) {
      inc[e.src].push_back({e.id, e.dst});
      if (!e.is_loop()) inc[e.dst].push_back({e.id, e.src});
      else inc[e.src].push_back({e.id, e.src});
    }
    return inc;
  }

  int valence(int v) const {
    int count = 0;
    for (const Edge& e : edges_) {
      if (e.src == v) ++count;
      if (e.dst == v) ++count;  // loops count twice
    }
    return count;
  }

  friend bool operator==(const MultiGraph&, const MultiGraph&) = default;

 private:
  const Edge* find_edge(int id) const {
    for (const Edge& e : edges_)
      if (e.id == id) return &e;
    return nullptr;
  }

  static int find(std::map<int, int>& parent, int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }

  static void unite(std::map<int, int>& parent, int a, int b) {
    a = find(parent, a);
    b = find(parent, b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;  // keep the smallest id as the class representative
  }

  static std::set<int> reach(int start, const std::map<int, std::vector<int>>& adj) {
    std::set<int> seen{start};
    std::vector<int> todo{start};
    while (!todo.empty()) {
      int v = todo.back();
      todo.pop_back();
      auto it = adj.find(v);
      if (it == adj.end()) continue;
      for (int w : it->second)
        if (seen.insert(w).second) todo.push_back(w);
    }
    return seen;
  }

  /// A nonempty edge subset is a simple cycle iff it is connected and every
  /// incident vertex has degree exactly 2 within the subset (a loop counts
  /// twice at its vertex).
  static bool subset_is_circuit(const std::vector<Edge>& sub) {
    std::map<int, int> degree;
    for (const Edge& e : sub) {
      degree[e.src] += 1;
      degree[e.dst] += 1;
    }
    for (const auto& [v, d] : degree)
      if (d != 2) return false;
    std::map<int, int> parent;
    for (const auto& [v, d] : degree) parent[v] = v;
    for (const Edge& e : sub) unite(parent, e.src, e.dst);
    int root = find(parent, sub.front().src);
    for (const auto& [v, d] : degree)
      if (find(parent, v) != root) return false;
    return true;
  }

  /// The two directed traversals of a circuit subset, each starting at the
  /// smallest edge id.
  static std::pair<OrientedCircuit, OrientedCircuit> traversals(std::vector<Edge> sub) {
    std::sort(sub.begin(), sub.end(),
              [](const Edge& a, const Edge& b) { return a.id < b.id; });
    const Edge& start = sub.front();
    auto walk = [&sub, &start](Direction first_dir) {
      OrientedCircuit c;
      c.edges.push_back({start.id, first_dir});
      if (start.is_loop()) return c;
      const int home = first_dir == Direction::Forward ? start.src : start.dst;
      int at = first_dir == Direction::Forward ? start.dst : start.src;
      int prev_edge = start.id;
      while (at != home) {
        for (const Edge& e : sub) {
          if (e.id == prev_edge) continue;
          if (e.src == at) {
            c.edges.push_back({e.id, Direction::Forward});
            at = e.dst;
            prev_edge = e.id;
            break;
          }
          if (e.dst == at) {
            c.edges.push_back({e.id, Direction::Backward});
            at = e.src;
            prev_edge = e.id;
            break;
          }
        }
      }
      return c;
    };
    return {walk(Direction::Forward), walk(Direction::Backward)};
  }

  std::vector<int> vertices_;
  std::vector<Edge> edges_;
};

struct GraphContraction {
  MultiGraph graph;
  std::map<int, int> vertex_map;  // original vertex -> surviving vertex
};

inline GraphContraction MultiGraph::contract_edges(const std::set<int>& keep) const {
  for (int id : keep)
    if (!has_edge(id))
      throw InvalidDataError("contract_edges: unknown edge id " + std::to_string(id));
  std::map<int, int> parent;
  for (int v : vertices_) parent[v] = v;
  for (const Edge& e : edges_)
    if (!keep.count(e.id)) unite(parent, e.src, e.dst);
  std::map<int, int> vmap;
  std::set<int> new_vertices;
  for (int v : vertices_) {
    vmap[v] = find(parent, v);
    new_vertices.insert(vmap[v]);
  }
  std::vector<Edge> new_edges;
  for (const Edge& e : edges_)
    if (keep.count(e.id)) new_edges.push_back({e.id, vmap.at(e.src), vmap.at(e.dst)});
  return {MultiGraph(std::vector<int>(new_vertices.begin(), new_vertices.end()),
                     std::move(new_edges)),
          std::move(vmap)};
}

/// Integer flow with zero signed boundary at every vertex, stored sparsely
/// relative to reference orientations. The support of a circulation can never
/// contain a bridge (flow across a bridge has no return path).
class Circulation {
 public:
  Circulation() = default;

  Circulation(const MultiGraph& g, const std::map<int, int>& flow) {
    std::map<int, int> boundary;
    for (const auto& [id, f] : flow) {
      const Edge& e = g.edge(id);
      if (f == 0) continue;
      flow_[id] = f;
      boundary[e.src] += f;
      boundary[e.dst] -= f;
    }
    for (const auto& [v, b] : boundary)
      if (b != 0)
        throw InvalidDataError("flow has nonzero boundary at vertex " + std::to_string(v));
  }

  int flow(int edge_id) const {
    auto it = flow_.find(edge_id);
    return it == flow_.end() ? 0 : it->second;
  }

  const std::map<int, int>& entries() const { return flow_; }

  bool is_zero() const { return flow_.empty(); }

  int l1_norm() const {
    int n = 0;
    for (const auto& [id, f] : flow_) n += std::abs(f);
    return n;
  }

  friend bool operator==(const Circulation&, const Circulation&) = default;
  friend auto operator<=>(const Circulation&, const Circulation&) = default;

 private:
  std::map<int, int> flow_;  // zero entries omitted
};

/// The +/-1 indicator flow of a circuit relative to reference orientations.
inline Circulation circuit_to_circulation(const OrientedCircuit& c, const MultiGraph& g) {
  std::map<int, int> flow;
  for (const auto& [id, dir] : c.edges)
    flow[id] += dir == Direction::Forward ? 1 : -1;
  return Circulation(g, flow);
}

}  // namespace jacloc

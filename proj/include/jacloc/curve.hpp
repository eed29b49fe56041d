#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "jacloc/errors.hpp"
#include "jacloc/multigraph.hpp"

namespace jacloc {

// Subcurve enumeration walks all 2^#V - 2 proper vertex subsets.
inline constexpr int kMaxSubcurveVertices = 12;

/// Dual graph of a connected nodal curve: vertices are irreducible
/// components carrying their geometric genus, edges are nodes.
class CurveGraph {
 public:
  CurveGraph(MultiGraph graph, std::map<int, int> genus_of)
      : graph_(std::move(graph)), genus_(std::move(genus_of)) {
    if (!graph_.connected())
      throw InvalidDataError("curve dual graph must be connected");
    for (int v : graph_.vertices()) {
      auto it = genus_.find(v);
      if (it == genus_.end())
        throw InvalidDataError("missing genus for vertex " + std::to_string(v));
      if (it->second < 0)
        throw InvalidDataError("negative genus at vertex " + std::to_string(v));
    }
    if (genus_.size() != graph_.vertices().size())
      throw InvalidDataError("genus assigned to an undeclared vertex");
  }

  const MultiGraph& graph() const { return graph_; }
  int genus_of(int v) const { return genus_.at(v); }

  int arithmetic_genus() const {
    int g = graph_.b1();
    for (const auto& [v, gv] : genus_) g += gv;
    return g;
  }

 private:
  MultiGraph graph_;
  std::map<int, int> genus_;
};

/// Nonempty proper subset of the components of a curve.
struct Subcurve {
  std::set<int> vertices;
};

inline void validate_subcurve(const CurveGraph& c, const Subcurve& y) {
  if (y.vertices.empty()) throw InvalidDataError("subcurve must be nonempty");
  if (static_cast<int>(y.vertices.size()) >= c.graph().num_vertices())
    throw InvalidDataError("subcurve must be a proper subset of the components");
  for (int v : y.vertices)
    if (!c.graph().has_vertex(v))
      throw InvalidDataError("subcurve references unknown vertex " + std::to_string(v));
}

/// All 2^#V - 2 nonempty proper vertex subsets, in mask order over the
/// sorted vertex list (desk scale only).
inline std::vector<Subcurve> enumerate_subcurves(const CurveGraph& c) {
  const auto& vs = c.graph().vertices();
  const int n = static_cast<int>(vs.size());
  if (n > kMaxSubcurveVertices)
    throw ScaleLimitError("subcurve enumeration limited to " +
                          std::to_string(kMaxSubcurveVertices) + " vertices");
  std::vector<Subcurve> result;
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    Subcurve y;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1u) y.vertices.insert(vs[i]);
    result.push_back(std::move(y));
  }
  return result;
}

/// Combinatorial rank-1 torsion-free sheaf: per-component degree plus the
/// set of nodes where the sheaf fails to be locally free.
struct SheafDatum {
  std::map<int, std::int64_t> component_degree;
  std::set<int> nonfree;
};

inline void validate_sheaf(const CurveGraph& c, const SheafDatum& s) {
  for (const auto& [v, d] : s.component_degree)
    if (!c.graph().has_vertex(v))
      throw InvalidDataError("sheaf degree on unknown vertex " + std::to_string(v));
  for (int v : c.graph().vertices())
    if (!s.component_degree.count(v))
      throw InvalidDataError("sheaf degree missing for vertex " + std::to_string(v));
  for (int e : s.nonfree)
    if (!c.graph().has_edge(e))
      throw InvalidDataError("nonfree set references unknown edge " + std::to_string(e));
}

/// Total degree deg(I) = sum of component degrees + #nonfree.
inline std::int64_t total_degree(const CurveGraph& c, const SheafDatum& s) {
  validate_sheaf(c, s);
  std::int64_t d = static_cast<std::int64_t>(s.nonfree.size());
  for (const auto& [v, dv] : s.component_degree) d += dv;
  return d;
}

/// Ample polarization: strictly positive degree on every component.
struct Polarization {
  std::map<int, std::int64_t> component_degree;
};

inline void validate_polarization(const CurveGraph& c, const Polarization& l) {
  for (int v : c.graph().vertices()) {
    auto it = l.component_degree.find(v);
    if (it == l.component_degree.end())
      throw InvalidDataError("polarization missing vertex " + std::to_string(v));
    if (it->second <= 0)
      throw InvalidDataError("polarization must be strictly positive on vertex " +
                             std::to_string(v));
  }
  if (l.component_degree.size() != c.graph().vertices().size())
    throw InvalidDataError("polarization on an undeclared vertex");
}

inline std::int64_t total_degree(const Polarization& l) {
  std::int64_t d = 0;
  for (const auto& [v, dv] : l.component_degree) d += dv;
  return d;
}

/// Multidegree of a line bundle (no positivity constraint).
struct LineBundleDatum {
  std::map<int, std::int64_t> component_degree;
};

inline std::int64_t total_degree(const LineBundleDatum& m) {
  std::int64_t d = 0;
  for (const auto& [v, dv] : m.component_degree) d += dv;
  return d;
}

inline int arithmetic_genus(const CurveGraph& c) { return c.arithmetic_genus(); }

/// deg(omega_X|_Y) by the valence formula, loops counted twice. Without a
/// subcurve this is the whole-curve value 2g - 2.
inline int omega_degree(const CurveGraph& c) { return 2 * c.arithmetic_genus() - 2; }

inline int omega_degree(const CurveGraph& c, const Subcurve& y) {
  validate_subcurve(c, y);
  int total = 0;
  for (int v : y.vertices)
    total += 2 * c.genus_of(v) - 2 + c.graph().valence(v);
  return total;
}

/// deg(omega_X) restricted to a single component (works even when the
/// component is the whole curve, unlike the subcurve overload).
inline int omega_degree_vertex(const CurveGraph& c, int v) {
  return 2 * c.genus_of(v) - 2 + c.graph().valence(v);
}

/// Edges with exactly one endpoint in Y; loops and internal edges excluded.
inline std::set<int> cut_edges(const CurveGraph& c, const Subcurve& y) {
  validate_subcurve(c, y);
  std::set<int> cut;
  for (const Edge& e : c.graph().edges()) {
    const bool a = y.vertices.count(e.src) > 0;
    const bool b = y.vertices.count(e.dst) > 0;
    if (a != b) cut.insert(e.id);
  }
  return cut;
}

inline Subcurve complement(const CurveGraph& c, const Subcurve& y) {
  Subcurve yc;
  for (int v : c.graph().vertices())
    if (!y.vertices.count(v)) yc.vertices.insert(v);
  return yc;
}

/// deg(I_Y): component degrees over Y plus nonfree nodes internal to Y
/// (loops at Y-vertices included).
inline std::int64_t restricted_degree(const CurveGraph& c, const SheafDatum& s,
                                      const Subcurve& y) {
  validate_subcurve(c, y);
  validate_sheaf(c, s);
  std::int64_t d = 0;
  for (int v : y.vertices) d += s.component_degree.at(v);
  for (int e : s.nonfree) {
    const Edge& edge = c.graph().edge(e);
    if (y.vertices.count(edge.src) && y.vertices.count(edge.dst)) ++d;
  }
  return d;
}

/// deg(I_Y) + deg(I_{Y^c}) + #(nonfree cut edges) = deg(I).
inline bool degree_complement_identity_check(const CurveGraph& c, const SheafDatum& s,
                                             const Subcurve& y) {
  const Subcurve yc = complement(c, y);
  std::int64_t nonfree_cut = 0;
  for (int e : cut_edges(c, y))
    if (s.nonfree.count(e)) ++nonfree_cut;
  return restricted_degree(c, s, y) + restricted_degree(c, s, yc) + nonfree_cut ==
         total_degree(c, s);
}

/// Rank of the automorphism torus of the sheaf: number of connected
/// components of the dual graph with the nonfree edges removed.
inline int aut_torus_rank(const CurveGraph& c, const SheafDatum& s) {
  validate_sheaf(c, s);
  std::vector<Edge> kept;
  for (const Edge& e : c.graph().edges())
    if (!s.nonfree.count(e.id)) kept.push_back(e);
  MultiGraph without(c.graph().vertices(), kept);
  return without.component_count();
}

}  // namespace jacloc

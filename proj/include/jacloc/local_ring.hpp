#pragma once

// Assembles the combinatorial description of the completed local ring of a
// compactified Jacobian at the point of a (curve, sheaf) pair: explicit
// presentations with torus weights, the smoothness test, dimensions,
// multiplicity, and the local component count.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "jacloc/curve.hpp"
#include "jacloc/errors.hpp"
#include "jacloc/invariants.hpp"
#include "jacloc/multigraph.hpp"

namespace jacloc {

enum class ModuliMode { Jacobian, UniversalJacobian };

inline const char* to_string(ModuliMode m) {
  return m == ModuliMode::Jacobian ? "jacobian" : "universal";
}

enum class RingName { AHat, BHat, S1, S2, RI, RXI, InvariantRingRI, InvariantRingRXI };

inline const char* to_string(RingName n) {
  switch (n) {
    case RingName::AHat: return "A_hat";
    case RingName::BHat: return "B_hat";
    case RingName::S1: return "S1";
    case RingName::S2: return "S2";
    case RingName::RI: return "R_I";
    case RingName::RXI: return "R_XI";
    case RingName::InvariantRingRI: return "InvariantRing_R_I";
    case RingName::InvariantRingRXI: return "InvariantRing_R_XI";
  }
  return "?";
}

inline std::optional<RingName> ring_name_from_string(const std::string& s) {
  for (RingName n : {RingName::AHat, RingName::BHat, RingName::S1, RingName::S2,
                     RingName::RI, RingName::RXI, RingName::InvariantRingRI,
                     RingName::InvariantRingRXI})
    if (s == to_string(n)) return n;
  return std::nullopt;
}

enum class VarKind { X, Y, T, W, LocalU, LocalV, LocalT };

inline const char* to_string(VarKind k) {
  switch (k) {
    case VarKind::X: return "X_e";
    case VarKind::Y: return "Y_e";
    case VarKind::T: return "T_e";
    case VarKind::W: return "W_i";
    case VarKind::LocalU: return "u";
    case VarKind::LocalV: return "v";
    case VarKind::LocalT: return "t";
  }
  return "?";
}

struct RingVariable {
  std::string symbol;
  VarKind kind;
  int index;  // edge id for X/Y/T, running index for W, -1 for local u,v,t
  TorusWeight weight;
};

/// Monomial relation lhs = rhs with rhs either "0" or a variable.
struct RingRelation {
  std::string lhs;
  std::string rhs;
};

/// Generator of an invariant subring: either the monomial of a circulation
/// or a power-series variable adjoined with trivial weight.
struct InvariantGenerator {
  std::optional<Circulation> circulation;
  std::string symbol;
};

struct RingPresentation {
  RingName name;
  std::vector<RingVariable> variables;
  std::vector<RingRelation> relations;
  std::vector<InvariantGenerator> generators;  // invariant rings only
  std::optional<int> attached_edge;            // labeled local pieces
};

/// The dual graph of the curve obtained by smoothing every node outside the
/// nonfree set: contract every edge NOT in Sigma.
inline GraphContraction gamma_of(const CurveGraph& c, const SheafDatum& s) {
  validate_sheaf(c, s);
  return c.graph().contract_edges(s.nonfree);
}

namespace detail {

inline TorusWeight edge_weight(const Edge& e, bool inverted) {
  TorusWeight w;
  if (e.is_loop()) return w;
  w.weight[e.src] = inverted ? -1 : 1;
  w.weight[e.dst] = inverted ? 1 : -1;
  return w;
}

inline std::string circulation_symbol(const Circulation& c) {
  std::string s;
  for (const auto& [e, f] : c.entries()) {
    for (int k = 0; k < std::abs(f); ++k) {
      if (!s.empty()) s += "*";
      s += (f > 0 ? "X_" : "Y_") + std::to_string(e);
    }
  }
  return s.empty() ? "1" : s;
}

inline void append_edge_variables(RingPresentation& p, const MultiGraph& gamma,
                                  bool with_t) {
  for (const Edge& e : gamma.edges()) {
    p.variables.push_back({"X_" + std::to_string(e.id), VarKind::X, e.id,
                           edge_weight(e, false)});
    p.variables.push_back({"Y_" + std::to_string(e.id), VarKind::Y, e.id,
                           edge_weight(e, true)});
    if (with_t)
      p.variables.push_back({"T_" + std::to_string(e.id), VarKind::T, e.id, {}});
    const std::string xy = "X_" + std::to_string(e.id) + "*Y_" + std::to_string(e.id);
    p.relations.push_back({xy, with_t ? "T_" + std::to_string(e.id) : "0"});
  }
}

inline void append_w_variables(RingPresentation& p, int count) {
  for (int i = 1; i <= count; ++i)
    p.variables.push_back({"W_" + std::to_string(i), VarKind::W, i, {}});
}

}  // namespace detail

/// Number of adjoined power-series variables: g - b1(Gamma) for the
/// deformation ring of the sheaf, 4g - 3 - b1(Gamma) - #E(Gamma) for the
/// pair. The latter can be negative outside the stable range.
inline int w_variable_count(const CurveGraph& c, const MultiGraph& gamma,
                            RingName name) {
  const int g = c.arithmetic_genus();
  int count = 0;
  switch (name) {
    case RingName::RI:
    case RingName::InvariantRingRI:
      count = g - gamma.b1();
      break;
    case RingName::RXI:
    case RingName::InvariantRingRXI:
      count = 4 * g - 3 - gamma.b1() - gamma.num_edges();
      break;
    default:
      return 0;
  }
  if (count < 0)
    throw NegativeVariableCountError(
        std::string("the ") + to_string(name) + " presentation would need " +
        std::to_string(count) + " power-series variables; the input lies outside "
        "the regime of the structure theorem");
  return count;
}

inline RingPresentation presentation(const CurveGraph& c, const SheafDatum& s,
                                     RingName name) {
  RingPresentation p;
  p.name = name;
  switch (name) {
    case RingName::S1:
      p.variables = {{"u", VarKind::LocalU, -1, {}}, {"v", VarKind::LocalV, -1, {}}};
      p.relations = {{"u*v", "0"}};
      return p;
    case RingName::S2:
      p.variables = {{"u", VarKind::LocalU, -1, {}},
                     {"v", VarKind::LocalV, -1, {}},
                     {"t", VarKind::LocalT, -1, {}}};
      p.relations = {{"u*v", "t"}};
      return p;
    default:
      break;
  }
  const MultiGraph gamma = gamma_of(c, s).graph;
  switch (name) {
    case RingName::AHat:
      detail::append_edge_variables(p, gamma, false);
      break;
    case RingName::BHat:
      detail::append_edge_variables(p, gamma, true);
      break;
    case RingName::RI:
      detail::append_edge_variables(p, gamma, false);
      detail::append_w_variables(p, w_variable_count(c, gamma, name));
      break;
    case RingName::RXI:
      detail::append_edge_variables(p, gamma, true);
      detail::append_w_variables(p, w_variable_count(c, gamma, name));
      break;
    case RingName::InvariantRingRI: {
      const int w = w_variable_count(c, gamma, name);
      for (const Circulation& circ : circuit_generators(gamma))
        p.generators.push_back({circ, detail::circulation_symbol(circ)});
      for (int i = 1; i <= w; ++i)
        p.generators.push_back({std::nullopt, "W_" + std::to_string(i)});
      break;
    }
    case RingName::InvariantRingRXI: {
      const int w = w_variable_count(c, gamma, name);
      for (const Circulation& circ : circuit_generators(gamma))
        p.generators.push_back({circ, detail::circulation_symbol(circ)});
      for (const Edge& e : gamma.edges())
        p.generators.push_back({std::nullopt, "T_" + std::to_string(e.id)});
      for (int i = 1; i <= w; ++i)
        p.generators.push_back({std::nullopt, "W_" + std::to_string(i)});
      break;
    }
    default:
      break;  // handled above
  }
  return p;
}

/// One local deformation piece per nonfree node: k[[U_l, U_r]]/(U_l U_r) for
/// a fixed curve, with the extra smoothing direction T_e in universal mode.
inline std::vector<RingPresentation> deformation_ring_local_pieces(
    const SheafDatum& s, ModuliMode mode = ModuliMode::Jacobian) {
  std::vector<RingPresentation> pieces;
  for (int e : s.nonfree) {
    RingPresentation p;
    p.name = mode == ModuliMode::Jacobian ? RingName::S1 : RingName::S2;
    p.attached_edge = e;
    const std::string l = "U_" + std::to_string(e) + "_l";
    const std::string r = "U_" + std::to_string(e) + "_r";
    p.variables = {{l, VarKind::LocalU, e, {}}, {r, VarKind::LocalV, e, {}}};
    if (mode == ModuliMode::Jacobian) {
      p.relations = {{l + "*" + r, "0"}};
    } else {
      const std::string t = "T_" + std::to_string(e);
      p.variables.push_back({t, VarKind::LocalT, e, {}});
      p.relations = {{l + "*" + r, t}};
    }
    pieces.push_back(std::move(p));
  }
  return pieces;
}

/// Combinatorial invariants of the completed local ring. The three asserted
/// properties (Gorenstein, slc, seminormal) are quoted from the structure
/// theory for the fixed-curve moduli space, never computed.
struct LocalReport {
  ModuliMode mode;
  bool smooth;
  int local_dimension;
  int embedding_dimension;
  long long multiplicity;
  long long component_count;
  int invariant_ring_dimension;
  int g_sigma;
  int aut_torus_rank;
  std::vector<std::string> asserted_properties;
  std::vector<std::string> warnings;
};

namespace detail {

inline bool curve_is_stable(const CurveGraph& c) {
  for (int v : c.graph().vertices())
    if (2 * c.genus_of(v) - 2 + c.graph().valence(v) <= 0) return false;
  return true;
}

inline std::vector<std::string> universal_mode_warnings(const CurveGraph& c) {
  std::vector<std::string> warnings;
  if (c.arithmetic_genus() < 2)
    warnings.push_back("universal mode assumes arithmetic genus at least 2");
  if (!detail::curve_is_stable(c))
    warnings.push_back("the curve is not stable; universal-mode formulas assume "
                       "a stable curve");
  if (c.arithmetic_genus() == 2)
    warnings.push_back("genus-2 curves always admit automorphisms; universal-mode "
                       "formulas assume an automorphism-free curve");
  for (int v : c.graph().vertices())
    if (c.genus_of(v) == 1 && c.graph().valence(v) == 1) {
      warnings.push_back("an elliptic tail forces a nontrivial automorphism; "
                         "universal-mode formulas assume an automorphism-free curve");
      break;
    }
  return warnings;
}

}  // namespace detail

inline LocalReport local_report(const CurveGraph& c, const SheafDatum& s,
                                ModuliMode mode = ModuliMode::Jacobian,
                                int t_max = 20) {
  validate_sheaf(c, s);
  const MultiGraph gamma = gamma_of(c, s).graph;
  const int g = c.arithmetic_genus();

  LocalReport r;
  r.mode = mode;
  r.g_sigma = g - gamma.b1();
  r.aut_torus_rank = aut_torus_rank(c, s);

  if (mode == ModuliMode::Jacobian) {
    const std::set<int> bridges = c.graph().separating_edges();
    r.smooth = std::all_of(s.nonfree.begin(), s.nonfree.end(),
                           [&](int e) { return bridges.count(e) > 0; });
    r.local_dimension = g;
    r.invariant_ring_dimension = gamma.b1();
    r.embedding_dimension =
        static_cast<int>(gamma.oriented_circuits().size()) + (g - gamma.b1());
    r.multiplicity = multiplicity(gamma, t_max);
    r.component_count = local_component_count(gamma);
    r.asserted_properties = {"Gorenstein", "semi-log-canonical", "seminormal"};
  } else {
    r.local_dimension = 4 * g - 3;
    r.invariant_ring_dimension = gamma.b1() + gamma.num_edges();
    const int w = w_variable_count(c, gamma, RingName::RXI);
    r.embedding_dimension =
        static_cast<int>(b_monoid_minimal_generators(gamma).size()) + w;
    r.multiplicity = multiplicity_universal(gamma, t_max);
    r.component_count = 1;  // invariant subring of a power series ring
    r.smooth = r.embedding_dimension == r.local_dimension;
    r.warnings = detail::universal_mode_warnings(c);
  }

  // cross-checks tying the smoothness criterion to the ring invariants
  const bool by_mult = r.multiplicity == 1;
  const bool by_edim = r.embedding_dimension == r.local_dimension;
  const bool by_components = r.component_count == 1 && r.multiplicity == 1;
  if (r.smooth != by_mult || r.smooth != by_edim || r.smooth != by_components)
    throw InvalidDataError("internal inconsistency between smoothness criteria");
  return r;
}

}  // namespace jacloc

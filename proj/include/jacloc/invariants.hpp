#pragma once

// Torus-invariant monomial combinatorics of the local rings attached to a
// dual graph: weights, brute-force invariant enumeration, the circulation
// monoid with its circuit generators, Hilbert-Samuel functions and
// multiplicities, and the local component count.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "jacloc/errors.hpp"
#include "jacloc/multigraph.hpp"

namespace jacloc {

enum class RingMode { A, B };

/// Monomial in the variables X_e, Y_e (and T_e in B mode), kept in normal
/// form: min(x_exp, y_exp) = 0 on every edge, X_e Y_e rewritten to T_e.
struct MonomialAB {
  std::map<int, int> x_exp;
  std::map<int, int> y_exp;
  std::optional<std::map<int, int>> t_exp;  // present only in B mode

  /// Total degree; T_e has degree 2, matching the rewriting X_e Y_e -> T_e.
  int degree() const {
    int d = 0;
    for (const auto& [e, k] : x_exp) d += k;
    for (const auto& [e, k] : y_exp) d += k;
    if (t_exp)
      for (const auto& [e, k] : *t_exp) d += 2 * k;
    return d;
  }

  friend bool operator==(const MonomialAB&, const MonomialAB&) = default;
  friend auto operator<=>(const MonomialAB&, const MonomialAB&) = default;
};

/// Character of the vertex torus: the exponent of lambda_v per vertex.
struct TorusWeight {
  std::map<int, int> weight;  // zero entries omitted

  bool is_zero() const { return weight.empty(); }
  friend bool operator==(const TorusWeight&, const TorusWeight&) = default;
};

/// lambda acts on X_e by lambda_{s(e)} / lambda_{t(e)}, on Y_e by the
/// inverse, and trivially on T_e.
inline TorusWeight weight_of(const MonomialAB& m, const MultiGraph& g) {
  std::map<int, int> w;
  auto add = [&w](int v, int k) {
    w[v] += k;
    if (w[v] == 0) w.erase(v);
  };
  for (const auto& [e, k] : m.x_exp) {
    const Edge& edge = g.edge(e);
    add(edge.src, k);
    add(edge.dst, -k);
  }
  for (const auto& [e, k] : m.y_exp) {
    const Edge& edge = g.edge(e);
    add(edge.dst, k);
    add(edge.src, -k);
  }
  if (m.t_exp)
    for (const auto& entry : *m.t_exp) g.edge(entry.first);  // T_e acts trivially
  return TorusWeight{std::move(w)};
}

/// The invariant monomial attached to a circulation:
/// x = positive part, y = negative part.
inline MonomialAB monomial_of(const Circulation& c, RingMode mode = RingMode::A) {
  MonomialAB m;
  for (const auto& [e, f] : c.entries()) {
    if (f > 0) m.x_exp[e] = f;
    if (f < 0) m.y_exp[e] = -f;
  }
  if (mode == RingMode::B) m.t_exp.emplace();
  return m;
}

/// Brute-force enumeration of all nonzero normal-form monomials of total
/// degree <= bound with trivial torus weight. This is the reference route:
/// it walks exponent vectors directly and filters by weight_of.
inline std::vector<MonomialAB> invariant_monomials_upto(const MultiGraph& g, int bound,
                                                        RingMode mode) {
  if (bound < 0) throw InvalidDataError("degree bound must be nonnegative");
  if (g.num_edges() > kMaxEnumerationEdges)
    throw ScaleLimitError("monomial enumeration limited to " +
                          std::to_string(kMaxEnumerationEdges) + " edges");
  const auto& edges = g.edges();
  std::vector<MonomialAB> out;
  // signed exponent per edge (x minus y), plus a T exponent in B mode
  std::map<int, int> signed_exp;
  std::map<int, int> t_exp;
  auto emit = [&] {
    MonomialAB m;
    for (const auto& [e, c] : signed_exp) {
      if (c > 0) m.x_exp[e] = c;
      if (c < 0) m.y_exp[e] = -c;
    }
    if (mode == RingMode::B) m.t_exp = t_exp;
    if (weight_of(m, g).is_zero()) out.push_back(std::move(m));
  };
  auto rec = [&](auto&& self, std::size_t i, int remaining) -> void {
    if (i == edges.size()) {
      emit();
      return;
    }
    const int e = edges[i].id;
    const int t_cap = mode == RingMode::B ? remaining / 2 : 0;
    for (int t = 0; t <= t_cap; ++t) {
      if (t > 0) t_exp[e] = t;
      const int left = remaining - 2 * t;
      for (int c = -left; c <= left; ++c) {
        if (c != 0) signed_exp[e] = c;
        self(self, i + 1, left - std::abs(c));
        signed_exp.erase(e);
      }
      t_exp.erase(e);
    }
  };
  rec(rec, 0, bound);
  std::sort(out.begin(), out.end());
  return out;
}

/// Minimal generators of the circulation monoid: the indicator flows of all
/// oriented circuits.
inline std::vector<Circulation> circuit_generators(const MultiGraph& g) {
  std::vector<Circulation> gens;
  for (const OrientedCircuit& c : g.oriented_circuits())
    gens.push_back(circuit_to_circulation(c, g));
  return gens;
}

/// Product in the monoid-with-zero: vanishes when the factors carry strictly
/// opposite signs on a shared edge (X_e Y_e = 0), otherwise adds flows.
inline std::optional<Circulation> monoid_product(const Circulation& a,
                                                 const Circulation& b,
                                                 const MultiGraph& g) {
  std::map<int, int> sum;
  for (const auto& [e, f] : a.entries()) sum[e] += f;
  for (const auto& [e, f] : b.entries()) {
    if (auto it = a.entries().find(e);
        it != a.entries().end() && (it->second > 0) != (f > 0))
      return std::nullopt;
    sum[e] += f;
  }
  return Circulation(g, sum);
}

namespace detail {

/// Breadth-first closure of the circulation monoid under its circuit
/// generators, on dense edge-indexed flow vectors. `advance` grows the
/// closure by one generator level; `count` is HS(t) after t levels.
class CirculationClosure {
 public:
  explicit CirculationClosure(const MultiGraph& g) {
    const int m = g.num_edges();
    std::map<int, int> index;
    int i = 0;
    for (const Edge& e : g.edges()) index[e.id] = i++;
    for (const Circulation& c : circuit_generators(g)) {
      std::vector<int> dense(m, 0);
      for (const auto& [e, f] : c.entries()) dense[index.at(e)] = f;
      gens_.push_back(std::move(dense));
    }
    const std::vector<int> identity(m, 0);
    seen_.insert(identity);
    frontier_.push_back(identity);
  }

  void advance() {
    std::vector<std::vector<int>> next;
    std::vector<int> prod;
    for (const std::vector<int>& base : frontier_)
      for (const std::vector<int>& gen : gens_) {
        bool compatible = true;
        prod = base;
        for (std::size_t k = 0; k < gen.size(); ++k) {
          if (gen[k] == 0) continue;
          if (base[k] != 0 && (base[k] > 0) != (gen[k] > 0)) {
            compatible = false;  // X_e Y_e = 0
            break;
          }
          prod[k] += gen[k];
        }
        if (compatible && seen_.insert(prod).second) next.push_back(prod);
      }
    frontier_ = std::move(next);
  }

  long long count() const { return static_cast<long long>(seen_.size()); }

 private:
  std::vector<std::vector<int>> gens_;
  std::set<std::vector<int>> seen_;
  std::vector<std::vector<int>> frontier_;
};

}  // namespace detail

/// Hilbert-Samuel function of the circulation monoid ring: HS(t) counts the
/// distinct monoid elements (identity included) expressible as a
/// sign-compatible product of at most t circuit generators.
inline std::vector<long long> hilbert_samuel(const MultiGraph& g, int t_max) {
  if (t_max < 0) throw InvalidDataError("t_max must be nonnegative");
  detail::CirculationClosure closure(g);
  std::vector<long long> hs{1};
  for (int t = 1; t <= t_max; ++t) {
    closure.advance();
    hs.push_back(closure.count());
  }
  return hs;
}

namespace detail {

/// d-th finite difference sequence.
inline std::vector<long long> finite_difference(std::vector<long long> values, int d) {
  for (int k = 0; k < d; ++k) {
    std::vector<long long> next;
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
      next.push_back(values[i + 1] - values[i]);
    values = std::move(next);
  }
  return values;
}

/// Stabilized value of a finite-difference tail: constant over a window of
/// `window` trailing entries. Falls back to averaging over a short detected
/// period (quasi-polynomial tails); returns nullopt when neither applies.
inline std::optional<long long> stabilized_tail(const std::vector<long long>& diffs,
                                                int window) {
  if (static_cast<int>(diffs.size()) < window) return std::nullopt;
  const auto tail_begin = diffs.end() - window;
  if (std::all_of(tail_begin, diffs.end(),
                  [&](long long v) { return v == *tail_begin; }))
    return *tail_begin;
  for (int period = 2; period <= 6; ++period) {
    if (static_cast<int>(diffs.size()) < 2 * period + window) continue;
    bool periodic = true;
    for (int i = 0; i < period + window && periodic; ++i) {
      const std::size_t k = diffs.size() - 1 - i;
      if (diffs[k] != diffs[k - period]) periodic = false;
    }
    if (!periodic) continue;
    long long sum = 0;
    for (int i = 0; i < period; ++i) sum += diffs[diffs.size() - 1 - i];
    if (sum % period == 0) return sum / period;
  }
  return std::nullopt;
}

}  // namespace detail

namespace detail {

/// Extends a Hilbert-Samuel sequence level by level until its d-th finite
/// differences are constant over a window of d + 2 entries, then returns the
/// constant. `advance` appends one level to the sequence.
template <typename AdvanceFn>
std::optional<long long> scan_until_stable(std::vector<long long>& hs, int d,
                                           int t_max, AdvanceFn&& advance) {
  const int window = d + 2;
  for (int t = 1; t <= t_max; ++t) {
    advance();
    const std::vector<long long> diffs = finite_difference(hs, d);
    if (auto value = stabilized_tail(diffs, window)) return value;
  }
  return std::nullopt;
}

}  // namespace detail

/// Hilbert-Samuel multiplicity of the circulation monoid ring: the
/// stabilized b1-th finite difference of HS, computed incrementally so the
/// closure stops as soon as the difference window settles. A graph whose HS
/// never settles by t_max raises NonStabilized.
inline long long multiplicity(const MultiGraph& g, int t_max = 20) {
  const int d = g.b1();
  if (d == 0) return 1;
  detail::CirculationClosure closure(g);
  std::vector<long long> hs{1};
  auto advance = [&] {
    closure.advance();
    hs.push_back(closure.count());
  };
  if (auto value = detail::scan_until_stable(hs, d, t_max, advance)) return *value;
  throw NonStabilizedError(
      "Hilbert-Samuel differences did not stabilize by t_max = " +
      std::to_string(t_max) + "; raise t_max");
}

/// Number of local irreducible components: totally cyclic orientations of
/// the graph with its bridges deleted (edgeless remainder gives 1).
inline long long local_component_count(const MultiGraph& g) {
  const std::set<int> bridges = g.separating_edges();
  std::vector<Edge> kept;
  for (const Edge& e : g.edges())
    if (!bridges.count(e.id)) kept.push_back(e);
  MultiGraph bridgeless(g.vertices(), kept);
  return static_cast<long long>(bridgeless.totally_cyclic_orientations().size());
}

// --- universal-mode monoid -------------------------------------------------
//
// In B mode the invariant monomials form the free product of the circulation
// lattice with N^E: an element is a circulation plus a T-exponent vector.
// Multiplication never vanishes; opposite signs on an edge cancel into T_e.

struct BMonoidElement {
  Circulation flow;
  std::map<int, int> t_exp;  // zero entries omitted

  bool is_identity() const { return flow.is_zero() && t_exp.empty(); }
  int degree() const {
    int d = flow.l1_norm();
    for (const auto& [e, k] : t_exp) d += 2 * k;
    return d;
  }
  friend bool operator==(const BMonoidElement&, const BMonoidElement&) = default;
  friend auto operator<=>(const BMonoidElement&, const BMonoidElement&) = default;
};

inline BMonoidElement b_monoid_product(const BMonoidElement& a, const BMonoidElement& b,
                                       const MultiGraph& g) {
  std::map<int, int> sum;
  for (const auto& [e, f] : a.flow.entries()) sum[e] += f;
  for (const auto& [e, f] : b.flow.entries()) sum[e] += f;
  std::map<int, int> t;
  for (const auto& [e, k] : a.t_exp) t[e] += k;
  for (const auto& [e, k] : b.t_exp) t[e] += k;
  for (const auto& [e, f] : a.flow.entries()) {
    const int other = b.flow.flow(e);
    const int cancel = (std::abs(f) + std::abs(other) - std::abs(f + other)) / 2;
    if (cancel > 0) t[e] += cancel;
  }
  for (auto it = t.begin(); it != t.end();)
    it = it->second == 0 ? t.erase(it) : std::next(it);
  return {Circulation(g, sum), std::move(t)};
}

/// Generators of the B-mode invariant monoid: circuit flows plus one T_e per
/// edge. Not all of these are irreducible (T of a loop is X Y).
inline std::vector<BMonoidElement> b_monoid_generators(const MultiGraph& g) {
  std::vector<BMonoidElement> gens;
  for (const Circulation& c : circuit_generators(g)) gens.push_back({c, {}});
  for (const Edge& e : g.edges()) gens.push_back({Circulation{}, {{e.id, 1}}});
  return gens;
}

inline std::vector<BMonoidElement> b_monoid_minimal_generators(const MultiGraph& g);

/// Filtration by the maximal ideal, so products count minimal generators
/// only (T_e of a loop is the product X_e Y_e, not a generator).
inline std::vector<long long> hilbert_samuel_universal(const MultiGraph& g, int t_max) {
  if (t_max < 0) throw InvalidDataError("t_max must be nonnegative");
  const auto gens = b_monoid_minimal_generators(g);
  std::set<BMonoidElement> seen{BMonoidElement{}};
  std::vector<BMonoidElement> frontier{BMonoidElement{}};
  std::vector<long long> hs{1};
  for (int t = 1; t <= t_max; ++t) {
    std::vector<BMonoidElement> next;
    for (const BMonoidElement& base : frontier)
      for (const BMonoidElement& gen : gens) {
        BMonoidElement prod = b_monoid_product(base, gen, g);
        if (seen.insert(prod).second) next.push_back(std::move(prod));
      }
    hs.push_back(static_cast<long long>(seen.size()));
    frontier = std::move(next);
  }
  return hs;
}

/// Multiplicity of the B-mode invariant ring; the relevant dimension is
/// b1 + #E.
inline long long multiplicity_universal(const MultiGraph& g, int t_max = 20) {
  const int d = g.b1() + g.num_edges();
  if (d == 0) return 1;
  const auto gens = b_monoid_minimal_generators(g);
  std::set<BMonoidElement> seen{BMonoidElement{}};
  std::vector<BMonoidElement> frontier{BMonoidElement{}};
  std::vector<long long> hs{1};
  auto advance = [&] {
    std::vector<BMonoidElement> next;
    for (const BMonoidElement& base : frontier)
      for (const BMonoidElement& gen : gens) {
        BMonoidElement prod = b_monoid_product(base, gen, g);
        if (seen.insert(prod).second) next.push_back(std::move(prod));
      }
    hs.push_back(static_cast<long long>(seen.size()));
    frontier = std::move(next);
  };
  if (auto value = detail::scan_until_stable(hs, d, t_max, advance)) return *value;
  throw NonStabilizedError(
      "universal Hilbert-Samuel differences did not stabilize by t_max = " +
      std::to_string(t_max) + "; raise t_max");
}

/// Irreducible elements among the B-monoid generators, i.e. the minimal
/// generators of the maximal ideal. Circuit flows never split (a proper
/// subset of a simple cycle contains no cycle, so no nonzero circulation
/// lives on it), and T_e decomposes exactly when e is a loop, where
/// T_e = X_e Y_e; any other factorization of T_e would need a circulation
/// supported on {e} alone. The brute-force decomposability search lives in
/// the tests and confirms this description at small scale.
inline std::vector<BMonoidElement> b_monoid_minimal_generators(const MultiGraph& g) {
  std::vector<BMonoidElement> minimal;
  for (const Circulation& c : circuit_generators(g)) minimal.push_back({c, {}});
  for (const Edge& e : g.edges())
    if (!e.is_loop()) minimal.push_back({Circulation{}, {{e.id, 1}}});
  return minimal;
}

}  // namespace jacloc

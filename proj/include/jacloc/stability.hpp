#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "jacloc/curve.hpp"
#include "jacloc/errors.hpp"
#include "jacloc/multigraph.hpp"
#include "jacloc/rational.hpp"

namespace jacloc {

// Partition enumeration is Bell-number scale.
inline constexpr int kMaxPartitionVertices = 8;
// Cap on the multidegree bounding box walked by chamber enumeration.
inline constexpr long long kMaxChamberBoxVolume = 200000;

/// Stability parameter: one exact rational per component, summing to the
/// integer target degree.
class PhiParameter {
 public:
  PhiParameter(std::map<int, Rational> value, std::int64_t target_sum)
      : value_(std::move(value)), target_sum_(target_sum) {
    Rational sum = 0;
    for (const auto& [v, phi] : value_) sum += phi;
    if (!(sum == Rational(target_sum_)))
      throw InvalidDataError("phi entries sum to " + sum.str() + ", expected " +
                             std::to_string(target_sum_));
  }

  const std::map<int, Rational>& value() const { return value_; }
  const Rational& at(int v) const { return value_.at(v); }
  std::int64_t target_sum() const { return target_sum_; }

  Rational sum_over(const std::set<int>& vertices) const {
    Rational s = 0;
    for (int v : vertices) s += value_.at(v);
    return s;
  }

 private:
  std::map<int, Rational> value_;
  std::int64_t target_sum_;
};

inline void validate_phi(const CurveGraph& c, const PhiParameter& phi) {
  for (int v : c.graph().vertices())
    if (!phi.value().count(v))
      throw InvalidDataError("phi missing vertex " + std::to_string(v));
  if (phi.value().size() != c.graph().vertices().size())
    throw InvalidDataError("phi entry on an undeclared vertex");
}

/// Hilbert polynomial r*t + a of a sheaf with respect to a polarization.
struct HilbertPolynomial {
  std::int64_t leading;
  Rational constant;

  Rational slope() const { return constant / Rational(leading); }
  friend bool operator==(const HilbertPolynomial&, const HilbertPolynomial&) = default;
};

enum class Status { Stable, StrictlySemistable, Unstable };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Stable: return "stable";
    case Status::StrictlySemistable: return "strictly_semistable";
    case Status::Unstable: return "unstable";
  }
  return "?";
}

/// Outcome of a semistability scan. Unstable verdicts carry the violating
/// subcurves; strictly semistable verdicts carry the equality subcurves.
struct StabilityVerdict {
  Status status;
  std::vector<Subcurve> witnesses;
};

inline HilbertPolynomial hilbert_polynomial(const CurveGraph& c, const SheafDatum& s,
                                            const Polarization& l,
                                            const std::optional<Subcurve>& y = {}) {
  validate_sheaf(c, s);
  validate_polarization(c, l);
  if (!y) {
    // P(t) = deg(L) t + deg(I) + 1 - g
    return {total_degree(l), Rational(total_degree(c, s) + 1 - c.arithmetic_genus())};
  }
  validate_subcurve(c, *y);
  std::int64_t leading = 0;
  for (int v : y->vertices) leading += l.component_degree.at(v);
  const Rational constant = Rational(restricted_degree(c, s, *y)) -
                            Rational(omega_degree(c, *y), 2) +
                            Rational(static_cast<long long>(cut_edges(c, *y).size()), 2);
  return {leading, constant};
}

namespace detail {

/// Classifies a family of exact inequalities lhs(Y) >= rhs(Y): stable when
/// all strict, strictly semistable when all hold with at least one equality.
class VerdictBuilder {
 public:
  void observe(const Subcurve& y, const Rational& lhs, const Rational& rhs) {
    if (lhs < rhs) {
      if (status_ != Status::Unstable) witnesses_.clear();
      status_ = Status::Unstable;
      witnesses_.push_back(y);
    } else if (lhs == rhs && status_ != Status::Unstable) {
      status_ = Status::StrictlySemistable;
      witnesses_.push_back(y);
    }
  }

  StabilityVerdict finish() && { return {status_, std::move(witnesses_)}; }

 private:
  Status status_ = Status::Stable;
  std::vector<Subcurve> witnesses_;
};

}  // namespace detail

/// Slope semistability with respect to an ample polarization, decided by the
/// subcurve bound
///   deg(I_Y) >= (deg L|_Y / deg L)(deg I - deg(omega)/2)
///               + deg(omega|_Y)/2 - #(Y cap Y^c)/2.
inline StabilityVerdict slope_semistable(const CurveGraph& c, const SheafDatum& s,
                                         const Polarization& l) {
  validate_sheaf(c, s);
  validate_polarization(c, l);
  detail::VerdictBuilder builder;
  const Rational deg_l = Rational(total_degree(l));
  const Rational global =
      Rational(total_degree(c, s)) - Rational(omega_degree(c), 2);
  for (const Subcurve& y : enumerate_subcurves(c)) {
    Rational l_y = 0;
    for (int v : y.vertices) l_y += Rational(l.component_degree.at(v));
    const Rational rhs = l_y / deg_l * global + Rational(omega_degree(c, y), 2) -
                         Rational(static_cast<long long>(cut_edges(c, y).size()), 2);
    builder.observe(y, Rational(restricted_degree(c, s, y)), rhs);
  }
  return std::move(builder).finish();
}

/// phi-semistability: deg(I_Y) >= phi_Y - #(Y cap Y^c)/2 for every subcurve.
/// The equivalent upper-bound form is evaluated on every call as a
/// consistency check against the complement identity.
inline StabilityVerdict phi_semistable(const CurveGraph& c, const SheafDatum& s,
                                       const PhiParameter& phi) {
  validate_sheaf(c, s);
  validate_phi(c, phi);
  if (total_degree(c, s) != phi.target_sum())
    throw DegreeMismatchError("sheaf degree " + std::to_string(total_degree(c, s)) +
                              " does not match phi target sum " +
                              std::to_string(phi.target_sum()));
  detail::VerdictBuilder lower_builder;
  detail::VerdictBuilder upper_builder;
  for (const Subcurve& y : enumerate_subcurves(c)) {
    const auto cut = cut_edges(c, y);
    const Rational half_cut(static_cast<long long>(cut.size()), 2);
    const Rational deg_y(restricted_degree(c, s, y));
    const Rational phi_y = phi.sum_over(y.vertices);
    lower_builder.observe(y, deg_y, phi_y - half_cut);
    std::int64_t nonfree_cut = 0;
    for (int e : cut)
      if (s.nonfree.count(e)) ++nonfree_cut;
    // upper bound negated so that it reads lhs >= rhs
    upper_builder.observe(y, phi_y + half_cut - Rational(nonfree_cut), deg_y);
  }
  StabilityVerdict lower = std::move(lower_builder).finish();
  StabilityVerdict upper = std::move(upper_builder).finish();
  if (lower.status != upper.status)
    throw InvalidDataError(
        "internal inconsistency: the lower- and upper-bound stability scans disagree");
  return lower;
}

/// A poly-stability certificate: the partition of the components into the
/// supports of the stable direct summands.
struct PolyStabilityResult {
  bool polystable;
  std::vector<std::set<int>> partition;  // empty when not poly-stable
};

namespace detail {

inline bool piece_is_stable(const CurveGraph& c, const SheafDatum& s,
                            const PhiParameter& phi, const std::set<int>& part) {
  if (part.size() <= 1) return true;  // no proper subcurve of the support
  std::vector<int> members(part.begin(), part.end());
  const int n = static_cast<int>(members.size());
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    std::set<int> z;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1u) z.insert(members[i]);
    // degree of the piece restricted to z: component degrees plus internal
    // nonfree edges (all internal edges of z are internal to the part)
    std::int64_t deg_z = 0;
    for (int v : z) deg_z += s.component_degree.at(v);
    for (int e : s.nonfree) {
      const Edge& edge = c.graph().edge(e);
      if (z.count(edge.src) && z.count(edge.dst)) ++deg_z;
    }
    // cut within the support
    std::int64_t cut = 0;
    for (const Edge& e : c.graph().edges()) {
      const bool a = z.count(e.src) > 0;
      const bool b = z.count(e.dst) > 0;
      const bool a_part = part.count(e.src) > 0;
      const bool b_part = part.count(e.dst) > 0;
      if (a_part && b_part && a != b) ++cut;
    }
    const Rational rhs = phi.sum_over(z) - Rational(cut, 2);
    if (!(Rational(deg_z) > rhs)) return false;
  }
  return true;
}

/// Set partitions of `items` in restricted-growth order; the one-block
/// partition comes first.
inline std::vector<std::vector<std::set<int>>> set_partitions(
    const std::vector<int>& items) {
  std::vector<std::vector<std::set<int>>> result;
  const int n = static_cast<int>(items.size());
  std::vector<int> block(n, 0);
  auto rec = [&](auto&& self, int i, int max_used) -> void {
    if (i == n) {
      std::vector<std::set<int>> parts(max_used + 1);
      for (int j = 0; j < n; ++j) parts[block[j]].insert(items[j]);
      result.push_back(std::move(parts));
      return;
    }
    for (int b = 0; b <= max_used + 1; ++b) {
      block[i] = b;
      self(self, i + 1, std::max(max_used, b));
    }
  };
  if (n > 0) rec(rec, 1, 0);  // item 0 is always in block 0
  return result;
}

}  // namespace detail

/// Poly-stability: semistable and decomposable into phi-stable pieces. The
/// certificate partition groups components into the supports of the pieces;
/// every edge joining distinct parts must be a nonfree node.
inline PolyStabilityResult phi_polystable(const CurveGraph& c, const SheafDatum& s,
                                          const PhiParameter& phi) {
  validate_sheaf(c, s);
  validate_phi(c, phi);
  if (total_degree(c, s) != phi.target_sum())
    throw DegreeMismatchError("sheaf degree does not match phi target sum");
  if (c.graph().num_vertices() > kMaxPartitionVertices)
    throw ScaleLimitError("partition enumeration limited to " +
                          std::to_string(kMaxPartitionVertices) + " vertices");
  if (phi_semistable(c, s, phi).status == Status::Unstable) return {false, {}};
  for (const auto& parts : detail::set_partitions(c.graph().vertices())) {
    bool admissible = true;
    for (const Edge& e : c.graph().edges()) {
      if (s.nonfree.count(e.id)) continue;
      for (const auto& part : parts) {
        const bool a = part.count(e.src) > 0;
        const bool b = part.count(e.dst) > 0;
        if (a != b) {
          admissible = false;  // a locally-free node joins distinct parts
          break;
        }
      }
      if (!admissible) break;
    }
    if (!admissible) continue;
    for (const auto& part : parts)
      if (!detail::piece_is_stable(c, s, phi, part)) {
        admissible = false;
        break;
      }
    if (admissible) return {true, parts};
  }
  return {false, {}};
}

/// The phi-parameter matching slope stability for the polarization L, the
/// twisting bundle M, and total degree d:
///   phi_i = deg(M|_i) + deg(omega|_i)/2 + (d - deg(omega)/2) deg(L|_i)/deg(L).
/// With M given, deg(M) must equal -d and the result sums to 0 (the twisted
/// sheaf has degree 0). With M omitted it is taken to be trivial and the
/// result sums to d.
inline PhiParameter slope_to_phi(const CurveGraph& c, const Polarization& l,
                                 const std::optional<LineBundleDatum>& m,
                                 std::int64_t d) {
  validate_polarization(c, l);
  std::int64_t m_total = 0;
  if (m) {
    for (int v : c.graph().vertices())
      if (!m->component_degree.count(v))
        throw InvalidDataError("twisting bundle missing vertex " + std::to_string(v));
    m_total = total_degree(*m);
    if (m_total != -d)
      throw MDegreeMismatchError("twisting bundle has degree " +
                                 std::to_string(m_total) + ", expected " +
                                 std::to_string(-d));
  }
  const Rational deg_l(total_degree(l));
  const Rational scale = Rational(d) - Rational(omega_degree(c), 2);
  std::map<int, Rational> value;
  for (int v : c.graph().vertices()) {
    const Rational m_v = m ? Rational(m->component_degree.at(v)) : Rational(0);
    value[v] = m_v + Rational(omega_degree_vertex(c, v), 2) +
               scale * Rational(l.component_degree.at(v)) / deg_l;
  }
  return PhiParameter(std::move(value), d + m_total);
}

/// Inverse construction: a polarization, twisting bundle, and degree whose
/// slope_to_phi equals the given degree-0 phi exactly. Sets
///   m_v = floor(phi_v - deg(omega|_v)/2) - 1,   a_v = the fractional excess,
/// so every a_v lies in [1, 2), then clears denominators with the smallest e
/// making every deg(L|_v) = e a_v / (d - g + 1) a positive integer.
struct PolarizationForPhi {
  Polarization l;
  LineBundleDatum m;
  std::int64_t d;
};

inline PolarizationForPhi phi_to_polarization(const CurveGraph& c,
                                              const PhiParameter& phi) {
  validate_phi(c, phi);
  if (phi.target_sum() != 0)
    throw DegreeMismatchError("phi_to_polarization expects target sum 0, got " +
                              std::to_string(phi.target_sum()));
  const int g = c.arithmetic_genus();
  LineBundleDatum m;
  std::map<int, Rational> a;
  for (int v : c.graph().vertices()) {
    const Rational h = phi.at(v) - Rational(omega_degree_vertex(c, v), 2);
    const BigInt m_v = h.floor() - 1;
    m.component_degree[v] = checked_int64(m_v, "twisting degree");
    a[v] = h - Rational(m_v);
  }
  const std::int64_t d = -total_degree(m);
  // sum of the a_v is d - g + 1 >= #V, so d > g - 1 automatically
  const Rational denom(d - g + 1);
  BigInt e = 1;
  for (const auto& [v, a_v] : a) e = lcm(e, (a_v / denom).den());
  Polarization l;
  for (const auto& [v, a_v] : a) {
    const Rational b_v = Rational(e) * a_v / denom;
    l.component_degree[v] = checked_int64(b_v.num(), "polarization degree");
  }
  validate_polarization(c, l);
  return {std::move(l), std::move(m), d};
}

/// I -> I (x) M: shifts component degrees, keeps the nonfree set.
inline SheafDatum twist(const SheafDatum& s, const LineBundleDatum& m) {
  SheafDatum out = s;
  for (const auto& [v, dv] : m.component_degree) out.component_degree.at(v) += dv;
  return out;
}

/// Line-bundle multidegrees (empty nonfree set) of total degree
/// phi.target_sum() inside the box forced by the single-component stability
/// bounds, classified by phi_semistable.
struct ChamberCount {
  std::vector<std::map<int, std::int64_t>> stable;
  std::vector<std::map<int, std::int64_t>> strictly_semistable;
};

inline ChamberCount count_stable_line_multidegrees(const CurveGraph& c,
                                                   const PhiParameter& phi) {
  validate_phi(c, phi);
  ChamberCount out;
  const auto& vs = c.graph().vertices();
  if (vs.size() == 1) {
    out.stable.push_back({{vs[0], phi.target_sum()}});
    return out;
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> box;
  long long volume = 1;
  for (int v : vs) {
    const Rational half_cut(
        static_cast<long long>(cut_edges(c, Subcurve{{v}}).size()), 2);
    const BigInt lo = (phi.at(v) - half_cut).ceil();
    const BigInt hi = (phi.at(v) + half_cut).floor();
    if (hi < lo) return out;
    box.push_back({checked_int64(lo, "multidegree bound"),
                   checked_int64(hi, "multidegree bound")});
    volume *= static_cast<long long>(hi - lo) + 1;
    if (volume > kMaxChamberBoxVolume)
      throw ScaleLimitError("multidegree bounding box too large to enumerate");
  }
  std::map<int, std::int64_t> degree;
  auto rec = [&](auto&& self, std::size_t i, std::int64_t sum) -> void {
    if (i == vs.size()) {
      if (sum != phi.target_sum()) return;
      SheafDatum s{degree, {}};
      const StabilityVerdict verdict = phi_semistable(c, s, phi);
      if (verdict.status == Status::Stable) out.stable.push_back(degree);
      if (verdict.status == Status::StrictlySemistable)
        out.strictly_semistable.push_back(degree);
      return;
    }
    for (std::int64_t dv = box[i].first; dv <= box[i].second; ++dv) {
      degree[vs[i]] = dv;
      self(self, i + 1, sum + dv);
    }
  };
  rec(rec, 0, 0);
  return out;
}

}  // namespace jacloc

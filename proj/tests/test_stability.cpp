#include "jacloc/stability.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <optional>

#include "support/builders.hpp"

using namespace jacloc;
using namespace testsupport;

namespace {

PhiParameter make_phi(const CurveGraph& c, std::vector<Rational> values) {
  std::map<int, Rational> m;
  Rational sum = 0;
  const auto& vs = c.graph().vertices();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    m[vs[i]] = values[i];
    sum += values[i];
  }
  if (!sum.is_integer()) throw std::logic_error("test phi must sum to an integer");
  return PhiParameter(std::move(m), static_cast<std::int64_t>(sum.num()));
}

SheafDatum line_bundle(const CurveGraph& c, std::vector<std::int64_t> degrees) {
  SheafDatum s;
  const auto& vs = c.graph().vertices();
  for (std::size_t i = 0; i < vs.size(); ++i) s.component_degree[vs[i]] = degrees[i];
  return s;
}

Polarization make_pol(const CurveGraph& c, std::vector<std::int64_t> degrees) {
  Polarization l;
  const auto& vs = c.graph().vertices();
  for (std::size_t i = 0; i < vs.size(); ++i) l.component_degree[vs[i]] = degrees[i];
  return l;
}

}  // namespace

TEST_CASE("hilbert polynomial") {
  CurveGraph dollar = dollar_sign();
  SECTION("whole curve: deg(L) t + deg(I) + 1 - g") {
    SheafDatum s = line_bundle(dollar, {0, 0});
    HilbertPolynomial p = hilbert_polynomial(dollar, s, make_pol(dollar, {1, 1}));
    CHECK(p.leading == 2);
    CHECK(p.constant == Rational(-1));
  }
  SECTION("restricted to one dollar-sign component") {
    SheafDatum s = line_bundle(dollar, {0, 0});
    HilbertPolynomial p =
        hilbert_polynomial(dollar, s, make_pol(dollar, {1, 1}), Subcurve{{0}});
    CHECK(p.leading == 1);
    CHECK(p.constant == Rational(1));  // 0 - 1/2 + 3/2
  }
}

TEST_CASE("slope semistability on the dollar sign") {
  CurveGraph dollar = dollar_sign();
  Polarization l = make_pol(dollar, {1, 1});
  SECTION("balanced line bundle is stable") {
    CHECK(slope_semistable(dollar, line_bundle(dollar, {0, 0}), l).status ==
          Status::Stable);
  }
  SECTION("unbalanced line bundle is unstable with a witness") {
    StabilityVerdict v = slope_semistable(dollar, line_bundle(dollar, {2, -2}), l);
    CHECK(v.status == Status::Unstable);
    REQUIRE(!v.witnesses.empty());
    CHECK(v.witnesses[0].vertices == std::set<int>{1});  // -2 < -3/2
  }
  SECTION("any sheaf on an irreducible curve is stable") {
    CurveGraph c = one_node_irreducible(2);
    SheafDatum s = line_bundle(c, {5});
    s.nonfree = {0};
    CHECK(slope_semistable(c, s, make_pol(c, {3})).status == Status::Stable);
  }
}

TEST_CASE("phi semistability on the dollar sign") {
  CurveGraph dollar = dollar_sign();
  SECTION("phi = (1/2, -1/2): interval [-1, 2]") {
    PhiParameter phi = make_phi(dollar, {Rational(1, 2), Rational(-1, 2)});
    for (std::int64_t d1 : {0LL, 1LL})
      CHECK(phi_semistable(dollar, line_bundle(dollar, {d1, -d1}), phi).status ==
            Status::Stable);
    for (std::int64_t d1 : {-1LL, 2LL})
      CHECK(phi_semistable(dollar, line_bundle(dollar, {d1, -d1}), phi).status ==
            Status::StrictlySemistable);
    CHECK(phi_semistable(dollar, line_bundle(dollar, {3, -3}), phi).status ==
          Status::Unstable);
  }
  SECTION("phi = (0, 0): interval [-3/2, 3/2]") {
    PhiParameter phi = make_phi(dollar, {Rational(0), Rational(0)});
    for (std::int64_t d1 : {-1LL, 0LL, 1LL})
      CHECK(phi_semistable(dollar, line_bundle(dollar, {d1, -d1}), phi).status ==
            Status::Stable);
    for (std::int64_t d1 : {-2LL, 2LL, 5LL})
      CHECK(phi_semistable(dollar, line_bundle(dollar, {d1, -d1}), phi).status ==
            Status::Unstable);
  }
  SECTION("one-vertex curves are vacuously stable") {
    CurveGraph c = one_node_irreducible(3);
    PhiParameter phi = make_phi(c, {Rational(4)});
    CHECK(phi_semistable(c, line_bundle(c, {4}), phi).status == Status::Stable);
  }
  SECTION("degree mismatch is rejected") {
    PhiParameter phi = make_phi(dollar, {Rational(1, 2), Rational(1, 2)});
    CHECK_THROWS_AS(phi_semistable(dollar, line_bundle(dollar, {0, 0}), phi),
                    DegreeMismatchError);
  }
}

TEST_CASE("phi polystability") {
  CurveGraph dollar = dollar_sign();
  SECTION("stable sheaves use the trivial partition") {
    PhiParameter phi = make_phi(dollar, {Rational(0), Rational(0)});
    auto r = phi_polystable(dollar, line_bundle(dollar, {0, 0}), phi);
    CHECK(r.polystable);
    REQUIRE(r.partition.size() == 1u);
    CHECK(r.partition[0] == std::set<int>{0, 1});
  }
  SECTION("strictly semistable splitting at all three nodes") {
    PhiParameter phi = make_phi(dollar, {Rational(1, 2), Rational(-1, 2)});
    SheafDatum s = line_bundle(dollar, {-1, -2});
    s.nonfree = {0, 1, 2};
    REQUIRE(total_degree(dollar, s) == 0);
    auto r = phi_polystable(dollar, s, phi);
    CHECK(r.polystable);
    REQUIRE(r.partition.size() == 2u);
    CHECK(r.partition[0] == std::set<int>{0});
    CHECK(r.partition[1] == std::set<int>{1});
  }
  SECTION("strictly semistable line bundle with no admissible partition") {
    PhiParameter phi = make_phi(dollar, {Rational(1, 2), Rational(-1, 2)});
    SheafDatum s = line_bundle(dollar, {2, -2});
    REQUIRE(phi_semistable(dollar, s, phi).status == Status::StrictlySemistable);
    CHECK_FALSE(phi_polystable(dollar, s, phi).polystable);
  }
  SECTION("unstable sheaves are never poly-stable") {
    PhiParameter phi = make_phi(dollar, {Rational(0), Rational(0)});
    CHECK_FALSE(phi_polystable(dollar, line_bundle(dollar, {4, -4}), phi).polystable);
  }
}

TEST_CASE("slope to phi conversion") {
  CurveGraph dollar = dollar_sign();
  SECTION("dollar-sign closed form for bidegree (a, b)") {
    for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {3, 5}, {7, 2}}) {
      PhiParameter phi =
          slope_to_phi(dollar, make_pol(dollar, {a, b}), std::nullopt, 0);
      CHECK(phi.at(0) == Rational(-1, 2) + Rational(b) / Rational(a + b));
      CHECK(phi.at(1) == Rational(-1, 2) + Rational(a) / Rational(a + b));
      CHECK(phi.target_sum() == 0);
    }
  }
  SECTION("symmetric polarization gives phi = 0") {
    PhiParameter phi = slope_to_phi(dollar, make_pol(dollar, {1, 1}), std::nullopt, 0);
    CHECK(phi.at(0) == Rational(0));
    CHECK(phi.at(1) == Rational(0));
  }
  SECTION("trivial twisting bundle matches the omitted form") {
    LineBundleDatum m{{{0, 0}, {1, 0}}};
    PhiParameter with_m = slope_to_phi(dollar, make_pol(dollar, {2, 3}), m, 0);
    PhiParameter without =
        slope_to_phi(dollar, make_pol(dollar, {2, 3}), std::nullopt, 0);
    CHECK(with_m.value() == without.value());
  }
  SECTION("twisting bundle of the wrong degree is rejected") {
    LineBundleDatum m{{{0, 1}, {1, 0}}};
    CHECK_THROWS_AS(slope_to_phi(dollar, make_pol(dollar, {1, 1}), m, 0),
                    MDegreeMismatchError);
  }
  SECTION("omitted twisting bundle with nonzero degree sums to d") {
    PhiParameter phi = slope_to_phi(dollar, make_pol(dollar, {1, 1}), std::nullopt, 5);
    CHECK(phi.target_sum() == 5);
  }
}

TEST_CASE("phi to polarization round trip") {
  CurveGraph dollar = dollar_sign();
  auto round_trip = [](const CurveGraph& c, const PhiParameter& phi) {
    PolarizationForPhi conv = phi_to_polarization(c, phi);
    PhiParameter back = slope_to_phi(c, conv.l, conv.m, conv.d);
    REQUIRE(back.value().size() == phi.value().size());
    for (const auto& [v, val] : phi.value()) CHECK(back.at(v) == val);
    CHECK(conv.d > c.arithmetic_genus() - 1);
  };
  SECTION("symmetric phi") {
    round_trip(dollar, make_phi(dollar, {Rational(0), Rational(0)}));
  }
  SECTION("the worked bidegree (1,2) parameter") {
    PhiParameter phi = make_phi(
        dollar, {Rational(-1, 2) + Rational(2, 3), Rational(-1, 2) + Rational(1, 3)});
    round_trip(dollar, phi);
    PhiParameter direct =
        slope_to_phi(dollar, make_pol(dollar, {1, 2}), std::nullopt, 0);
    CHECK(direct.value() == phi.value());
  }
  SECTION("huge denominators stay exact") {
    const Rational eps(1, 999999937);  // large prime denominator
    PhiParameter phi = make_phi(dollar, {Rational(1, 2) + eps, Rational(-1, 2) - eps});
    round_trip(dollar, phi);
  }
  SECTION("random rational phi") {
    auto& gen = rng();
    for (int trial = 0; trial < 50; ++trial) {
      CurveGraph c = random_curve(gen);
      std::map<int, Rational> values;
      Rational sum = 0;
      const auto& vs = c.graph().vertices();
      for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
        Rational r(rand_int(gen, -20, 20), rand_int(gen, 1, 12));
        values[vs[i]] = r;
        sum += r;
      }
      values[vs.back()] = -sum;
      round_trip(c, PhiParameter(values, 0));
    }
  }
  SECTION("nonzero target sum is rejected") {
    CHECK_THROWS_AS(
        phi_to_polarization(dollar, make_phi(dollar, {Rational(1), Rational(0)})),
        DegreeMismatchError);
  }
}

TEST_CASE("twist") {
  CurveGraph dollar = dollar_sign();
  SheafDatum s = line_bundle(dollar, {0, 0});
  s.nonfree = {1};
  SECTION("trivial twist is the identity") {
    LineBundleDatum m{{{0, 0}, {1, 0}}};
    SheafDatum t = twist(s, m);
    CHECK(t.component_degree == s.component_degree);
    CHECK(t.nonfree == s.nonfree);
  }
  SECTION("twist then untwist") {
    LineBundleDatum m{{{0, 3}, {1, -2}}};
    LineBundleDatum minus{{{0, -3}, {1, 2}}};
    CHECK(twist(twist(s, m), minus).component_degree == s.component_degree);
  }
  SECTION("componentwise addition") {
    LineBundleDatum m{{{0, 1}, {1, -1}}};
    SheafDatum t = twist(s, m);
    CHECK(t.component_degree.at(0) == 1);
    CHECK(t.component_degree.at(1) == -1);
    CHECK(t.nonfree == s.nonfree);
  }
}

TEST_CASE("stable multidegree counts on the dollar sign") {
  CurveGraph dollar = dollar_sign();
  SECTION("half-integral phi: two stable, two strictly semistable") {
    auto counts = count_stable_line_multidegrees(
        dollar, make_phi(dollar, {Rational(1, 2), Rational(-1, 2)}));
    CHECK(counts.stable.size() == 2u);
    CHECK(counts.strictly_semistable.size() == 2u);
  }
  SECTION("integral phi: three stable, none strictly semistable") {
    auto counts = count_stable_line_multidegrees(
        dollar, make_phi(dollar, {Rational(0), Rational(0)}));
    CHECK(counts.stable.size() == 3u);
    CHECK(counts.strictly_semistable.empty());
  }
  SECTION("one-vertex curve has exactly one multidegree") {
    CurveGraph c = one_node_irreducible(2);
    auto counts = count_stable_line_multidegrees(c, make_phi(c, {Rational(7)}));
    REQUIRE(counts.stable.size() == 1u);
    CHECK(counts.stable[0].at(0) == 7);
  }
}

TEST_CASE("slope and phi stability agree through the twisting dictionary") {
  auto& gen = rng();
  int done = 0;
  while (done < 120) {
    CurveGraph c = random_curve(gen, 4, 3, 2);
    SheafDatum s = random_sheaf(gen, c);
    Polarization l = random_polarization(gen, c);
    const std::int64_t d = total_degree(c, s);
    LineBundleDatum m;
    std::int64_t acc = 0;
    const auto& vs = c.graph().vertices();
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
      m.component_degree[vs[i]] = rand_int(gen, -3, 3);
      acc += m.component_degree[vs[i]];
    }
    m.component_degree[vs.back()] = -d - acc;
    ++done;

    const StabilityVerdict slope = slope_semistable(c, s, l);
    const PhiParameter phi0 = slope_to_phi(c, l, m, d);
    const StabilityVerdict phi_twisted = phi_semistable(c, twist(s, m), phi0);
    CHECK(slope.status == phi_twisted.status);

    // extended parameter of sum d decides the untwisted sheaf identically
    const PhiParameter phi_d = slope_to_phi(c, l, std::nullopt, d);
    CHECK(phi_semistable(c, s, phi_d).status == slope.status);

    // poly-stability transported along the twist
    const bool poly_twisted = phi_polystable(c, twist(s, m), phi0).polystable;
    const bool poly_direct = phi_polystable(c, s, phi_d).polystable;
    CHECK(poly_twisted == poly_direct);
  }
}

TEST_CASE("verdicts are invariant under relabeling") {
  auto& gen = rng();
  for (int trial = 0; trial < 30; ++trial) {
    CurveGraph c = random_curve(gen, 4, 3);
    SheafDatum s = random_sheaf(gen, c);
    const std::int64_t d = total_degree(c, s);
    Polarization l = random_polarization(gen, c);
    PhiParameter phi = slope_to_phi(c, l, std::nullopt, d);

    // relabel vertices v -> 10 v + 7 and edges e -> 3 e + 1
    auto vm = [](int v) { return 10 * v + 7; };
    auto em = [](int e) { return 3 * e + 1; };
    std::vector<int> vs2;
    for (int v : c.graph().vertices()) vs2.push_back(vm(v));
    std::vector<Edge> es2;
    for (const Edge& e : c.graph().edges())
      es2.push_back({em(e.id), vm(e.src), vm(e.dst)});
    std::map<int, int> genus2;
    for (int v : c.graph().vertices()) genus2[vm(v)] = c.genus_of(v);
    CurveGraph c2(MultiGraph(vs2, es2), genus2);
    SheafDatum s2;
    for (const auto& [v, dv] : s.component_degree) s2.component_degree[vm(v)] = dv;
    for (int e : s.nonfree) s2.nonfree.insert(em(e));
    std::map<int, Rational> phi2_vals;
    for (const auto& [v, val] : phi.value()) phi2_vals[vm(v)] = val;
    PhiParameter phi2(phi2_vals, phi.target_sum());

    CHECK(phi_semistable(c, s, phi).status == phi_semistable(c2, s2, phi2).status);
    CHECK(phi_polystable(c, s, phi).polystable ==
          phi_polystable(c2, s2, phi2).polystable);
  }
}

TEST_CASE("generic phi classifications survive small perturbations") {
  auto& gen = rng();
  int tested = 0;
  for (int trial = 0; trial < 60 && tested < 12; ++trial) {
    CurveGraph c = random_curve(gen, 3, 2);
    if (c.graph().num_vertices() < 2) continue;
    Polarization l = random_polarization(gen, c);
    PhiParameter phi = slope_to_phi(c, l, std::nullopt, rand_int(gen, -2, 2));
    ChamberCount counts;
    try {
      counts = count_stable_line_multidegrees(c, phi);
    } catch (const ScaleLimitError&) {
      continue;
    }
    if (!counts.strictly_semistable.empty()) continue;  // phi sits on a wall
    ++tested;

    // perturb within the open chamber: move mass between two vertices
    const auto& vs = c.graph().vertices();
    const Rational eps(1, 1000003);
    std::map<int, Rational> moved = phi.value();
    moved[vs.front()] += eps;
    moved[vs.back()] -= eps;
    PhiParameter phi_eps(moved, phi.target_sum());
    ChamberCount counts_eps = count_stable_line_multidegrees(c, phi_eps);
    CHECK(counts_eps.stable == counts.stable);
    CHECK(counts_eps.strictly_semistable.empty());
  }
  CHECK(tested > 0);
}

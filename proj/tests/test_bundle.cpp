#include <random>
#include <set>

#include "sphereprobe/bundle.hpp"
#include "sphereprobe/mapping_class.hpp"
#include "support.hpp"

using namespace sphereprobe;
using namespace sphereprobe::testing;

namespace {

Bundle& bundle() {
  static Bundle b(fig1_census());
  return b;
}

PathContext& context() {
  static PathContext ctx(fig1_census());
  return ctx;
}

}  // namespace

TEST_CASE("backtrack") {
  const auto& census = fig1_census();
  auto s = census.surface();
  const Curve v = P(s, 2, 5), x1 = P(s, 3, 4), c = census.center();
  CHECK(backtrack(census, v) == x1);
  for (int n : {-2, -1, 1, 3}) CHECK(backtrack(census, half_twist(c, n, v)) == x1);
  CHECK(code_of([&] { backtrack(census, x1); }) == ErrorCode::Precondition);

  // Against the oracle: the layer-1 neighbours of a layer-2 curve.
  for (int i : census.layer_members(2)) {
    std::vector<int> down;
    for (int j = 0; j < census.size(); ++j) {
      if (census.layer(j) == 1 && intersection(census.curve(i), census.curve(j)) == 0) down.push_back(j);
    }
    REQUIRE(down.size() <= 1);
    const Curve bt = backtrack(census, census.curve(i));
    if (down.size() == 1) {
      REQUIRE(bt == census.curve(down[0]));
    } else {
      // The backtrack lies past the census cap; it still misses both curves.
      REQUIRE(census.index_of(bt) < 0);
      REQUIRE(intersection(bt, census.curve(i)) == 0);
      REQUIRE(intersection(bt, census.center()) == 0);
    }
  }
}

TEST_CASE("chop down on every non-isolated layer-2 curve") {
  const auto& census = fig1_census();
  auto s = census.surface();
  auto v = chop_down_check(census, P(s, 2, 5));
  CHECK(v.applicable);
  CHECK(v.holds);
  const auto nonisolated = census.nonisolated_members(2);
  REQUIRE(!nonisolated.empty());
  for (int i : nonisolated) {
    const Curve& x = census.curve(i);
    auto r = chop_down_check(census, x);
    REQUIRE(r.applicable);
    REQUIRE(r.holds);
    REQUIRE(intersection(x, census.center()) == 2);
  }
  // Isolated layer-2 curves do not meet the hypothesis.
  const std::set<int> ni(nonisolated.begin(), nonisolated.end());
  for (int i : census.layer_members(2)) {
    if (!ni.count(i)) REQUIRE_FALSE(chop_down_check(census, census.curve(i)).applicable);
  }
}

TEST_CASE("fiber decomposition of the non-isolated layer 2") {
  const auto& census = fig1_census();
  std::set<std::vector<int>> covered;
  std::size_t total = 0;
  for (int x : census.layer_members(1)) {
    for (const Curve& v : fiber_members(census, census.curve(x))) {
      ++total;
      covered.insert(v.coords());
      REQUIRE(intersection(v, census.curve(x)) == 0);
      REQUIRE(intersection(v, census.center()) == 2);
    }
  }
  CHECK(covered.size() == total);  // disjoint union
  // Every non-isolated layer-2 curve is covered, unless its backtrack lies
  // past the census cap.
  int outside = 0;
  for (int i : census.nonisolated_members(2)) {
    const Curve& v = census.curve(i);
    if (census.index_of(backtrack(census, v)) < 0) ++outside;
    else REQUIRE(covered.count(v.coords()) == 1);
  }
  CHECK(covered.size() + outside == census.nonisolated_members(2).size());
}

TEST_CASE("fiber charts") {
  const auto& census = fig1_census();
  const Curve c = census.center();
  const auto t = fundamental_triangle(census);
  auto chart = build_chart(census, t[0], 8);
  CHECK(chart.window() == 8);
  CHECK(chart.zeta(chart.basepoint()) == 0);
  CHECK(chart.elements_ok);
  CHECK(chart.distinct);
  CHECK(chart.census_missing.empty());
  std::set<std::vector<int>> seen;
  for (int n = -8; n <= 8; ++n) {
    const Curve e = chart.element(n);
    REQUIRE(e == half_twist(c, n, chart.basepoint()));
    REQUIRE(intersection(e, t[0]) == 0);
    REQUIRE(intersection(e, c) == 2);
    REQUIRE(chart.zeta(e) == n);
    seen.insert(e.coords());
  }
  CHECK(seen.size() == 17);
  for (const Curve& v : fiber_members(census, t[0])) CHECK(chart.zeta(v).has_value());
  CHECK(chart.element(30) == half_twist(c, 30, chart.basepoint()));
  CHECK_FALSE(chart.zeta(t[1]).has_value());
}

TEST_CASE("pairing on the figure") {
  const auto& census = fig1_census();
  auto s = census.surface();
  auto& b = bundle();
  const auto t = fundamental_triangle(census);
  const auto& pt = b.pair(t[0], t[1]);
  CHECK(pt.ok());
  CHECK(pt.matching_ok);
  CHECK(pt.offset_ok);
  CHECK(pt.seed_pentagon);

  const Curve v = P(s, 2, 5), psi = P(s, 1, 4);
  REQUIRE(intersection(v, psi) == 0);
  const int z1 = b.zeta(t[0], v);
  const int z2 = b.zeta(t[1], psi);
  CHECK(z2 == z1 + pt.offset);
  // Equivariance: the image of tau_c v is tau_c psi(v), one step further.
  const Curve c = census.center();
  CHECK(intersection(half_twist(c, 1, v), half_twist(c, 1, psi)) == 0);
  CHECK(b.zeta(t[1], half_twist(c, 1, psi)) - b.zeta(t[1], psi) == 1);

  // Each matched pair is adjacent, and nothing else in the charts is.
  const auto& c1 = b.chart(t[0]);
  const auto& c2 = b.chart(t[1]);
  for (auto [n1, n2] : pt.matches) {
    const Curve a = c1.element(n1);
    REQUIRE(intersection(a, c2.element(n2)) == 0);
    for (int m = -4; m <= 4; ++m) {
      if (m != n2) REQUIRE(intersection(a, c2.element(m)) > 0);
    }
  }
}

TEST_CASE("monodromy") {
  const auto& census = fig1_census();
  auto& b = bundle();
  const auto t = fundamental_triangle(census);
  for (int k = 0; k < 3; ++k) {
    for (int l = k + 1; l < 3; ++l) REQUIRE(intersection(t[k], t[l]) == 2);
    REQUIRE(intersection(t[k], census.center()) == 0);
  }
  CHECK(monodromy(b, {t[0]}).value == 0);
  CHECK(monodromy(b, {t[0], t[1], t[0]}).value == 0);
  auto tri = monodromy(b, {t[0], t[1], t[2], t[0]});
  CHECK(tri.ok());
  CHECK(tri.value == 1);
  CHECK(tri.per_v.size() >= 3);
  CHECK(tri.per_basepoint.size() == 5);
  auto rev = monodromy(b, {t[0], t[2], t[1], t[0]});
  CHECK(rev.value == -1);
  // Additivity: the triangle is the sum of its pairing offsets.
  CHECK(tri.value == b.pair(t[0], t[1]).offset + b.pair(t[1], t[2]).offset + b.pair(t[2], t[0]).offset);
}

TEST_CASE("paths in the non-isolated layer 2") {
  const auto& census = fig1_census();
  auto& b = bundle();
  auto& ctx = context();
  const auto t = fundamental_triangle(census);
  const auto& chart = b.chart(t[0]);
  const Curve v = chart.element(0);
  CHECK(s2prime_path(b, ctx, v, v).path.vertices.size() == 1);

  // A zeta gap of one closes with a single triangle loop: v, psi_12 v,
  // psi_23 psi_12 v, and back in E_x1 shifted by one.
  auto one = s2prime_path(b, ctx, v, chart.element(1));
  CHECK(one.ok());
  CHECK(one.loops == 1);
  CHECK(one.path.vertices.size() == 4);

  const auto pool = census.nonisolated_members(2);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Curve& x = census.curve(pool[rng() % pool.size()]);
    const Curve& y = census.curve(pool[rng() % pool.size()]);
    auto p = s2prime_path(b, ctx, x, y);
    REQUIRE(p.ok());
    CHECK(p.path.vertices.front() == x);
    CHECK(p.path.vertices.back() == y);
    for (std::size_t k = 0; k < p.path.vertices.size(); ++k) {
      const Curve& u = p.path.vertices[k];
      if (k + 1 < p.path.vertices.size()) REQUIRE(intersection(u, p.path.vertices[k + 1]) == 0);
      REQUIRE(ctx.layer(u) == 2);
      REQUIRE(intersection(u, census.center()) == 2);
    }
  }
}

TEST_CASE("bundle suite") {
  auto rep = verify_bundle(bundle(), context(), 5, 1);
  CHECK(rep.decomposition_failures == 0);
  CHECK(rep.chart_failures == 0);
  CHECK(rep.pairing_failures == 0);
  CHECK(rep.triangle_monodromy == 1);
  CHECK(rep.reversed_monodromy == -1);
  CHECK(rep.path_passed == 5);
  CHECK(rep.ok());
  const std::string dot = bundle_dot(bundle());
  CHECK(dot.rfind("graph", 0) == 0);
}

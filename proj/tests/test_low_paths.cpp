#include <random>

#include "sphereprobe/low_paths.hpp"
#include "sphereprobe/mapping_class.hpp"
#include "support.hpp"

using namespace sphereprobe;
using namespace sphereprobe::testing;

namespace {

LowPathConfig fast_config() {
  LowPathConfig cfg;
  cfg.projection.M = 20;
  cfg.projection.slack = 5;
  return cfg;
}

PathContext& context() {
  static PathContext ctx(fig1_census(), fast_config());
  return ctx;
}

// Census curves in layer r + 1 disjoint from a.
std::vector<Curve> up_neighbours(const SphereCensus& census, const Curve& a) {
  const int ai = census.index_of(a);
  std::vector<Curve> out;
  for (int j : census.neighbours(ai)) {
    if (census.layer(j) == census.layer(ai) + 1) out.push_back(census.curve(j));
  }
  return out;
}

// Independent vertex checks: adjacency and, for vertices disjoint from a,
// the census layer must be r + 1.
void check_avoids_low_star(const SphereCensus& census, const Curve& a, int r, const std::vector<Curve>& path) {
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (k + 1 < path.size()) REQUIRE(intersection(path[k], path[k + 1]) == 0);
    if (intersection(path[k], a) == 0) {
      const int i = census.index_of(path[k]);
      REQUIRE(i >= 0);
      REQUIRE(census.layer(i) == r + 1);
    }
  }
}

}  // namespace

TEST_CASE("preliminary path: trivial and r = 1") {
  auto& ctx = context();
  const auto& census = ctx.census();
  const Curve a = P(census.surface(), 3, 4);
  const auto ups = up_neighbours(census, a);
  REQUIRE(ups.size() >= 3);

  auto single = preliminary_path(ctx, a, ups[0], ups[0]);
  CHECK(single.vertices.size() == 1);

  for (std::size_t k = 1; k < std::min<std::size_t>(ups.size(), 5); ++k) {
    auto p = preliminary_path(ctx, a, ups[0], ups[k]);
    REQUIRE(p.is_path());
    CHECK(p.vertices.front() == ups[0]);
    CHECK(p.vertices.back() == ups[k]);
    CHECK(audit_preliminary(ctx, a, p).ok());
    check_avoids_low_star(census, a, 1, p.vertices);
    for (const Curve& v : p.vertices) {
      auto d = distance(v, a);
      REQUIRE(d.hi >= 0);
      REQUIRE(d.hi <= 3);
    }
  }
}

TEST_CASE("detours avoid the star of a and stay near the middle vertex") {
  auto& ctx = context();
  const auto& census = ctx.census();
  const Curve a = P(census.surface(), 3, 4);
  const Curve mid = up_neighbours(census, a).at(0);
  std::vector<Curve> crossing;
  for (int j : census.neighbours(census.index_of(mid))) {
    if (intersection(census.curve(j), a) > 0) crossing.push_back(census.curve(j));
  }
  REQUIRE(crossing.size() >= 2);

  auto same = detour_off_S1(ctx, crossing[0], mid, crossing[0], a);
  CHECK(same.vertices.size() == 1);

  for (std::size_t k = 1; k < std::min<std::size_t>(crossing.size(), 4); ++k) {
    auto d = detour_off_S1(ctx, crossing[0], mid, crossing[k], a);
    REQUIRE(d.is_path());
    CHECK(d.vertices.front() == crossing[0]);
    CHECK(d.vertices.back() == crossing[k]);
    for (const Curve& v : d.vertices) {
      REQUIRE(intersection(v, a) > 0);
      REQUIRE(v != a);
      auto dm = distance(v, mid);
      REQUIRE(dm.hi >= 0);
      REQUIRE(dm.hi <= 2);
    }
  }
}

TEST_CASE("push up leaves r = 1 paths alone") {
  // The center misses a, so no twist is needed.
  auto& ctx = context();
  const auto& census = ctx.census();
  const Curve a = P(census.surface(), 3, 4);
  const auto ups = up_neighbours(census, a);
  auto prelim = preliminary_path(ctx, a, ups[0], ups[1]);
  auto pu = push_up(ctx, a, prelim);
  CHECK(pu.N == 0);
  CHECK(pu.path.vertices == prelim.vertices);
  CHECK(pu.audit.ok());
}

TEST_CASE("push up fixes vertices disjoint from a and keeps the four properties") {
  auto& ctx = context();
  const auto& census = ctx.census();
  // A layer-2 pivot whose preliminary path crosses it, so the twist is nontrivial.
  Curve a;
  AnnotatedPath prelim;
  for (int ai : census.layer_members(2)) {
    if (!prelim.vertices.empty()) break;
    const auto ups = up_neighbours(census, census.curve(ai));
    if (ups.size() < 2) continue;
    auto p = preliminary_path(ctx, census.curve(ai), ups[0], ups[1]);
    for (const Curve& v : p.vertices) {
      if (intersection(v, census.curve(ai)) > 0) {
        a = census.curve(ai);
        prelim = p;
      }
    }
  }
  REQUIRE(!prelim.vertices.empty());
  const int r = 2;
  auto pu = push_up(ctx, a, prelim);
  REQUIRE(pu.path.is_path());
  REQUIRE(pu.source.size() == pu.path.vertices.size());
  CHECK(pu.N >= 1);
  for (std::size_t k = 0; k < pu.source.size(); ++k) {
    const Curve& y = pu.source[k];
    if (intersection(y, a) == 0) REQUIRE(pu.path.vertices[k] == y);
    else REQUIRE(pu.path.vertices[k] == dehn_twist(a, pu.N, y));
  }
  CHECK(pu.audit.ok());
  for (std::size_t k = 1; k + 1 < pu.path.vertices.size(); ++k) {
    const Curve& x = pu.path.vertices[k];
    auto da = distance(x, a);
    REQUIRE(da.hi >= 1);
    REQUIRE(da.hi <= 3);
    auto dc = ctx.to_center(x);
    REQUIRE(dc.lo >= r);
    REQUIRE(dc.hi <= r + 2);
  }

  // Twisting the preliminary path by a power of T_a does not change the audit.
  std::vector<Curve> shifted = prelim.vertices;
  for (auto& v : shifted) v = dehn_twist(a, 3, v);
  auto pu2 = push_up(ctx, a, annotate(ctx, shifted, a));
  CHECK(pu2.audit.property == pu.audit.property);
}

TEST_CASE("push up audit on layer-2 pivots") {
  auto& ctx = context();
  auto rep = verify_push_up(ctx, 2, 3, 7);
  CHECK(rep.samples == 3);
  CHECK(rep.prelim_failures == 0);
  for (int f : rep.property_failures) CHECK(f == 0);
  CHECK(rep.inexact == 0);
  CHECK(rep.ok());
}

TEST_CASE("connecting above a layer-1 pivot") {
  auto& ctx = context();
  const auto& census = ctx.census();
  const Curve a = P(census.surface(), 3, 4);
  const auto ups = up_neighbours(census, a);

  CHECK(connect_above(ctx, a, ups[1], ups[1]).path.vertices.size() == 1);
  CHECK(connect_above_ubt(ctx, a, ups[1], ups[1]).path.vertices.size() == 1);

  for (std::size_t k = 1; k < std::min<std::size_t>(ups.size(), 4); ++k) {
    auto above = connect_above(ctx, a, ups[0], ups[k]);
    REQUIRE(above.path.is_path());
    CHECK(above.audit.ok());
    CHECK(above.path.vertices.front() == ups[0]);
    CHECK(above.path.vertices.back() == ups[k]);
    for (const Curve& x : above.path.vertices) {
      auto dc = ctx.to_center(x);
      REQUIRE(dc.lo >= 2);
      if (dc.exact()) REQUIRE(dc.hi <= 3);
      auto da = distance(x, a);
      REQUIRE(da.hi >= 0);
      REQUIRE(da.hi <= 6);
    }
  }
  if (vertex_flags(census, a).unique_backtracking) {
    auto ubt = connect_above_ubt(ctx, a, ups[0], ups[1]);
    CHECK(ubt.audit.ok());
    CHECK(ubt.audit.ball == 4);
  }
}

TEST_CASE("Wright conditions at r = 1") {
  auto& ctx = context();
  auto empty = verify_wright_conditions(ctx, 1, 0, 1);
  CHECK(empty.condition1_samples == 0);
  CHECK(empty.records.empty());

  auto rep = verify_wright_conditions(ctx, 1, 4, 1);
  CHECK(rep.condition1_samples == 4);
  CHECK(rep.ok());
  // Layer 1 has no edges on five punctures, so condition (2) is vacuous there.
  const auto& census = ctx.census();
  CHECK(rep.condition2_pairs == 0);
  const auto ones = census.layer_members(1);
  for (int x : ones) {
    for (int y : ones) REQUIRE((x == y || intersection(census.curve(x), census.curve(y)) > 0));
  }
}

TEST_CASE("Wright condition (2) at r = 2") {
  auto& ctx = context();
  const auto& census = ctx.census();
  auto rep = verify_wright_conditions(ctx, 2, 3, 1);
  CHECK(rep.condition1_passed == rep.condition1_samples);
  CHECK(rep.condition2_pairs == 3);
  // Completing a pentagon above a layer-2 edge can need curves past the
  // census cap; those are reported as cap exhaustion, never as failures.
  CHECK(rep.condition2_passed + rep.condition2_cap == rep.condition2_pairs);
  CHECK(rep.condition2_passed >= 1);
  // Paths x, x1, x2, x3, y: interior in layers 3 and 4, closing a 5-cycle.
  int paths = 0;
  for (const auto& rec : rep.records) {
    if (rec.value("condition", 0) != 2) continue;
    if (!rec.contains("path")) {
      CHECK(rec.contains("error"));
      continue;
    }
    const auto& path = rec.at("path");
    REQUIRE(path.size() == 5);
    std::vector<Curve> cyc;
    for (const auto& v : path) cyc.push_back(Curve::from_coords(census.surface(), v.get<std::vector<int>>()));
    for (int k = 1; k <= 3; ++k) {
      const int l = census.layer(census.index_of(cyc[k]));
      CHECK((l == 3 || l == 4));
    }
    for (int k = 0; k < 5; ++k) REQUIRE(intersection(cyc[k], cyc[(k + 1) % 5]) == 0);
    ++paths;
  }
  CHECK(paths == rep.condition2_passed);
}

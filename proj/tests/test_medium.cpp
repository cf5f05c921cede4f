#include <random>

#include "sphereprobe/medium.hpp"
#include "support.hpp"

using namespace sphereprobe;
using namespace sphereprobe::testing;

namespace {

MediumContext& context() {
  static MediumContext mc = [] {
    MediumConfig cfg;
    cfg.projection.M = 2;
    return MediumContext(s06_census(), cfg);
  }();
  return mc;
}

// Layer-1 pants curves with a nonempty O(z).
std::vector<Curve> pants_with_oz(MediumContext& mc, int count) {
  std::vector<Curve> out;
  for (int i : mc.census().layer_members(1)) {
    const Curve& z = mc.census().curve(i);
    if (!z.is_pants()) continue;
    if (!oz_set(mc, z).members.empty()) out.push_back(z);
    if (static_cast<int>(out.size()) == count) break;
  }
  return out;
}

}  // namespace

TEST_CASE("essentially non-separating curves") {
  auto s = Surface::sorted6();
  auto pants = classify_ens(P(s, 1, 2));
  CHECK(pants.is_pants);
  CHECK(pants.essentially_nonseparating);
  auto half = classify_ens(block_curve(s, 0, 3));
  CHECK_FALSE(half.is_pants);
  CHECK_FALSE(half.essentially_nonseparating);

  auto two = classify_ens_pair(P(s, 1, 2), P(s, 3, 4));
  CHECK(two.condition[1]);
  CHECK(two.pair_ens);
  // P12 inside the curve around {1,2,3}: one puncture between them.
  auto nested = classify_ens_pair(P(s, 1, 2), block_curve(s, 0, 3));
  CHECK(nested.punctures_between == 1);
  CHECK(nested.condition[2]);
  CHECK_FALSE(nested.condition[0]);
  CHECK(code_of([&] { classify_ens_pair(P(s, 1, 2), P(s, 2, 3)); }) == ErrorCode::Precondition);
  CHECK(code_of([&] { classify_ens(P(Surface::fig1(), 1, 2)); }) == ErrorCode::Precondition);
}

TEST_CASE("every census curve is ENS exactly when it is a pants curve") {
  const auto& census = s06_census();
  int pants = 0;
  for (int i = 0; i < census.size(); ++i) {
    const Curve& a = census.curve(i);
    const bool two = a.pants_side().size() == 2;
    pants += two;
    REQUIRE(classify_ens(a).essentially_nonseparating == two);
  }
  CHECK(pants > 0);
  CHECK(pants < census.size());
}

TEST_CASE("restricted view") {
  const auto& census = s06_census();
  RestrictedGraphView view(census);
  const int ci = census.index_of(census.center());
  CHECK(view.contains(ci));
  CHECK(view.first_disagreement(3) == -1);
  CHECK(view.sphere(1) == view.bfs_sphere(1));
  // Edge rule, from the oracle and the classification.
  const auto& vs = view.vertices();
  for (std::size_t p = 0; p < vs.size(); ++p) {
    for (std::size_t q = p + 1; q < vs.size(); ++q) {
      const int i = vs[p], j = vs[q];
      const Curve& a = census.curve(i);
      const Curve& b = census.curve(j);
      bool expect = false;
      if (intersection(a, b) == 0) {
        expect = census.layer(i) != census.layer(j) || i == ci || j == ci || classify_ens_pair(a, b).pair_ens;
      }
      REQUIRE(view.edge(i, j) == expect);
    }
  }
  for (int i = 0; i < census.size(); ++i) REQUIRE(view.contains(i) == (i == ci || census.curve(i).is_pants()));
}

TEST_CASE("O(z) members sit one layer up and project far from c") {
  auto& mc = context();
  const auto& census = mc.census();
  const auto zs = pants_with_oz(mc, 3);
  REQUIRE(!zs.empty());
  for (const Curve& z : zs) {
    auto oz = oz_set(mc, z);
    CHECK(oz.r == 1);
    CHECK(oz.inclusion_ok);
    CHECK(oz.k == 0);
    for (std::size_t k = 0; k < oz.members.size(); ++k) {
      const Curve& a = census.curve(oz.members[k]);
      REQUIRE(intersection(a, z) == 0);
      REQUIRE(census.layer(oz.members[k]) == 2);
      REQUIRE(d_U(z, a, census.center()) == oz.projection[k]);
      REQUIRE(oz.projection[k] > mc.config().projection.M);
    }
    for (const Curve& a : oz.lifted) REQUIRE(intersection(a, z) == 0);
  }
  auto s = census.surface();
  CHECK(code_of([&] { oz_set(mc, block_curve(s, 0, 3)); }) == ErrorCode::NotPants);
}

TEST_CASE("connecting into O(z) and within it") {
  auto& mc = context();
  const auto& census = mc.census();
  const Curve z = pants_with_oz(mc, 1).at(0);
  auto oz = oz_set(mc, z);
  const int M = mc.config().projection.M;
  const Curve& a = census.curve(oz.members[0]);

  auto trivial = connect_to_oz(mc, z, a, M);
  CHECK(trivial.path.vertices.size() == 1);
  CHECK(trivial.e == a);

  // From a pants neighbour of z in layer 2 that is not itself far.
  bool connected = false;
  for (int j : census.neighbours(census.index_of(z))) {
    const Curve& x = census.curve(j);
    if (census.layer(j) != 2 || !x.is_pants()) continue;
    auto conn = connect_to_oz(mc, z, x, M);
    REQUIRE(conn.path.is_path());
    CHECK(conn.path.vertices.front() == x);
    CHECK(conn.path.vertices.back() == conn.e);
    CHECK(d_U(z, conn.e, census.center()) > M);
    for (const Curve& v : conn.path.vertices) {
      REQUIRE(intersection(v, z) == 0);
      REQUIRE(mc.paths().layer(v) == 2);
    }
    connected = true;
    break;
  }
  CHECK(connected);

  CHECK(connect_in_oz(mc, z, a, a).path.vertices.size() == 1);
  for (std::size_t k = 1; k < std::min<std::size_t>(oz.members.size(), 4); ++k) {
    auto in = connect_in_oz(mc, z, a, census.curve(oz.members[k]));
    CHECK(in.ok());
    for (const Curve& v : in.path.vertices) {
      REQUIRE(intersection(v, z) == 0);
      REQUIRE(v != z);
      REQUIRE(mc.paths().layer(v) == 2);
    }
  }
}

TEST_CASE("nearest ENS curve") {
  const auto& census = s06_census();
  int checked = 0;
  for (int i : census.layer_members(1)) {
    const Curve& x = census.curve(i);
    const Curve e = nearest_ens(census, x);
    if (x.is_pants()) {
      REQUIRE(e == x);
      continue;
    }
    ++checked;
    REQUIRE(e.is_pants());
    REQUIRE(intersection(e, x) == 0);
    REQUIRE(census.layer(census.index_of(e)) == 1);
  }
  CHECK(checked > 0);
}

TEST_CASE("paths inside one sphere") {
  auto& mc = context();
  const auto& census = mc.census();
  const auto twos = census.layer_members(2);
  CHECK(medium_sphere_path(mc, census.curve(twos[0]), census.curve(twos[0])).path.vertices.size() == 1);
  const auto ones = census.layer_members(1);
  CHECK(code_of([&] { medium_sphere_path(mc, census.curve(ones[0]), census.curve(ones[1])); }) ==
        ErrorCode::Precondition);

  std::mt19937_64 rng(4);
  int eliminated = 0;
  for (int trial = 0; trial < 3; ++trial) {
    const Curve& x = census.curve(twos[rng() % twos.size()]);
    const Curve& y = census.curve(twos[rng() % twos.size()]);
    auto mp = medium_sphere_path(mc, x, y);
    CHECK(mp.ok());
    eliminated += mp.eliminated;
    CHECK(mp.path.vertices.front() == x);
    CHECK(mp.path.vertices.back() == y);
    for (std::size_t k = 0; k < mp.path.vertices.size(); ++k) {
      if (k + 1 < mp.path.vertices.size()) REQUIRE(intersection(mp.path.vertices[k], mp.path.vertices[k + 1]) == 0);
      REQUIRE(mc.paths().layer(mp.path.vertices[k]) == 2);
    }
  }
  // At least one sample had to route around a layer-1 vertex.
  CHECK(eliminated >= 1);
}

TEST_CASE("medium suite on a small sample") {
  auto rep = verify_medium(context(), 1, 3, 1);
  CHECK(rep.view_disagreement == -1);
  CHECK(rep.ok());
}

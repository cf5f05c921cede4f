#include <cstdio>
#include <fstream>
#include <queue>
#include <random>
#include <sstream>

#include "sphereprobe/mapping_class.hpp"
#include "support.hpp"

using namespace sphereprobe;
using namespace sphereprobe::testing;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Graph distances from index 0 of `curves` over the intersection oracle.
std::vector<int> bfs_by_oracle(const std::vector<Curve>& curves, int from) {
  std::vector<int> d(curves.size(), -1);
  std::queue<int> q;
  d[from] = 0;
  q.push(from);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (std::size_t v = 0; v < curves.size(); ++v) {
      if (d[v] < 0 && curves[u] != curves[v] && intersection(curves[u], curves[v]) == 0) {
        d[v] = d[u] + 1;
        q.push(static_cast<int>(v));
      }
    }
  }
  return d;
}

}  // namespace

TEST_CASE("adjacency") {
  auto s = Surface::fig1();
  CHECK_FALSE(adjacent(P(s, 1, 2), P(s, 1, 2)));
  CHECK(adjacent(P(s, 1, 2), P(s, 3, 4)));
  CHECK_FALSE(adjacent(P(s, 1, 2), P(s, 2, 5)));
  CHECK(code_of([&] { adjacent(P(s, 1, 2), P(Surface::sorted5(), 1, 2)); }) == ErrorCode::MismatchedSurface);
}

TEST_CASE("filling is invariant under the mapping class group") {
  auto s = Surface::fig1();
  CHECK_FALSE(fills(P(s, 1, 2), P(s, 1, 2)));
  CHECK_FALSE(fills(P(s, 1, 2), P(s, 3, 4)));
  CHECK_FALSE(fills(P(s, 1, 2), P(s, 2, 5)));
  const auto curves = enumerate_curves(s, 16, 10000);
  std::mt19937_64 rng(3);
  int filling = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Curve& a = curves[rng() % curves.size()];
    const Curve& b = curves[rng() % curves.size()];
    MappingClassWord w(s);
    for (int k = 0; k < 5; ++k) w = w * MappingClassWord::generator(s, static_cast<int>(rng() % 5), rng() % 2 ? 1 : -1);
    const bool f = fills(a, b);
    filling += f;
    REQUIRE(f == fills(w.apply(a), w.apply(b)));
    // Filling means no curve misses both; check against the sample.
    if (f) {
      for (const auto& z : curves) REQUIRE_FALSE((intersection(z, a) == 0 && intersection(z, b) == 0));
    }
  }
  CHECK(filling > 0);
}

TEST_CASE("small distances") {
  auto s = Surface::fig1();
  const Curve c = P(s, 1, 2);
  auto d0 = distance(c, c);
  CHECK(d0.exact());
  CHECK(d0.hi == 0);
  auto d1 = distance(c, P(s, 3, 4));
  CHECK(d1.exact());
  CHECK(d1.hi == 1);
  auto d2 = distance(c, P(s, 2, 5));
  CHECK(d2.exact());
  CHECK(d2.hi == 2);
  REQUIRE(d2.witness.size() == 3);
  CHECK(d2.witness[1] == P(s, 3, 4));
  CHECK(audit_certificate(d2, c, P(s, 2, 5)));
}

TEST_CASE("census layers agree with oracle BFS and certificates audit") {
  const auto& census = fig1_census(16);
  std::vector<Curve> curves;
  for (int i = 0; i < census.size(); ++i) curves.push_back(census.curve(i));
  const int ci = census.index_of(census.center());
  REQUIRE(ci >= 0);
  const auto bfs = bfs_by_oracle(curves, ci);
  for (int i = 0; i < census.size(); ++i) {
    const auto& cert = census.certificate(i);
    REQUIRE(cert.lo <= bfs[i]);
    if (cert.hi >= 0) REQUIRE(audit_certificate(cert, census.center(), census.curve(i)));
    // d <= 2 is exact and realised inside any census with a witness in it.
    if (bfs[i] >= 0 && bfs[i] <= 2) REQUIRE(census.layer(i) == bfs[i]);
    if (census.layer(i) == 1) REQUIRE(intersection(census.curve(i), census.center()) == 0);
  }
  CHECK(census.layer_members(0) == std::vector<int>{ci});
}

TEST_CASE("census adjacency is exactly disjointness") {
  const auto& census = fig1_census(16);
  for (int i = 0; i < census.size(); ++i) {
    for (int j = 0; j < census.size(); ++j) {
      const bool listed = std::binary_search(census.neighbours(i).begin(), census.neighbours(i).end(), j);
      REQUIRE(listed == (i != j && intersection(census.curve(i), census.curve(j)) == 0));
    }
  }
}

TEST_CASE("Farey triangle of the fundamental triangle in layer 1") {
  const auto& census = fig1_census(20);
  auto s = census.surface();
  const int x1 = census.index_of(P(s, 3, 4)), x2 = census.index_of(P(s, 3, 5)), x3 = census.index_of(P(s, 4, 5));
  REQUIRE(x1 >= 0);
  REQUIRE(x2 >= 0);
  REQUIRE(x3 >= 0);
  for (int i : {x1, x2, x3}) CHECK(census.layer(i) == 1);
  const auto pairs = census.pairs_with_intersection(1, 2);
  auto has = [&](int a, int b) {
    return std::find(pairs.begin(), pairs.end(), std::make_pair(std::min(a, b), std::max(a, b))) != pairs.end();
  };
  CHECK(has(x1, x2));
  CHECK(has(x2, x3));
  CHECK(has(x1, x3));
}

TEST_CASE("girth: no triangles or quadrilaterals, every 5-cycle a pentagon") {
  const auto& census = fig1_census(24);
  auto g = check_girth(census);
  CHECK(g.triangles == 0);
  CHECK(g.quadrilaterals == 0);
  CHECK(g.pentagons_checked > 0);
  CHECK(g.pentagon_failures == 0);

  // Independent count of 4-cycles through the oracle on a smaller census.
  const auto& small = fig1_census(16);
  long long squares = 0;
  for (int a = 0; a < small.size(); ++a) {
    for (int c = a + 1; c < small.size(); ++c) {
      int common = 0;
      for (int b = 0; b < small.size(); ++b) {
        if (b != a && b != c && intersection(small.curve(a), small.curve(b)) == 0 &&
            intersection(small.curve(b), small.curve(c)) == 0)
          ++common;
      }
      squares += common * (common - 1) / 2;
    }
  }
  CHECK(squares == 0);
}

TEST_CASE("pentagon predicate") {
  auto s = Surface::sorted5();
  std::array<Curve, 5> p{P(s, 1, 2), P(s, 2, 3), P(s, 3, 4), P(s, 4, 5), P(s, 5, 1)};
  CHECK(is_pentagon(p));
  std::array<Curve, 5> rep{P(s, 1, 2), P(s, 2, 3), P(s, 1, 2), P(s, 4, 5), P(s, 5, 1)};
  CHECK_FALSE(is_pentagon(rep));
  // As a 5-cycle: (a1, a3, a5, a2, a4).
  CHECK(is_pentagon_cycle({p[0], p[2], p[4], p[1], p[3]}));
}

TEST_CASE("pentagon completions") {
  const auto& census = fig1_census(24);
  auto s = census.surface();
  const Curve c = census.center(), x1 = P(s, 3, 4), x2 = P(s, 3, 5);
  auto w = complete_pentagon_wedge(census, c, x1, x2);
  CHECK(is_pentagon(w.curves));
  for (int k : {1, 4}) {
    const int l = census.layer(census.index_of(w.curves[k]));
    CHECK((l == 1 || l == 2));
  }
  // The completed pentagon read as a 5-cycle (c, x1, s1, s2, x2).
  CHECK(is_pentagon_cycle({c, x1, w.curves[4], w.curves[1], x2}));
  CHECK(code_of([&] { complete_pentagon_wedge(census, c, x1, P(s, 1, 2)); }) == ErrorCode::Precondition);

  // Edge completion from a layer-2 edge of light curves.
  bool done = false;
  for (int i : census.layer_members(2)) {
    if (done || census.curve(i).weight() > 12) continue;
    for (int j : census.neighbours(i)) {
      if (census.layer(j) != 2 || census.curve(j).weight() > 12) continue;
      auto e = complete_pentagon_edge(census, census.curve(i), census.curve(j));
      CHECK(is_pentagon(e.curves));
      for (int k : {1, 3, 4}) {
        const int l = census.layer(census.index_of(e.curves[k]));
        CHECK((l == 3 || l == 4));
      }
      done = true;
      break;
    }
  }
  CHECK(done);
  CHECK(code_of([&] { complete_pentagon_edge(census, c, P(s, 2, 5)); }) == ErrorCode::Precondition);
}

TEST_CASE("vertex flags") {
  const auto& census = fig1_census(24);
  auto s = census.surface();
  auto f = vertex_flags(census, P(s, 3, 4));
  CHECK(f.layer == 1);
  CHECK(f.down == 1);
  CHECK(f.forward_facing);
  for (int i : census.nonisolated_members(2)) {
    auto g = vertex_flags(census, census.curve(i));
    CHECK_FALSE(g.no_sidestepping);
    CHECK_FALSE(g.forward_facing);
  }
  CHECK(code_of([&] { vertex_flags(census, census.center()); }) == ErrorCode::Precondition);
}

TEST_CASE("non-isolated members have a same-layer neighbour") {
  const auto& census = fig1_census(24);
  for (int r = 1; r <= 3; ++r) {
    for (int i : census.nonisolated_members(r)) {
      REQUIRE(census.layer(i) == r);
      bool found = false;
      for (int j : census.neighbours(i)) found = found || census.layer(j) == r;
      REQUIRE(found);
    }
  }
}

TEST_CASE("exact distances are stable when the cap grows") {
  const auto& a = fig1_census(16);
  const auto& b = fig1_census(32);
  for (int i = 0; i < a.size(); ++i) {
    const int j = b.index_of(a.curve(i));
    REQUIRE(j >= 0);
    if (a.certificate(i).exact()) REQUIRE(b.certificate(j).hi == a.certificate(i).hi);
  }
}

TEST_CASE("census files are deterministic and round trip") {
  const auto& census = fig1_census(16);
  const std::string p1 = "test_census_a.jsonl", p2 = "test_census_b.jsonl";
  census.save(p1);
  CensusConfig cfg;
  cfg.cap = 16;
  SphereCensus::build(census.center(), cfg).save(p2);
  CHECK(slurp(p1) == slurp(p2));
  auto back = SphereCensus::load(p1);
  CHECK(back.size() == census.size());
  CHECK(back.config_hash() == census.config_hash());
  for (int i = 0; i < census.size(); ++i) REQUIRE(back.layer(i) == census.layer(i));
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("small cap leaves layer 1 empty") {
  CensusConfig cfg;
  cfg.cap = 4;
  auto census = SphereCensus::build(standard_curve(Surface::fig1(), 1, 2), cfg);
  CHECK(census.layer_members(1).empty());
}

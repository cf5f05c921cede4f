#include <random>

#include "sphereprobe/mapping_class.hpp"
#include "sphereprobe/projections.hpp"
#include "support.hpp"

using namespace sphereprobe;
using namespace sphereprobe::testing;

namespace {

std::vector<std::pair<int, int>> crossing_pairs(const SphereCensus& census, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<int, int>> out;
  while (static_cast<int>(out.size()) < count) {
    const int a = static_cast<int>(rng() % census.size());
    const int b = static_cast<int>(rng() % census.size());
    if (a != b && intersection(census.curve(a), census.curve(b)) > 0) out.emplace_back(a, b);
  }
  return out;
}

}  // namespace

TEST_CASE("annular distance basics") {
  const auto& census = fig1_census();
  for (auto [a, x] : crossing_pairs(census, 30, 1)) {
    CHECK(annular_distance(census.curve(a), census.curve(x), census.curve(x)) <= 1);
  }
  auto s = census.surface();
  CHECK(code_of([&] { annular_distance(P(s, 1, 2), P(s, 3, 4), P(s, 2, 5)); }) == ErrorCode::Precondition);
}

TEST_CASE("annular distance is symmetric and satisfies the triangle inequality") {
  const auto& census = fig1_census();
  std::mt19937_64 rng(2);
  int checked = 0;
  while (checked < 100) {
    const Curve& a = census.curve(static_cast<int>(rng() % census.size()));
    const Curve& x = census.curve(static_cast<int>(rng() % census.size()));
    const Curve& y = census.curve(static_cast<int>(rng() % census.size()));
    const Curve& w = census.curve(static_cast<int>(rng() % census.size()));
    if (intersection(a, x) == 0 || intersection(a, y) == 0 || intersection(a, w) == 0) continue;
    ++checked;
    const int xy = annular_distance(a, x, y);
    REQUIRE(xy == annular_distance(a, y, x));
    REQUIRE(xy <= annular_distance(a, x, w) + annular_distance(a, w, y));
  }
}

TEST_CASE("twisting moves the annular projection by about |n|") {
  const auto& census = fig1_census();
  for (auto [ai, bi] : crossing_pairs(census, 8, 3)) {
    const Curve& a = census.curve(ai);
    const Curve& b = census.curve(bi);
    int prev = -1;
    for (int n = 3; n <= 20; ++n) {
      const int d = annular_distance(a, b, dehn_twist(a, n, b));
      REQUIRE(d >= n - 3);
      REQUIRE(d <= n + 3);
      REQUIRE(d >= prev);
      prev = d;
      REQUIRE(annular_distance(a, b, dehn_twist(a, -n, b)) >= n - 3);
    }
  }
}

TEST_CASE("twisting grows intersection with a third curve") {
  // i(T_a^n x, y) >= (|n| - 2) i(a,x) i(a,y) - i(x,y).
  const auto& census = fig1_census();
  std::mt19937_64 rng(4);
  int checked = 0;
  while (checked < 40) {
    const Curve& a = census.curve(static_cast<int>(rng() % census.size()));
    const Curve& x = census.curve(static_cast<int>(rng() % census.size()));
    const Curve& y = census.curve(static_cast<int>(rng() % census.size()));
    const int ax = intersection(a, x), ay = intersection(a, y);
    if (ax == 0 || ay == 0) continue;
    ++checked;
    for (int n : {3, 5}) {
      REQUIRE(intersection(dehn_twist(a, n, x), y) >= (n - 2) * ax * ay - intersection(x, y));
    }
  }
}

TEST_CASE("complement projection on five punctures") {
  const auto& census = fig1_census();
  const Curve& c = census.center();
  int dmax = 0;
  for (int i = 0; i < census.size(); ++i) {
    const Curve& x = census.curve(i);
    if (x == c) continue;
    auto r = subsurface_projection(c, x);
    REQUIRE(!r.curves.empty());
    if (intersection(x, c) == 0) {
      REQUIRE(r.curves.size() == 1);
      REQUIRE(r.curves[0] == x);
    }
    for (const Curve& y : r.curves) REQUIRE(intersection(y, c) == 0);
    dmax = std::max(dmax, r.diameter);
    REQUIRE(d_U(c, x, x) == r.diameter);
  }
  MESSAGE("observed projection diameter bound " << dmax);
  CHECK(dmax <= 2);
  CHECK(code_of([&] { subsurface_projection(c, c); }) == ErrorCode::Precondition);
}

TEST_CASE("d_U triangle inequality and Lipschitz bound") {
  const auto& census = fig1_census();
  const Curve& c = census.center();
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const Curve& x = census.curve(static_cast<int>(rng() % census.size()));
    const Curve& y = census.curve(static_cast<int>(rng() % census.size()));
    const Curve& w = census.curve(static_cast<int>(rng() % census.size()));
    if (x == c || y == c || w == c) continue;
    REQUIRE(d_U(c, x, y) <= d_U(c, x, w) + d_U(w == c ? x : c, w, y));
  }
  for (int i = 0; i < census.size(); ++i) {
    if (census.curve(i) == c) continue;
    for (int j : census.neighbours(i)) {
      if (census.curve(j) != c) REQUIRE(d_U(c, census.curve(i), census.curve(j)) <= 6);
    }
  }
}

TEST_CASE("complement model on six punctures is inverted by the lift") {
  const auto& census = s06_census();
  const Curve& z = census.center();
  int inside = 0;
  for (int i = 0; i < census.size(); ++i) {
    const Curve& x = census.curve(i);
    if (x == z || intersection(x, z) != 0) continue;
    ++inside;
    const Curve m = complement_model(z, x);
    REQUIRE(m.surface()->punctures() == 5);
    REQUIRE(complement_lift(z, m) == x);
    auto r = subsurface_projection(z, x);
    REQUIRE(complement_lift(z, r.curves.at(0)) == x);
  }
  CHECK(inside > 20);
  // Disjointness is preserved both ways.
  std::vector<Curve> in;
  for (int i = 0; i < census.size(); ++i) {
    const Curve& x = census.curve(i);
    if (x != z && intersection(x, z) == 0) in.push_back(x);
  }
  for (std::size_t i = 0; i < in.size(); ++i) {
    for (std::size_t j = i + 1; j < in.size(); ++j) {
      const bool a = intersection(in[i], in[j]) == 0;
      const bool b = intersection(complement_model(z, in[i]), complement_model(z, in[j])) == 0;
      REQUIRE(a == b);
    }
  }
  const Curve crossing = standard_curve(census.surface(), 2, 3);
  CHECK(code_of([&] { complement_model(z, crossing); }) == ErrorCode::Precondition);
}

TEST_CASE("bgi_check outcomes") {
  auto s = Surface::fig1();
  ProjectionConfig cfg;
  cfg.M = 5;
  const Curve c = P(s, 1, 2), x1 = P(s, 3, 4), v = P(s, 2, 5);
  // Geodesic c, x1, v through x1, which misses c itself.
  auto r = bgi_check({c, x1, v}, c, cfg);
  CHECK(r.status == BgiStatus::Satisfied);
  // Endpoints close in the annulus of a: not applicable.
  const Curve a = P(s, 1, 4);
  auto d = distance(v, P(s, 1, 5));
  REQUIRE(d.exact());
  auto na = bgi_check(d.witness, a, cfg);
  if (na.projection_distance >= 0) CHECK(na.status == BgiStatus::NotApplicable);
  CHECK(code_of([&] { bgi_check({c, v}, a, cfg); }) == ErrorCode::Precondition);
  CHECK(code_of([&] { bgi_check({c, x1, c, x1}, a, cfg); }) == ErrorCode::Precondition);

  // A far pair: y = T_a^N x with a common neighbour w of x and a.
  const Curve b = P(s, 2, 5);  // crosses c, misses P34
  const Curve w = P(s, 3, 4);
  REQUIRE(intersection(b, c) > 0);
  REQUIRE(intersection(w, c) == 0);
  REQUIRE(intersection(w, b) == 0);
  const Curve y = dehn_twist(c, 12, b);
  auto g = distance(b, y);
  REQUIRE(g.exact());
  auto far = bgi_check(g.witness, c, cfg);
  CHECK(far.projection_distance >= cfg.M);
  CHECK(far.status == BgiStatus::Satisfied);
}

TEST_CASE("twist threshold") {
  const auto& census = fig1_census();
  ProjectionConfig cfg;
  cfg.M = 10;
  cfg.slack = 5;
  cfg.max_twist_power = 48;
  std::mt19937_64 rng(8);
  int checked = 0;
  while (checked < 6) {
    const Curve& a = census.curve(static_cast<int>(rng() % census.size()));
    const Curve& b = census.curve(static_cast<int>(rng() % census.size()));
    const Curve& c = census.curve(static_cast<int>(rng() % census.size()));
    if (intersection(a, b) == 0 || intersection(a, c) == 0) continue;
    ++checked;
    const int N = twist_threshold(a, b, c, cfg);
    CHECK(annular_distance(a, dehn_twist(a, N, b), c) >= cfg.M + cfg.slack);
    CHECK(N <= cfg.M + cfg.slack + annular_distance(a, b, c) + 3);
    ProjectionConfig wider = cfg;
    wider.slack *= 2;
    CHECK(twist_threshold(a, b, c, wider) >= N);
  }
  ProjectionConfig tiny = cfg;
  tiny.max_twist_power = 2;
  auto s = census.surface();
  CHECK(code_of([&] { twist_threshold(P(s, 1, 2), P(s, 2, 5), P(s, 2, 3), tiny); }) ==
        ErrorCode::NotFoundUnderCap);
}

TEST_CASE("twisted curves stay at least as far from the center") {
  // For a in layer r and b crossing a, d(c, T_a^N b) >= r whenever certified.
  const auto& census = fig1_census();
  ProjectionConfig cfg;
  cfg.M = 10;
  cfg.slack = 5;
  std::mt19937_64 rng(12);
  for (int r = 1; r <= 2; ++r) {
    const auto members = census.layer_members(r);
    int checked = 0;
    while (checked < 5) {
      const Curve& a = census.curve(members[rng() % members.size()]);
      const Curve& b = census.curve(static_cast<int>(rng() % census.size()));
      if (intersection(a, b) == 0) continue;
      ++checked;
      const int N = r == 1 ? cfg.M : twist_threshold(a, b, census.center(), cfg);
      auto cert = distance(census.center(), dehn_twist(a, N, b), {}, &census);
      CHECK(cert.lo >= 1);
      if (cert.exact()) CHECK(cert.hi >= r);
    }
  }
}

TEST_CASE("projection suite on a small sample") {
  ProjectionConfig cfg;
  cfg.M = 20;
  auto rep = verify_projection(fig1_census(), cfg, 3, 5, 1);
  CHECK(rep.growth_passed == rep.growth_samples);
  CHECK(rep.lipschitz_violations == 0);
  CHECK(rep.bgi_violated == 0);
  CHECK(rep.bgi_satisfied == 5);
  CHECK(rep.ok());
}

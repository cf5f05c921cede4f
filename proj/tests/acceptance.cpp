// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>

#include "sphereprobe/bundle.hpp"
#include "sphereprobe/low_paths.hpp"
#include "sphereprobe/mapping_class.hpp"
#include "sphereprobe/medium.hpp"
#include "sphereprobe/projections.hpp"

using namespace sphereprobe;

namespace {

const SphereCensus& census_at(const std::string& surface, int cap) {
  static std::map<std::pair<std::string, int>, std::unique_ptr<SphereCensus>> cache;
  auto& slot = cache[{surface, cap}];
  if (!slot) {
    CensusConfig cfg;
    cfg.cap = cap;
    slot = std::make_unique<SphereCensus>(SphereCensus::build(standard_curve(Surface::by_name(surface), 1, 2), cfg));
  }
  return *slot;
}

const SphereCensus& fig1(int cap = 24) { return census_at("s05-fig1", cap); }

struct Verdict {
  bool pass = false;
  std::string detail;
};

Verdict girth() {
  auto g = check_girth(fig1());
  std::ostringstream os;
  os << "K=24: triangles=" << g.triangles << " quadrilaterals=" << g.quadrilaterals << " five-cycles=" << g.pentagons_checked
     << " non-pentagons=" << g.pentagon_failures;
  return {g.triangles == 0 && g.quadrilaterals == 0 && g.pentagons_checked > 0 && g.pentagon_failures == 0, os.str()};
}

Verdict twist_bilinearity() {
  const auto& census = fig1();
  std::mt19937_64 rng(2);
  int pairs = 0, checks = 0, mismatches = 0;
  std::array<int, 2> by_i{0, 0};
  for (long long tries = 0; pairs < 200 && tries < 1000000; ++tries) {
    const Curve& a = census.curve(static_cast<int>(rng() % census.size()));
    const Curve& b = census.curve(static_cast<int>(rng() % census.size()));
    const int ab = intersection(a, b);
    if (ab != 2 && ab != 4) continue;
    ++pairs;
    ++by_i[ab / 2 - 1];
    for (int n = -5; n <= 5; ++n) {
      if (n == 0) continue;
      ++checks;
      if (intersection(dehn_twist(a, n, b), b) != std::abs(n) * ab * ab) ++mismatches;
    }
  }
  std::ostringstream os;
  os << pairs << " pairs (i=2: " << by_i[0] << ", i=4: " << by_i[1] << "), " << checks << " twists, " << mismatches
     << " mismatches";
  return {pairs == 200 && mismatches == 0, os.str()};
}

Curve psi(Bundle& b, const Curve& from, const Curve& to, const Curve& v) {
  const int z = b.zeta(from, v);
  return b.chart(to).element(z + b.pair(from, to).offset);
}

Verdict figure_two() {
  const auto& census = fig1();
  auto s = census.surface();
  Bundle b(census);
  const Curve c = census.center(), v = standard_curve(s, 2, 5);
  const auto t = fundamental_triangle(census);
  const bool triangle = t[0] == standard_curve(s, 3, 4) && t[1] == standard_curve(s, 3, 5) && t[2] == standard_curve(s, 4, 5);
  const Curve p12 = psi(b, t[0], t[1], v);
  const Curve loop = psi(b, t[2], t[0], psi(b, t[1], t[2], p12));
  const auto m = monodromy(b, {t[0], t[1], t[2], t[0]});
  const bool a = p12 == standard_curve(s, 1, 4);
  const bool l = loop == standard_curve(s, 1, 5) && loop == half_twist(c, 1, v);
  std::ostringstream os;
  os << "psi12(v)=P14 " << (a ? "yes" : "no") << ", psi31 psi23 psi12(v)=P15=tau_c(v) " << (l ? "yes" : "no")
     << ", monodromy=" << m.value;
  return {triangle && a && l && m.ok() && m.value == 1, os.str()};
}

BundleReport& bundle_report() {
  static BundleReport rep = [] {
    Bundle b(fig1(), 16);
    PathContext ctx(fig1());
    return verify_bundle(b, ctx, 50, 1);
  }();
  return rep;
}

Verdict bundle_structure() {
  const auto& r = bundle_report();
  std::ostringstream os;
  os << "K=24 W=16: S'2=" << r.s2prime << " decomposition failures=" << r.decomposition_failures << " charts=" << r.charts
     << " chart failures=" << r.chart_failures << " unplaced=" << r.unplaced << " pairings=" << r.pairings
     << " pairing failures=" << r.pairing_failures << " pairing cap=" << r.pairing_cap;
  return {r.s2prime > 0 && r.decomposition_failures == 0 && r.chart_failures == 0 && r.unplaced == 0 &&
              r.pairings > 0 && r.pairing_failures == 0 && r.pairing_cap == 0,
          os.str()};
}

Verdict s2prime_paths() {
  const auto& r = bundle_report();
  std::ostringstream os;
  os << r.path_passed << "/" << r.path_samples << " paths audited, cap exhaustion " << r.path_cap;
  return {r.path_samples == 50 && r.path_passed + r.path_cap == 50 && r.path_cap * 10 < 50, os.str()};
}

Verdict push_up_properties() {
  LowPathConfig cfg;
  cfg.projection.M = 20;
  PathContext ctx(fig1(), cfg);
  auto rep = verify_push_up(ctx, 2, 20, 1, &fig1(32));
  std::ostringstream os;
  os << "r=2 K=24 M=20: " << rep.passed << "/" << rep.samples << " passed, property failures " << rep.property_failures[0]
     << "/" << rep.property_failures[1] << "/" << rep.property_failures[2] << "/" << rep.property_failures[3]
     << ", inexact=" << rep.inexact << " unstable=" << rep.unstable << " semi-certified=" << rep.semi_certified
     << ", K=32 stability failures=" << rep.stability_failures;
  return {rep.samples == 20 && rep.ok() && rep.stability_failures == 0 && rep.inexact == 0 && rep.unstable == 0, os.str()};
}

Verdict wright() {
  PathContext ctx(fig1());
  auto rep = verify_wright_conditions(ctx, 1, 20, 1);
  std::ostringstream os;
  os << "r=1: condition (1) " << rep.condition1_passed << "/" << rep.condition1_samples << " within B6, condition (2) "
     << rep.condition2_passed << "/" << rep.condition2_pairs;
  if (rep.condition2_pairs == 0) os << " (layer 1 has no edges, vacuous)";
  return {rep.condition1_samples == 20 && rep.ok(), os.str()};
}

Verdict medium() {
  MediumConfig cfg;
  cfg.projection.M = 2;
  cfg.model_cap = 32;
  MediumContext mc(census_at("s06", 18), cfg);
  auto rep = verify_medium(mc, 1, 10, 1);
  std::ostringstream os;
  os << "s06 K=18 M=2: O(z) inclusion " << rep.oz_passed << "/" << rep.oz_samples << ", paths " << rep.path_passed << "/"
     << rep.path_samples << ", view disagreement " << rep.view_disagreement;
  return {rep.ok() && rep.path_samples == 10 && rep.oz_samples > 0, os.str()};
}

Verdict projection() {
  ProjectionConfig cfg;
  cfg.M = 100;
  auto rep = verify_projection(fig1(), cfg, 20, 50, 1);
  std::ostringstream os;
  os << "growth " << rep.growth_passed << "/" << rep.growth_samples << ", Lipschitz " << rep.lipschitz_edges
     << " edges max " << rep.lipschitz_max << " violations " << rep.lipschitz_violations << ", BGI M=100 "
     << rep.bgi_satisfied << "/" << rep.bgi_target << " violated " << rep.bgi_violated;
  return {rep.ok(), os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"girth", girth},
      {"twist bilinearity", twist_bilinearity},
      {"figure pairing and monodromy", figure_two},
      {"bundle structure", bundle_structure},
      {"S'2 paths", s2prime_paths},
      {"push-up properties", push_up_properties},
      {"Wright conditions", wright},
      {"medium spheres", medium},
      {"projections", projection},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!v.pass) ++failed;
    std::printf("criterion %zu %s  %s: %s (%.1fs)\n", k + 1, v.pass ? "PASS" : "FAIL", criteria[k].first, v.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

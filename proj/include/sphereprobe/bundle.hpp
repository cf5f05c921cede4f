#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sphereprobe/low_paths.hpp"

namespace sphereprobe {

// The unique layer-1 census neighbour of a layer-2 vertex.
Curve backtrack(const SphereCensus& census, const Curve& v);

struct ChopDown {
  bool applicable = false;  // v non-isolated in layer 2
  bool holds = false;       // i(v, c) = 2 and v adjacent to its backtrack
};
ChopDown chop_down_check(const SphereCensus& census, const Curve& v);

// E_x: curves disjoint from x meeting c twice. The half twist about c acts
// on it simply transitively; the chart is n -> tau_c^n(basepoint).
class FareyFiberChart {
 public:
  const Curve& base() const { return x_; }
  const Curve& basepoint() const { return elements_[window_]; }
  int window() const { return window_; }
  // Element n; outside the window it is computed directly.
  Curve element(int n) const;
  std::optional<int> zeta(const Curve& v) const;

  // Audits from construction.
  bool elements_ok = true;        // adjacent to x, i(., c) = 2, certified layer 2
  bool distinct = true;
  std::vector<Curve> census_missing;  // census members of E_x outside the window
  std::vector<std::string> failures;
  nlohmann::json to_json() const;

 private:
  friend FareyFiberChart build_chart(const SphereCensus& census, const Curve& x, int W, int basepoint_shift);
  Curve c_;
  Curve x_;
  int window_ = 0;
  std::vector<Curve> elements_;  // index n + window
  std::map<std::vector<int>, int> index_;
};

// Census members of E_x, sorted by coordinates.
std::vector<Curve> fiber_members(const SphereCensus& census, const Curve& x);
// basepoint_shift k uses tau_c^k of the least census member as basepoint.
FareyFiberChart build_chart(const SphereCensus& census, const Curve& x, int W, int basepoint_shift = 0);

struct PairingTable {
  Curve x1;
  Curve x2;
  int window = 0;
  int offset = 0;                              // zeta_2(psi(v)) = zeta_1(v) + offset
  std::vector<std::pair<int, int>> matches;    // (zeta_1, zeta_2)
  bool matching_ok = true;    // no element of either chart matched twice
  bool offset_ok = true;      // one offset fits every match
  bool complete = true;       // every v whose image lies in the window is matched
  bool seed_pentagon = false; // c, x1, v, psi(v), x2 is a pentagon for the first match
  std::vector<std::string> failures;
  bool ok() const { return matching_ok && offset_ok && complete && seed_pentagon && !matches.empty(); }
  nlohmann::json to_json() const;
};

PairingTable pairing(const SphereCensus& census, const FareyFiberChart& c1, const FareyFiberChart& c2);

// Charts and pairings over one census, with window doubling on exhaustion.
class Bundle {
 public:
  explicit Bundle(const SphereCensus& census, int window = 16, int max_window = 64);

  const SphereCensus& census() const { return census_; }
  const FareyFiberChart& chart(const Curve& x);
  const PairingTable& pair(const Curve& x1, const Curve& x2);
  // Zeta of v in E_x, growing the window of x when needed.
  int zeta(const Curve& x, const Curve& v);
  // Farey path in S_1(c) between layer-1 census curves.
  std::vector<Curve> farey_path(const Curve& from, const Curve& to) const;

 private:
  const SphereCensus& census_;
  int window_;
  int max_window_;
  std::map<std::vector<int>, FareyFiberChart> charts_;
  std::map<std::pair<std::vector<int>, std::vector<int>>, PairingTable> pairs_;
};

struct MonodromyResult {
  int value = 0;
  std::vector<int> per_v;        // value for each tested v
  bool independent_of_v = true;
  bool adjacency_ok = true;      // every psi step audited on the actual curves
  std::vector<int> per_basepoint;
  bool independent_of_basepoint = true;  // closed paths only
  std::vector<std::string> failures;
  bool ok() const { return independent_of_v && adjacency_ok && independent_of_basepoint; }
  nlohmann::json to_json() const;
};

MonodromyResult monodromy(Bundle& bundle, const std::vector<Curve>& farey_path, int basepoint_trials = 5);

// (P{3,4}, P{3,5}, P{4,5}) for the census about P{1,2} on FIG1.
std::array<Curve, 3> fundamental_triangle(const SphereCensus& census);

struct S2Path {
  AnnotatedPath path;
  int loops = 0;              // triangle loops used to close the fiber gap
  bool layers_ok = true;      // every vertex certified in layer 2
  bool nonisolated_ok = true; // every vertex has a layer-2 neighbour
  std::vector<std::string> failures;
  bool ok() const { return layers_ok && nonisolated_ok && path.is_path(); }
  nlohmann::json to_json() const;
};

S2Path s2prime_path(Bundle& bundle, PathContext& ctx, const Curve& v, const Curve& w);

struct BundleReport {
  int s2prime = 0;
  int decomposition_failures = 0;   // beta undefined or chop-down false
  int charts = 0;
  int chart_failures = 0;           // bad elements, repeats, census members left out
  int unplaced = 0;                 // S'_2 vertices with no zeta in the chart of beta(v)
  int pairings = 0;
  int pairing_failures = 0;         // not a matching, several offsets, or incomplete
  int pairing_cap = 0;
  int triangle_monodromy = 0;
  int reversed_monodromy = 0;
  bool triangle_ok = false;
  int path_samples = 0;
  int path_passed = 0;
  int path_cap = 0;
  nlohmann::json records = nlohmann::json::array();
  bool ok() const;
  nlohmann::json to_json() const;
};

BundleReport verify_bundle(Bundle& bundle, PathContext& ctx, int samples, unsigned long long seed);

// S'_2 as a DOT graph, vertices coloured by fiber and labelled with zeta.
std::string bundle_dot(Bundle& bundle);

}  // namespace sphereprobe

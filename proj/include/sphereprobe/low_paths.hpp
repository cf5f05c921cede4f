#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sphereprobe/projections.hpp"

namespace sphereprobe {

struct LowPathConfig {
  ProjectionConfig projection;
  DistanceConfig distance;
};

// Shared state for path constructions over one census: certificate caches
// and secondary censuses centred at pivots (same curve set, other center).
class PathContext {
 public:
  PathContext(const SphereCensus& census, LowPathConfig cfg = {});

  const SphereCensus& census() const { return census_; }
  const Curve& center() const { return census_.center(); }
  const LowPathConfig& config() const { return cfg_; }

  // Certified distance from the center. Census curves use the census
  // certificate; other curves are certified on demand.
  DistanceCertificate to_center(const Curve& x);
  // Shorter witness paths found during a construction (center first).
  void offer_path(const std::vector<Curve>& path_from_center);
  // Distances from a census curve p, through a census centred at p.
  const SphereCensus& centred_at(const Curve& p);
  DistanceCertificate between(const Curve& p, const Curve& x);

  // Exact layer or -1.
  int layer(const Curve& x);

 private:
  const SphereCensus& census_;
  LowPathConfig cfg_;
  std::map<std::vector<int>, DistanceCertificate> center_cache_;
  std::map<std::vector<int>, std::unique_ptr<SphereCensus>> pivots_;
};

struct PathNote {
  DistanceCertificate center;
  std::optional<DistanceCertificate> pivot;
  nlohmann::json to_json() const;
};

struct AnnotatedPath {
  std::vector<Curve> vertices;
  std::vector<PathNote> notes;  // recomputed from oracles, see annotate()
  std::optional<Curve> pivot;
  int twist_power = 0;

  bool is_path() const;  // consecutive vertices adjacent
  nlohmann::json to_json() const;
};

AnnotatedPath annotate(PathContext& ctx, std::vector<Curve> vertices, const std::optional<Curve>& pivot);

// Properties of a preliminary path for (a, b, b').
struct PrelimAudit {
  bool within_three = true;      // every vertex in S_1(a) ∪ S_2(a) ∪ S_3(a)
  bool far_vertices_near = true; // S_3(a) vertices within 2 of (S_{r-1} ∪ S_r) ∩ S_1(a)
  bool adjacent_ones_up = true;  // S_1(a) vertices lie in S_{r+1}
  bool ok() const { return within_three && far_vertices_near && adjacent_ones_up; }
  nlohmann::json to_json() const;
};

AnnotatedPath preliminary_path(PathContext& ctx, const Curve& a, const Curve& b, const Curve& b2);
PrelimAudit audit_preliminary(PathContext& ctx, const Curve& a, const AnnotatedPath& path);

AnnotatedPath detour_off_S1(PathContext& ctx, const Curve& x_prev, const Curve& x_mid, const Curve& x_next,
                            const Curve& a);

struct PushUpAudit {
  std::array<bool, 4> property{true, true, true, true};
  bool exact = true;         // all distances exactly certified
  bool stable = true;        // EXHAUSTION bounds unchanged with doubled witness bound
  int semi_certified = 0;    // vertices whose distance to c rests on EXHAUSTION
  std::vector<std::string> failures;
  bool ok() const { return property[0] && property[1] && property[2] && property[3]; }
  nlohmann::json to_json() const;
};

struct PushUp {
  AnnotatedPath path;
  std::vector<Curve> source;  // untwisted preliminary vertices
  int N = 0;
  PushUpAudit audit;
};

PushUp push_up(PathContext& ctx, const Curve& a, const AnnotatedPath& prelim);

// Paths from b to b' in S_{r+1} ∪ S_{r+2} near a; both end with an audit.
struct AboveAudit {
  bool layers_ok = true;   // every vertex certified in S_{r+1} ∪ S_{r+2}
  bool ball_ok = true;     // every vertex within the stated ball of a
  int ball = 0;
  std::vector<std::string> failures;
  bool ok() const { return layers_ok && ball_ok; }
  nlohmann::json to_json() const;
};

struct AbovePath {
  AnnotatedPath path;
  AboveAudit audit;
};

AbovePath connect_above_ubt(PathContext& ctx, const Curve& a, const Curve& b, const Curve& b2);
AbovePath connect_above(PathContext& ctx, const Curve& a, const Curve& b, const Curve& b2);

struct WrightReport {
  int r = 0;
  int condition1_samples = 0;
  int condition1_passed = 0;
  int condition1_cap = 0;    // cap exhaustion, not refutation
  int condition2_pairs = 0;
  int condition2_passed = 0;
  int condition2_cap = 0;
  nlohmann::json records = nlohmann::json::array();
  bool ok() const { return condition1_passed == condition1_samples && condition2_passed == condition2_pairs; }
  nlohmann::json to_json() const;
};

WrightReport verify_wright_conditions(PathContext& ctx, int r, int samples, unsigned long long seed);

// Sampled (a, b, b') with a in S_r and b, b' in S_{r+1} adjacent to a:
// preliminary path, push_up, and the four properties. Non-exact distances
// must sit at r + 2 with EXHAUSTION evidence stable under doubled witness
// bound. With a larger census, property (4) is rechecked there.
struct PushUpReport {
  int r = 0;
  int samples = 0;
  int passed = 0;
  int cap = 0;
  int prelim_failures = 0;
  std::array<int, 4> property_failures{0, 0, 0, 0};
  int inexact = 0;      // non-exact distances other than EXHAUSTION at r + 2
  int unstable = 0;
  int semi_certified = 0;
  int stability_cap = 0;  // cap of the larger census, 0 when absent
  int stability_failures = 0;
  nlohmann::json records = nlohmann::json::array();
  bool ok() const { return passed == samples; }
  nlohmann::json to_json() const;
};

PushUpReport verify_push_up(PathContext& ctx, int r, int samples, unsigned long long seed,
                            const SphereCensus* larger = nullptr);

}  // namespace sphereprobe

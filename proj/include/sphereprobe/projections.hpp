#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sphereprobe/curve_graph.hpp"

namespace sphereprobe {

struct ProjectionConfig {
  int M = 100;       // BGI threshold, shared by annular and complement projections
  int slack = 20;    // "much larger than M" means >= M + slack
  int max_twist_power = 64;
  void validate() const;
};

// One lift of a curve crossing the axis of a in the annular cover: it runs
// along the axis over dedge positions [start, end] (integers on the axis,
// period = length of a).
struct AnnularArc {
  int orient = 0;
  int offset = 0;  // index into the oriented path where the shared run begins
  long long start = 0;
  long long end = 0;
};

struct ProjectionResult {
  enum class Kind { Annulus, Complement };
  Kind kind = Kind::Annulus;
  Curve subsurface;               // the core curve a, or the curve z cut out
  std::vector<AnnularArc> arcs;   // annulus
  std::vector<Curve> curves;      // complement: curves of U
  std::vector<Slope> slopes;      // complement on five punctures
  int diameter = 0;
  nlohmann::json to_json() const;
};

ProjectionResult annular_projection(const Curve& a, const Curve& x);
// d_a(x, y): diameter of the union of the arc sets in the curve graph of the
// annulus, where distinct arcs are 1 + (interior crossings) apart.
int annular_distance(const Curve& a, const Curve& x, const Curve& y);

// Projection to the complement component U of z that is not a pair of pants.
// Five punctures: the Farey graph of U, any x != z. Six punctures (z a pants
// curve): U is modelled as a five-punctured sphere; only curves inside U.
ProjectionResult subsurface_projection(const Curve& z, const Curve& x);
int d_U(const Curve& z, const Curve& x, const Curve& y);

// Image of a curve x inside U (six punctures, pants z) on the five-punctured
// model sphere, with the boundary of U as a puncture.
Curve complement_model(const Curve& z, const Curve& x);
// Inverse of complement_model: a model curve back to its curve inside U.
Curve complement_lift(const Curve& z, const Curve& m);

enum class BgiStatus { NotApplicable, Satisfied, Violated };
const char* to_string(BgiStatus s);

struct BgiReport {
  BgiStatus status = BgiStatus::NotApplicable;
  int projection_distance = 0;  // d_a of the endpoints, -1 if an endpoint misses a
  int non_cutting_index = -1;   // first path vertex disjoint from a (or equal to it)
  int length = 0;
  nlohmann::json to_json() const;
};

// path must be a geodesic certified by an exact distance certificate.
BgiReport bgi_check(const std::vector<Curve>& path, const Curve& a, const ProjectionConfig& cfg);

// Least N <= max_twist_power with d_a(T_a^N'(b), c) >= M + slack for every
// tested N' in [N, max_twist_power].
int twist_threshold(const Curve& a, const Curve& b, const Curve& c, const ProjectionConfig& cfg);

// Sampled checks on a five-punctured census: twist growth of d_a(b, T_a^n b)
// for n <= max_twist_power, d_U <= 6 across census edges, and BGI on
// certified geodesics between x and T_a^n(x') with d_a >= M.
struct ProjectionReport {
  int growth_samples = 0;
  int growth_passed = 0;
  int growth_max_deviation = 0;  // max | d_a(b, T^n b) - |n| |
  std::vector<int> growth_bounds{2, 4, 8, 16, 32, 60};
  int lipschitz_subsurfaces = 0;
  long long lipschitz_edges = 0;
  int lipschitz_max = 0;
  int lipschitz_violations = 0;
  int bgi_target = 0;
  int bgi_attempts = 0;
  int bgi_satisfied = 0;
  int bgi_violated = 0;
  int bgi_uncertified = 0;  // distance not exactly certified: skipped
  nlohmann::json records = nlohmann::json::array();
  bool ok() const {
    return growth_passed == growth_samples && lipschitz_violations == 0 && bgi_violated == 0 &&
           bgi_satisfied == bgi_target;
  }
  nlohmann::json to_json() const;
};

ProjectionReport verify_projection(const SphereCensus& census, const ProjectionConfig& cfg, int samples,
                                   int bgi_samples, unsigned long long seed);

}  // namespace sphereprobe

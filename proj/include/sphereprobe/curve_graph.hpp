#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "sphereprobe/farey.hpp"

namespace sphereprobe {

bool adjacent(const Curve& a, const Curve& b);
// Five-punctured sphere only: no curve is disjoint from both.
bool fills(const Curve& a, const Curve& b);

enum class Evidence { Equal, Distinct, Intersecting, Filling, Exhaustion };
const char* to_string(Evidence e);

struct DistanceCertificate {
  int lo = 0;
  int hi = -1;  // -1: no witness path known
  Evidence evidence = Evidence::Equal;
  std::vector<Curve> witness;  // realises hi when hi >= 0
  int exhaustion_bound = 0;    // search bound behind Exhaustion evidence

  bool exact() const { return hi >= 0 && lo == hi; }
  nlohmann::json to_json() const;
};

struct DistanceConfig {
  int witness_bound = 3;  // Farey radius for distance-3 witnesses
  int witness_spread = 2;
};

class SphereCensus;

// Exact for d <= 2 on the five-punctured sphere (Farey descent) and for d = 3
// whenever a witness is found; otherwise an interval. On the six-punctured
// sphere the d = 2 witness search runs over the census when one is given.
DistanceCertificate distance(const Curve& a, const Curve& b, const DistanceConfig& cfg = {},
                             const SphereCensus* census = nullptr);

// Checks a certificate's witness path against the intersection oracle.
bool audit_certificate(const DistanceCertificate& cert, const Curve& a, const Curve& b);

struct CensusConfig {
  int cap = 24;
  int max_curves = 200000;
  DistanceConfig distance;
};

class SphereCensus {
 public:
  static SphereCensus build(const Curve& center, const CensusConfig& cfg);
  // Same curve set and graph, distances recertified from p (a census curve).
  SphereCensus recentred(const Curve& p) const;

  const SurfacePtr& surface() const { return center_.surface(); }
  const Curve& center() const { return center_; }
  int cap() const { return cfg_.cap; }
  const CensusConfig& config() const { return cfg_; }
  int size() const { return static_cast<int>(curves_.size()); }

  const Curve& curve(int i) const { return curves_[i]; }
  const DistanceCertificate& certificate(int i) const { return certs_[i]; }
  int layer(int i) const { return layer_[i]; }  // -1 when unknown
  const std::vector<int>& neighbours(int i) const { return adj_[i]; }
  bool nonisolated(int i) const;
  int index_of(const Curve& c) const;  // -1 when absent
  std::vector<int> layer_members(int r) const;
  std::vector<int> nonisolated_members(int r) const;
  int max_layer() const;
  // Farey edges of the census: pairs with i = 2 inside one layer.
  std::vector<std::pair<int, int>> pairs_with_intersection(int r, int value) const;

  std::string config_hash() const { return config_hash(center_, cfg_); }
  static std::string config_hash(const Curve& center, const CensusConfig& cfg);
  void save(const std::string& path) const;
  static SphereCensus load(const std::string& path);

  // Frames are cached per curve; the census owns them.
  const FareyFrame& frame(const Curve& z, const Standardization* hint = nullptr) const;

 private:
  void certify();

  Curve center_;
  CensusConfig cfg_;
  std::vector<Curve> curves_;
  std::vector<DistanceCertificate> certs_;
  std::vector<int> layer_;
  std::vector<std::vector<int>> adj_;
  std::unordered_map<Curve, int, CurveHash> index_;
  mutable std::map<std::vector<int>, std::shared_ptr<FareyFrame>> frames_;
};

// All curves with coordinate sum <= cap, sorted by (weight, coords).
std::vector<Curve> enumerate_curves(const SurfacePtr& s, int cap, int max_curves);

struct GirthReport {
  long long triangles = 0;
  long long quadrilaterals = 0;
  long long pentagons_checked = 0;
  long long pentagon_failures = 0;
  std::vector<std::array<int, 5>> failing_cycles;
  std::vector<std::array<int, 4>> short_cycles;  // witnesses, -1 padded
  nlohmann::json to_json(const SphereCensus& census) const;
};

GirthReport check_girth(const SphereCensus& census);

struct PentagonWitness {
  std::array<Curve, 5> curves;
  std::array<std::vector<int>, 5> pairs;
  nlohmann::json to_json() const;
};

// a_1..a_5 in pentagon order: neighbours meet twice, others are disjoint, and
// a_i surrounds punctures {i, i+1} under some cyclic labelling.
bool is_pentagon(const std::array<Curve, 5>& a);
// A 5-cycle of the curve graph v_0..v_4 is a pentagon in the order
// (v_0, v_2, v_4, v_1, v_3).
bool is_pentagon_cycle(const std::array<Curve, 5>& cycle);

PentagonWitness complete_pentagon_edge(const SphereCensus& census, const Curve& a1, const Curve& a3);
PentagonWitness complete_pentagon_wedge(const SphereCensus& census, const Curve& a1, const Curve& a3,
                                        const Curve& a4);

struct VertexFlags {
  int layer = -1;
  int down = 0;  // census neighbours one layer down
  int same = 0;  // census neighbours in the same layer
  bool unique_backtracking = false;
  bool no_sidestepping = false;
  bool forward_facing = false;
  int cap = 0;  // flags are relative to this census cap
};
VertexFlags vertex_flags(const SphereCensus& census, const Curve& x);

}  // namespace sphereprobe

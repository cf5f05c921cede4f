#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "sphereprobe/low_paths.hpp"

namespace sphereprobe {

// Essentially non-separating curves and two-component multicurves on the
// six-punctured sphere. Every curve there separates, so a curve is
// essentially non-separating exactly when it is a pants curve.
struct EnsClassification {
  bool is_pants = false;
  bool essentially_nonseparating = false;
  // Pair fields (classify_ens_pair only).
  bool pair = false;
  bool components_ens = false;
  std::array<bool, 3> condition{false, false, false};  // (1) non-separating, (2) a pants component, (3) 1-punctured annulus between
  int punctures_between = -1;
  bool pair_ens = false;
  nlohmann::json to_json() const;
};

EnsClassification classify_ens(const Curve& a);
EnsClassification classify_ens_pair(const Curve& alpha, const Curve& beta);

// The subgraph on c plus essentially non-separating census curves; disjoint
// curves are joined when their union is essentially non-separating or their
// certified layers differ.
class RestrictedGraphView {
 public:
  explicit RestrictedGraphView(const SphereCensus& census);

  const SphereCensus& census() const { return census_; }
  const Curve& center() const { return census_.center(); }
  bool contains(int i) const { return in_view_[i]; }
  const std::vector<int>& vertices() const { return vertices_; }
  const std::vector<int>& neighbours(int i) const { return adj_[i]; }
  bool edge(int i, int j) const;

  // S_r^c as global layer filtered to the view, and as BFS sphere in the view.
  std::vector<int> sphere(int r) const;
  std::vector<int> bfs_sphere(int r) const;
  int bfs_layer(int i) const { return bfs_[i]; }
  // First radius <= rmax where the two computations disagree, or -1.
  int first_disagreement(int rmax) const;

 private:
  const SphereCensus& census_;
  std::vector<char> in_view_;
  std::vector<int> vertices_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> bfs_;
};

struct MediumConfig {
  ProjectionConfig projection;  // M: threshold on d_U for membership in O(z)
  DistanceConfig distance;
  int target = -1;              // N for connect_to_oz; -1 means M
  int model_cap = 32;           // census cap for paths inside U
  int target_or_default() const { return target < 0 ? projection.M : target; }
};

struct OzSet {
  Curve z;
  int r = 0;
  int M = 0;
  std::vector<int> members;       // census indices
  std::vector<int> projection;    // d_U(member, c)
  // Members beyond the census: lifts of model-census curves of U.
  std::vector<Curve> lifted;
  std::vector<int> lifted_projection;
  int k = 0;                      // measured diameter of the projection of c to U
  bool inclusion_ok = true;       // members (census and lifted) certified in layer r + 1
  std::vector<std::string> failures;
  std::string note;               // cap-exhaustion notes
  nlohmann::json to_json(const SphereCensus& census) const;
};

// Shared state for the medium constructions: the view, certificate caches
// and model censuses of complements U (one per pants curve z).
class MediumContext {
 public:
  MediumContext(const SphereCensus& census, MediumConfig cfg = {});

  const SphereCensus& census() const { return view_.census(); }
  const RestrictedGraphView& view() const { return view_; }
  PathContext& paths() { return paths_; }
  const MediumConfig& config() const { return cfg_; }
  const Curve& center() const { return census().center(); }

  // d_U(x, c) for the complement U of z; memoised.
  int du_center(const Curve& z, const Curve& x);
  // Census of the model sphere of U centred at the image of c.
  const SphereCensus& model_census(const Curve& z);
  // Lift of a model-census curve into U, memoised.
  const Curve& lift(const Curve& z, int model_index);

 private:
  RestrictedGraphView view_;
  MediumConfig cfg_;
  PathContext paths_;
  std::map<std::pair<std::vector<int>, std::vector<int>>, int> du_;
  std::map<std::vector<int>, std::unique_ptr<SphereCensus>> models_;
  std::map<std::pair<std::vector<int>, int>, Curve> lifts_;
};

OzSet oz_set(MediumContext& mc, const Curve& z);

struct OzConnection {
  AnnotatedPath path;  // x first, e last
  Curve e;
  int du = 0;
};

OzConnection connect_to_oz(MediumContext& mc, const Curve& z, const Curve& x, int N);

struct InOzPath {
  AnnotatedPath path;
  bool inside_u = true;     // every vertex disjoint from z
  bool layers_ok = true;    // every vertex certified in layer r + 1
  std::vector<std::string> failures;
  bool ok() const { return inside_u && layers_ok && path.is_path(); }
  nlohmann::json to_json() const;
};

InOzPath connect_in_oz(MediumContext& mc, const Curve& z, const Curve& a, const Curve& b);

Curve nearest_ens(const SphereCensus& census, const Curve& x);

struct MediumPath {
  AnnotatedPath path;
  std::vector<Curve> view_path;  // the S_r^c + S_{r+1}^c path before elimination
  int eliminated = 0;            // S_r^c vertices replaced
  bool layers_ok = true;         // every vertex certified in S_{r+1}
  std::vector<std::string> failures;
  bool ok() const { return layers_ok && path.is_path(); }
  nlohmann::json to_json() const;
};

MediumPath medium_sphere_path(MediumContext& mc, const Curve& x, const Curve& y);

struct MediumReport {
  int r = 0;
  int view_disagreement = -1;
  int oz_samples = 0;
  int oz_passed = 0;
  int oz_empty = 0;
  int path_samples = 0;
  int path_passed = 0;
  int path_cap = 0;
  nlohmann::json records = nlohmann::json::array();
  bool ok() const {
    return view_disagreement < 0 && oz_passed == oz_samples && path_passed == path_samples;
  }
  nlohmann::json to_json() const;
};

MediumReport verify_medium(MediumContext& mc, int r, int samples, unsigned long long seed);

}  // namespace sphereprobe

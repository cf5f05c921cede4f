#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sphereprobe/surface.hpp"

namespace sphereprobe {

// Isotopy class of an essential, non-peripheral simple closed curve, stored
// as canonical normal coordinates together with the reduced cyclic dual path
// it traces. Equality is equality of coordinates.
class Curve {
 public:
  Curve() = default;

  // Validates and traces; throws Error (Parity, TriangleInequality,
  // Disconnected, Peripheral, Empty, InvalidArgument).
  static Curve from_coords(SurfacePtr s, std::vector<int> coords);
  // Conjugacy class given by a word in the surface's free basis. The caller
  // guarantees the class is simple.
  static Curve from_word(SurfacePtr s, std::span<const int> w);

  const SurfacePtr& surface() const { return surface_; }
  const std::vector<int>& coords() const { return coords_; }
  const std::vector<int>& path() const { return path_; }  // cyclic, reduced
  Word word() const { return surface_->path_to_word(path_); }
  int length() const { return static_cast<int>(path_.size()); }
  int weight() const;  // coordinate sum

  // Pants side first: the side with 2 punctures, or for a 3/3 split the side
  // holding the smallest label. Labels are sorted.
  const std::vector<int>& pants_side() const { return side_; }
  const std::vector<int>& other_side() const { return other_; }
  bool is_pants() const { return side_.size() == 2; }

  const std::string& name() const { return name_; }
  Curve named(std::string n) const;

  bool operator==(const Curve& o) const { return coords_ == o.coords_; }
  bool operator!=(const Curve& o) const { return !(*this == o); }
  bool operator<(const Curve& o) const;  // weight, then lexicographic coords

  nlohmann::json to_json() const;
  static Curve from_json(const nlohmann::json& j);

 private:
  void finish();

  SurfacePtr surface_;
  std::vector<int> coords_;
  std::vector<int> path_;
  std::vector<int> side_;
  std::vector<int> other_;
  std::string name_;
};

struct CurveHash {
  std::size_t operator()(const Curve& c) const noexcept;
};

// Connected components of a normal coordinate vector as cyclic dual paths.
// Throws on parity / triangle-inequality failures; components that are
// puncture links are returned too.
std::vector<std::vector<int>> trace_components(const Surface& s, const std::vector<int>& coords);

// Normal coordinates crossed by a cyclic dual path.
std::vector<int> path_coords(const Surface& s, std::span<const int> path);

// Boundary of a neighbourhood of the straight chord between labels p and q.
Curve standard_curve(const SurfacePtr& s, int p, int q);
// Curve enclosing the k consecutive positions m, m+1, ..., m+k-1 (mod n).
Curve block_curve(const SurfacePtr& s, int m, int k);

int intersection(const Curve& a, const Curve& b);
// Independent test of i(a,b) = 0: the summed coordinates trace exactly a and b.
bool disjoint_by_sum(const Curve& a, const Curve& b);

std::pair<std::vector<int>, std::vector<int>> puncture_partition(const Curve& a);

void require_same_surface(const Curve& a, const Curve& b);

}  // namespace sphereprobe

#pragma once

#include <vector>

#include "sphereprobe/curve.hpp"

namespace sphereprobe {

// Product of half twists σ_m (m = 0..n-1), where σ_m exchanges the punctures
// at cyclically adjacent positions m and m+1 along the polygon side between
// them. Letters act right to left: (u * v)(a) = u(v(a)).
class MappingClassWord {
 public:
  struct Letter {
    int gen = 0;
    int exp = 0;
    bool operator==(const Letter&) const = default;
  };

  MappingClassWord() = default;
  explicit MappingClassWord(SurfacePtr s) : surface_(std::move(s)) {}

  static MappingClassWord identity(SurfacePtr s) { return MappingClassWord(std::move(s)); }
  static MappingClassWord generator(SurfacePtr s, int m, int exp = 1);

  const SurfacePtr& surface() const { return surface_; }
  const std::vector<Letter>& letters() const { return letters_; }
  bool is_identity() const { return letters_.empty(); }
  int letter_count() const;  // sum of |exp|

  MappingClassWord operator*(const MappingClassWord& o) const;
  MappingClassWord inverse() const;
  MappingClassWord power(int k) const;

  Curve apply(const Curve& a) const;
  Word apply_word(std::span<const int> w) const;  // on conjugacy classes

  bool operator==(const MappingClassWord&) const = default;

 private:
  void push(int gen, int exp);

  SurfacePtr surface_;
  std::vector<Letter> letters_;
};

// a = h(block_curve(position, size)).
struct Standardization {
  MappingClassWord h;
  int position = 0;
  int size = 2;
};

// Search cap counts curve expansions; exceeding it raises ResourceCap.
Standardization standardize(const Curve& a, int max_expansions = 200000);

// Twists about arbitrary curves, conjugated from a standard block.
MappingClassWord half_twist_word(const Curve& c, int n);
MappingClassWord dehn_twist_word(const Curve& a, int n);

// τ_c^n(b); c must bound a twice-punctured disk (NotPants otherwise).
Curve half_twist(const Curve& c, int n, const Curve& b);
// T_a^n(b), with T_a = τ_a^2 for pants curves.
Curve dehn_twist(const Curve& a, int n, const Curve& b);

// Sign σ with τ_c^2 = T_c^σ under the fixed conventions.
constexpr int kHalfTwistSquareSign = 1;

}  // namespace sphereprobe

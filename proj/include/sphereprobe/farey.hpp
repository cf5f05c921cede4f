#pragma once

#include <vector>

#include "sphereprobe/mapping_class.hpp"

namespace sphereprobe {

// Rational slope p/q as a primitive vector up to sign; 1/0 is infinity.
struct Slope {
  long long p = 1;
  long long q = 0;
  bool operator==(const Slope&) const = default;
  bool operator<(const Slope& o) const { return p != o.p ? p < o.p : q < o.q; }
};

Slope normalize(long long p, long long q);
int farey_distance(Slope a, Slope b);

// On the five-punctured sphere the curves disjoint from a curve z form a
// Farey graph (curves of the four-holed sphere U beyond z). A frame fixes
// z = h(P) for a standard block P and uses the two standard curves y0, y1
// around the next position pairs as the base Farey edge; the half twists
// about them generate the action on U.
class FareyFrame {
 public:
  explicit FareyFrame(const Curve& z);
  // Skips the search when z = st.h(block) is already known.
  FareyFrame(const Curve& z, Standardization st);

  struct Vertex {
    MappingClassWord g;  // vertex is g(y_slot) in the standard frame
    int slot = 0;
    long long m[4] = {1, 0, 0, 1};  // matrix of g on slopes, row major
  };

  const Curve& z() const { return z_; }
  Curve curve(const Vertex& v) const;
  Slope slope(const Vertex& v) const;

  struct Descent {
    int value = 0;  // min of i(w, x) over curves w in U
    Vertex at;
    Curve minimiser;
    Curve transported;  // g^-1 h^-1 x for the final g
  };
  // Greedy descent over the Farey graph; the minimum is global because
  // i(., x) restricted to U is a positive combination of |det(., s)| over the
  // arc slopes s of x.
  Descent descend(const Curve& x) const;

  // Slopes of the arcs of x in U (the subsurface projection); for x inside U
  // its own slope. Requires x != z.
  std::vector<Slope> projection(const Curve& x) const;
  // Curves of U realising projection(x), same order.
  std::vector<Curve> projection_curves(const Curve& x) const;

  // z-side standardization of a vertex curve, for building its own frame.
  Standardization standardization(const Vertex& v) const;

  struct Neighbour {
    Curve curve;
    Standardization st;
  };
  // Neighbours of the minimiser window for witness searches: vertices at
  // Farey distance <= radius from the minimiser, restricted at each step to
  // the `spread` neighbours nearest the local intersection minimum.
  std::vector<Neighbour> neighbourhood(const Curve& x, int radius, int spread) const;

 private:
  int twist_gen(int slot) const { return slot == 0 ? u_ : v_; }
  // i(y_other, sigma_cur^{-k} x'') for the neighbours of the current vertex.
  int neighbour_value(int slot, const Curve& xt, int k) const;
  int argmin_neighbour(int slot, const Curve& xt, int& value) const;
  Vertex step(const Vertex& v, int k) const;
  void orient();
  std::vector<Vertex> projection_vertices(const Curve& x) const;

  Curve z_;
  Standardization st_;
  int u_ = 0;
  int v_ = 0;
  Curve y_[2];
  int eps1_ = 1;
};

}  // namespace sphereprobe

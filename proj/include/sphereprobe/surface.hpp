#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sphereprobe/free_group.hpp"

namespace sphereprobe {

// Planar model of the n-punctured sphere: punctures sit at the vertices of a
// convex polygon (positions 0..n-1 counterclockwise), the sphere is the plane
// plus a point at infinity. The ideal triangulation is the polygon sides plus
// a fan of diagonals from position 0 drawn once inside the polygon ("front")
// and once outside it ("back").
//
// Edge ids:  0..n-1          side k joins positions k and k+1 (mod n)
//            n..2n-4         front diagonal (0,k), k = 2..n-2
//            2n-3..3n-7      back diagonal (0,k),  k = 2..n-2
// Triangle ids: 0..n-3 front (0,k,k+1) for k = 1..n-2, then the back ones.
//
// A directed edge ("dedge") is 2*edge + dir; dir 0 crosses from the triangle
// on side 0 of the edge to the triangle on side 1. For polygon sides, side 0
// is the front. The dual graph of the triangulation is a trivalent fat graph
// and a spine of the surface; curves are stored as reduced cyclic paths in it.
class Surface {
 public:
  struct Edge {
    int u = 0;  // endpoint positions
    int v = 0;
    std::array<int, 2> triangle{};  // triangle on side 0 / side 1
  };

  struct Triangle {
    std::array<int, 3> sides{};    // counterclockwise
    std::array<int, 3> corners{};  // corners[i] is the vertex shared by sides[i], sides[i+1]
  };

  // puncture_cycle[k] is the label (1..n) of the puncture at position k.
  static std::shared_ptr<const Surface> build(int n, std::vector<int> puncture_cycle);

  static std::shared_ptr<const Surface> fig1();     // Σ0,5 with cycle (3,4,1,2,5)
  static std::shared_ptr<const Surface> sorted5();  // Σ0,5 with cycle (1,2,3,4,5)
  static std::shared_ptr<const Surface> sorted6();  // Σ0,6 with cycle (1,...,6)
  // "S0_5_FIG1" | "S0_5_SORTED" | "S0_6_SORTED"
  static std::shared_ptr<const Surface> by_name(const std::string& name);

  int punctures() const { return n_; }
  int complexity() const { return n_ - 3; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int triangle_count() const { return static_cast<int>(triangles_.size()); }
  const std::vector<int>& puncture_cycle() const { return cycle_; }
  int label_at(int position) const { return cycle_[position]; }
  int position_of(int label) const;
  const std::string& name() const { return name_; }

  const Edge& edge(int e) const { return edges_[e]; }
  const Triangle& triangle(int t) const { return triangles_[t]; }

  bool same_as(const Surface& other) const { return n_ == other.n_ && cycle_ == other.cycle_; }

  // Dual-graph navigation.
  static int dedge(int edge, int dir) { return 2 * edge + dir; }
  static int edge_of(int d) { return d >> 1; }
  static int reversed(int d) { return d ^ 1; }
  int tail(int d) const { return edges_[d >> 1].triangle[d & 1]; }
  int head(int d) const { return edges_[d >> 1].triangle[(d & 1) ^ 1]; }

  // +1 if (in, out, other) are counterclockwise around triangle t, else -1.
  int chirality(int t, int in_edge, int out_edge, int other_edge) const;

  // Free basis of π1 based at the front triangle touching side 0: letter k
  // (k = 1..n-1) crosses side k from front to back.
  int rank() const { return n_ - 1; }
  Word path_to_word(std::span<const int> path) const;
  // Reduced cyclic dual path of the conjugacy class of w.
  std::vector<int> word_to_path(std::span<const int> w) const;
  // Based loop around the puncture at `position`; loops are ordered so that
  // y_0 y_{n-1} ... y_1 = 1.
  Word puncture_loop(int position) const;

  // Normal coordinates of the peripheral curve around `position`.
  std::vector<int> link_coords(int position) const;

 private:
  Surface(int n, std::vector<int> cycle, std::string name);

  int side_edge(int a, int b) const;  // polygon side between adjacent positions
  int front_edge(int k) const;        // edge (0,k) on the front, k in 1..n-1
  int back_edge(int k) const;
  std::vector<int> tree_path(int from, int to) const;

  int n_;
  std::vector<int> cycle_;
  std::vector<int> position_;
  std::string name_;
  std::vector<Edge> edges_;
  std::vector<Triangle> triangles_;
  std::vector<std::vector<int>> generator_loops_;  // dual path of letter k, index k-1
};

using SurfacePtr = std::shared_ptr<const Surface>;

}  // namespace sphereprobe

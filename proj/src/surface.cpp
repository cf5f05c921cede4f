#include "sphereprobe/surface.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "sphereprobe/error.hpp"

namespace sphereprobe {

namespace {

std::string preset_name(int n, const std::vector<int>& cycle) {
  if (n == 5 && cycle == std::vector<int>{3, 4, 1, 2, 5}) return "S0_5_FIG1";
  if (n == 5 && cycle == std::vector<int>{1, 2, 3, 4, 5}) return "S0_5_SORTED";
  if (n == 6 && cycle == std::vector<int>{1, 2, 3, 4, 5, 6}) return "S0_6_SORTED";
  std::string s = "S0_" + std::to_string(n) + "_";
  for (int x : cycle) s += std::to_string(x);
  return s;
}

Word reduce_path(std::span<const int> path) {
  Word out;
  out.reserve(path.size());
  for (int d : path) {
    if (!out.empty() && out.back() == Surface::reversed(d)) {
      out.pop_back();
    } else {
      out.push_back(d);
    }
  }
  std::size_t lo = 0;
  std::size_t hi = out.size();
  while (hi - lo >= 2 && out[lo] == Surface::reversed(out[hi - 1])) {
    ++lo;
    --hi;
  }
  return Word(out.begin() + static_cast<std::ptrdiff_t>(lo), out.begin() + static_cast<std::ptrdiff_t>(hi));
}

}  // namespace

std::shared_ptr<const Surface> Surface::build(int n, std::vector<int> puncture_cycle) {
  if (n != 5 && n != 6) {
    throw Error(ErrorCode::InvalidArgument, "puncture count must be 5 or 6, got " + std::to_string(n));
  }
  if (static_cast<int>(puncture_cycle.size()) != n) {
    throw Error(ErrorCode::InvalidArgument, "puncture cycle must list " + std::to_string(n) + " labels");
  }
  std::vector<int> sorted = puncture_cycle;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < n; ++i) {
    if (sorted[i] != i + 1) throw Error(ErrorCode::InvalidArgument, "puncture cycle is not a permutation of 1..n");
  }
  std::string name = preset_name(n, puncture_cycle);
  return std::shared_ptr<const Surface>(new Surface(n, std::move(puncture_cycle), std::move(name)));
}

std::shared_ptr<const Surface> Surface::fig1() {
  static const auto s = build(5, {3, 4, 1, 2, 5});
  return s;
}

std::shared_ptr<const Surface> Surface::sorted5() {
  static const auto s = build(5, {1, 2, 3, 4, 5});
  return s;
}

std::shared_ptr<const Surface> Surface::sorted6() {
  static const auto s = build(6, {1, 2, 3, 4, 5, 6});
  return s;
}

std::shared_ptr<const Surface> Surface::by_name(const std::string& name) {
  if (name == "S0_5_FIG1" || name == "s05-fig1") return fig1();
  if (name == "S0_5_SORTED" || name == "s05-sorted") return sorted5();
  if (name == "S0_6_SORTED" || name == "s06") return sorted6();
  throw Error(ErrorCode::InvalidArgument, "unknown surface '" + name + "'");
}

Surface::Surface(int n, std::vector<int> cycle, std::string name)
    : n_(n), cycle_(std::move(cycle)), position_(n + 1, -1), name_(std::move(name)) {
  for (int k = 0; k < n_; ++k) position_[cycle_[k]] = k;

  const int edge_count = 3 * (n_ - 2);
  edges_.resize(edge_count);
  for (int k = 0; k < n_; ++k) {
    edges_[k].u = k;
    edges_[k].v = (k + 1) % n_;
  }
  for (int k = 2; k <= n_ - 2; ++k) {
    edges_[front_edge(k)].u = 0;
    edges_[front_edge(k)].v = k;
    edges_[back_edge(k)].u = 0;
    edges_[back_edge(k)].v = k;
  }

  const int half = n_ - 2;
  triangles_.resize(2 * half);
  for (int k = 1; k <= n_ - 2; ++k) {
    Triangle& f = triangles_[k - 1];
    f.sides = {front_edge(k), side_edge(k, k + 1), front_edge(k + 1)};
    f.corners = {k, k + 1, 0};
    Triangle& b = triangles_[half + k - 1];
    b.sides = {side_edge(k, k + 1), back_edge(k), back_edge(k + 1)};
    b.corners = {k, 0, k + 1};
  }

  // Side assignment: polygon sides have the front on side 0; a diagonal (0,k)
  // has the triangle (0,k-1,k) on side 0.
  for (int t = 0; t < triangle_count(); ++t) {
    const bool front = t < half;
    const int k = (front ? t : t - half) + 1;  // triangle (0,k,k+1)
    for (int e : triangles_[t].sides) {
      if (e < n_) {
        edges_[e].triangle[front ? 0 : 1] = t;
      } else {
        const int dk = edges_[e].v;
        edges_[e].triangle[dk == k + 1 ? 0 : 1] = t;
      }
    }
  }

  generator_loops_.resize(n_ - 1);
  for (int k = 1; k <= n_ - 1; ++k) {
    const Edge& s = edges_[k];
    std::vector<int> loop = tree_path(0, s.triangle[0]);
    loop.push_back(dedge(k, 0));
    std::vector<int> back = tree_path(s.triangle[1], 0);
    loop.insert(loop.end(), back.begin(), back.end());
    generator_loops_[k - 1] = std::move(loop);
  }
}

int Surface::position_of(int label) const {
  if (label < 1 || label > n_) throw Error(ErrorCode::InvalidArgument, "puncture label out of range: " + std::to_string(label));
  return position_[label];
}

int Surface::side_edge(int a, int b) const {
  if ((a + 1) % n_ == b) return a;
  return b;
}

int Surface::front_edge(int k) const {
  if (k == 1) return 0;
  if (k == n_ - 1) return n_ - 1;
  return n_ + (k - 2);
}

int Surface::back_edge(int k) const {
  if (k == 1) return 0;
  if (k == n_ - 1) return n_ - 1;
  return n_ + (n_ - 3) + (k - 2);
}

std::vector<int> Surface::tree_path(int from, int to) const {
  // Spanning tree of the dual graph: every diagonal plus side 0.
  auto in_tree = [&](int e) { return e == 0 || e >= n_; };
  std::vector<int> via(triangle_count(), -1);
  std::vector<bool> seen(triangle_count(), false);
  std::deque<int> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    int t = queue.front();
    queue.pop_front();
    for (int e : triangles_[t].sides) {
      if (!in_tree(e)) continue;
      int d = edges_[e].triangle[0] == t ? dedge(e, 0) : dedge(e, 1);
      int nt = head(d);
      if (!seen[nt]) {
        seen[nt] = true;
        via[nt] = d;
        queue.push_back(nt);
      }
    }
  }
  std::vector<int> path;
  for (int t = to; t != from; t = tail(via[t])) path.push_back(via[t]);
  std::reverse(path.begin(), path.end());
  return path;
}

int Surface::chirality(int t, int in_edge, int out_edge, int other_edge) const {
  const auto& s = triangles_[t].sides;
  int i = static_cast<int>(std::find(s.begin(), s.end(), in_edge) - s.begin());
  int o = static_cast<int>(std::find(s.begin(), s.end(), out_edge) - s.begin());
  (void)other_edge;
  return o == (i + 1) % 3 ? 1 : -1;
}

Word Surface::path_to_word(std::span<const int> path) const {
  Word w;
  for (int d : path) {
    int e = edge_of(d);
    if (e >= 1 && e < n_) w.push_back((d & 1) == 0 ? e : -e);
  }
  return w;
}

std::vector<int> Surface::word_to_path(std::span<const int> w) const {
  std::vector<int> raw;
  for (int x : w) {
    const auto& loop = generator_loops_[std::abs(x) - 1];
    if (x > 0) {
      raw.insert(raw.end(), loop.begin(), loop.end());
    } else {
      for (auto it = loop.rbegin(); it != loop.rend(); ++it) raw.push_back(reversed(*it));
    }
  }
  return reduce_path(raw);
}

Word Surface::puncture_loop(int position) const {
  if (position == 0) return {-(n_ - 1)};
  if (position == 1) return {1};
  return {position, -(position - 1)};
}

std::vector<int> Surface::link_coords(int position) const {
  std::vector<int> c(edges_.size(), 0);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edges_[e].u == position || edges_[e].v == position) c[e] = 1;
  }
  return c;
}

}  // namespace sphereprobe

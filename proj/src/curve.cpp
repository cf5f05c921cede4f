#include "sphereprobe/curve.hpp"

#include <algorithm>
#include <numeric>

#include "sphereprobe/error.hpp"

namespace sphereprobe {

namespace {

// Index (from endpoint u) of the point that sits `rank` places away from
// vertex `corner` on edge e carrying w points.
int index_from_corner(const Surface::Edge& e, int corner, int rank, int w) {
  return e.u == corner ? rank : w - 1 - rank;
}

void check_triangles(const Surface& s, const std::vector<int>& w) {
  for (int t = 0; t < s.triangle_count(); ++t) {
    const auto& sd = s.triangle(t).sides;
    int x = w[sd[0]], y = w[sd[1]], z = w[sd[2]];
    if ((x + y + z) % 2 != 0) {
      throw Error(ErrorCode::Parity, "odd coordinate sum around triangle " + std::to_string(t));
    }
    if (x > y + z || y > x + z || z > x + y) {
      throw Error(ErrorCode::TriangleInequality, "triangle inequality fails in triangle " + std::to_string(t));
    }
  }
}

}  // namespace

std::vector<std::vector<int>> trace_components(const Surface& s, const std::vector<int>& w) {
  if (static_cast<int>(w.size()) != s.edge_count()) {
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(s.edge_count()) + " coordinates");
  }
  for (int x : w) {
    if (x < 0) throw Error(ErrorCode::InvalidArgument, "negative coordinate");
  }
  check_triangles(s, w);

  std::vector<int> offset(w.size() + 1, 0);
  for (std::size_t e = 0; e < w.size(); ++e) offset[e + 1] = offset[e] + w[e];
  std::vector<char> seen(offset.back(), 0);

  // Exit point of the arc through (e, idx) inside triangle t.
  auto step = [&](int t, int e, int idx, int& out_e, int& out_idx) {
    const auto& tri = s.triangle(t);
    int i = 0;
    while (tri.sides[i] != e) ++i;
    const int next = tri.sides[(i + 1) % 3];
    const int prev = tri.sides[(i + 2) % 3];
    const int corner_next = tri.corners[i];
    const int corner_prev = tri.corners[(i + 2) % 3];
    const int c_next = (w[e] + w[next] - w[prev]) / 2;
    const int r = s.edge(e).u == corner_next ? idx : w[e] - 1 - idx;
    if (r < c_next) {
      out_e = next;
      out_idx = index_from_corner(s.edge(next), corner_next, r, w[next]);
    } else {
      const int r2 = w[e] - 1 - r;
      out_e = prev;
      out_idx = index_from_corner(s.edge(prev), corner_prev, r2, w[prev]);
    }
  };

  std::vector<std::vector<int>> comps;
  for (int e0 = 0; e0 < s.edge_count(); ++e0) {
    for (int i0 = 0; i0 < w[e0]; ++i0) {
      if (seen[offset[e0] + i0]) continue;
      std::vector<int> path;
      int d = Surface::dedge(e0, 0);
      int e = e0, idx = i0;
      do {
        seen[offset[e] + idx] = 1;
        path.push_back(d);
        const int t = s.head(d);
        int ne = 0, ni = 0;
        step(t, e, idx, ne, ni);
        d = Surface::dedge(ne, s.edge(ne).triangle[0] == t ? 0 : 1);
        e = ne;
        idx = ni;
      } while (!(e == e0 && idx == i0));
      comps.push_back(std::move(path));
    }
  }
  return comps;
}

std::vector<int> path_coords(const Surface& s, std::span<const int> path) {
  std::vector<int> c(s.edge_count(), 0);
  for (int d : path) ++c[Surface::edge_of(d)];
  return c;
}

Curve Curve::from_coords(SurfacePtr s, std::vector<int> coords) {
  if (!s) throw Error(ErrorCode::InvalidArgument, "null surface");
  if (std::all_of(coords.begin(), coords.end(), [](int x) { return x == 0; }) &&
      static_cast<int>(coords.size()) == s->edge_count()) {
    throw Error(ErrorCode::Empty, "all coordinates are zero");
  }
  auto comps = trace_components(*s, coords);
  if (comps.empty()) throw Error(ErrorCode::Empty, "all coordinates are zero");
  if (comps.size() > 1) {
    throw Error(ErrorCode::Disconnected, "coordinates trace " + std::to_string(comps.size()) + " components");
  }
  for (int p = 0; p < s->punctures(); ++p) {
    if (coords == s->link_coords(p)) {
      throw Error(ErrorCode::Peripheral, "curve encircles the single puncture " + std::to_string(s->label_at(p)));
    }
  }
  Curve c;
  c.surface_ = std::move(s);
  c.coords_ = std::move(coords);
  c.path_ = std::move(comps.front());
  c.finish();
  return c;
}

Curve Curve::from_word(SurfacePtr s, std::span<const int> w) {
  auto path = s->word_to_path(cyclic_reduce(w));
  if (path.empty()) throw Error(ErrorCode::Empty, "trivial conjugacy class");
  Curve c;
  c.coords_ = path_coords(*s, path);
  c.surface_ = std::move(s);
  c.path_ = std::move(path);
  c.finish();
  return c;
}

void Curve::finish() {
  const int n = surface_->punctures();
  std::vector<long long> e(n, 0);
  for (int x : word()) e[std::abs(x)] += x > 0 ? 1 : -1;
  std::vector<int> in, out;
  long long tail = 0;
  for (int m = n - 1; m >= 1; --m) {
    tail += e[m];
    (tail != 0 ? in : out).push_back(surface_->label_at(m));
  }
  out.push_back(surface_->label_at(0));
  if (in.size() < 2 || out.size() < 2) {
    throw Error(ErrorCode::AuditFailure, "curve does not separate the punctures into two essential sides");
  }
  std::sort(in.begin(), in.end());
  std::sort(out.begin(), out.end());
  if (in.size() > out.size() || (in.size() == out.size() && out.front() < in.front())) std::swap(in, out);
  side_ = std::move(in);
  other_ = std::move(out);
}

int Curve::weight() const { return std::accumulate(coords_.begin(), coords_.end(), 0); }

Curve Curve::named(std::string n) const {
  Curve c = *this;
  c.name_ = std::move(n);
  return c;
}

bool Curve::operator<(const Curve& o) const {
  int wa = weight(), wb = o.weight();
  if (wa != wb) return wa < wb;
  return coords_ < o.coords_;
}

nlohmann::json Curve::to_json() const {
  nlohmann::json j;
  j["surface"] = surface_->name();
  j["coords"] = coords_;
  if (!name_.empty()) j["name"] = name_;
  return j;
}

Curve Curve::from_json(const nlohmann::json& j) {
  auto s = Surface::by_name(j.at("surface").get<std::string>());
  Curve c = from_coords(s, j.at("coords").get<std::vector<int>>());
  if (j.contains("name")) c.name_ = j.at("name").get<std::string>();
  return c;
}

std::size_t CurveHash::operator()(const Curve& c) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (int x : c.coords()) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
  return h;
}

Curve standard_curve(const SurfacePtr& s, int p, int q) {
  if (p == q) throw Error(ErrorCode::InvalidArgument, "standard curve needs two distinct punctures");
  int i = s->position_of(p);
  int j = s->position_of(q);
  if (i > j) std::swap(i, j);
  std::vector<int> c(s->edge_count(), 0);
  for (int e = 0; e < s->edge_count(); ++e) {
    const auto& ed = s->edge(e);
    const bool front_diag = e >= s->punctures() && e < 2 * s->punctures() - 3;
    const bool is_chord = ((ed.u == i && ed.v == j) || (ed.u == j && ed.v == i)) && (e < s->punctures() || front_diag);
    if (is_chord) continue;
    int v = (ed.u == i || ed.v == i) + (ed.u == j || ed.v == j);
    if (front_diag && i > 0 && ed.v > i && ed.v < j) v += 2;
    c[e] = v;
  }
  auto out = Curve::from_coords(s, std::move(c));
  std::string name = "P" + std::to_string(std::min(p, q)) + std::to_string(std::max(p, q));
  return out.named(name);
}

Curve block_curve(const SurfacePtr& s, int m, int k) {
  const int n = s->punctures();
  if (k < 2 || k > n - 2) throw Error(ErrorCode::InvalidArgument, "block size out of range");
  if (k == 2) return standard_curve(s, s->label_at(m % n), s->label_at((m + 1) % n));
  Word w;
  for (int t = k - 1; t >= 0; --t) {
    Word y = s->puncture_loop((m + t) % n);
    w.insert(w.end(), y.begin(), y.end());
  }
  return Curve::from_word(s, w);
}

void require_same_surface(const Curve& a, const Curve& b) {
  if (!a.surface() || !b.surface() || !a.surface()->same_as(*b.surface())) {
    throw Error(ErrorCode::MismatchedSurface, "curves live on different surfaces");
  }
}

int intersection(const Curve& a, const Curve& b) {
  require_same_surface(a, b);
  if (a == b) return 0;
  const Surface& s = *a.surface();
  const auto& A = a.path();
  const int la = static_cast<int>(A.size());
  const int lb = b.length();
  const int cap = la + lb;
  std::vector<std::vector<int>> where(2 * s.edge_count());
  int total = 0;
  for (int orient = 0; orient < 2; ++orient) {
    std::vector<int> B = b.path();
    if (orient == 1) {
      std::reverse(B.begin(), B.end());
      for (int& d : B) d = Surface::reversed(d);
    }
    for (auto& v : where) v.clear();
    for (int j = 0; j < lb; ++j) where[B[j]].push_back(j);
    for (int i = 0; i < la; ++i) {
      const int a_prev = A[(i + la - 1) % la];
      for (int j : where[A[i]]) {
        if (a_prev == B[(j + lb - 1) % lb]) continue;
        int e = 0;
        while (e < cap && A[(i + e + 1) % la] == B[(j + e + 1) % lb]) ++e;
        if (e >= cap) continue;  // parallel lifts: same underlying curve
        const int v = s.tail(A[i]);
        const int start = s.chirality(v, Surface::edge_of(a_prev), Surface::edge_of(A[i]), Surface::edge_of(B[(j + lb - 1) % lb]));
        const int last = A[(i + e) % la];
        const int nxt = A[(i + e + 1) % la];
        const int wv = s.head(last);
        const int end = s.chirality(wv, Surface::edge_of(last), Surface::edge_of(nxt), Surface::edge_of(B[(j + e + 1) % lb]));
        if (start != end) ++total;
      }
    }
  }
  return total;
}

bool disjoint_by_sum(const Curve& a, const Curve& b) {
  require_same_surface(a, b);
  std::vector<int> sum = a.coords();
  for (std::size_t e = 0; e < sum.size(); ++e) sum[e] += b.coords()[e];
  auto comps = trace_components(*a.surface(), sum);
  if (comps.size() != 2) return false;
  auto c0 = path_coords(*a.surface(), comps[0]);
  auto c1 = path_coords(*a.surface(), comps[1]);
  return (c0 == a.coords() && c1 == b.coords()) || (c0 == b.coords() && c1 == a.coords());
}

std::pair<std::vector<int>, std::vector<int>> puncture_partition(const Curve& a) {
  return {a.pants_side(), a.other_side()};
}

}  // namespace sphereprobe

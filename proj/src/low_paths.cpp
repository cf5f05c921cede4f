#include "sphereprobe/low_paths.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <random>

#include "sphereprobe/error.hpp"

namespace sphereprobe {

namespace {

// Shortest census path from s to t through vertices accepted by `allowed`
// (the endpoints are always accepted). Empty when none exists.
std::vector<int> bfs_path(const SphereCensus& census, int s, int t, const std::function<bool(int)>& allowed) {
  if (s == t) return {s};
  std::vector<int> parent(census.size(), -2);
  std::deque<int> q{s};
  parent[s] = -1;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int v : census.neighbours(u)) {
      if (parent[v] != -2) continue;
      if (v != t && !allowed(v)) continue;
      parent[v] = u;
      if (v == t) {
        std::vector<int> out;
        for (int x = t; x != -1; x = parent[x]) out.push_back(x);
        std::reverse(out.begin(), out.end());
        return out;
      }
      q.push_back(v);
    }
  }
  return {};
}

// Census distances from s by breadth-first search, up to `radius`.
std::vector<int> census_ball(const SphereCensus& census, int s, int radius) {
  std::vector<int> d(census.size(), -1);
  std::deque<int> q{s};
  d[s] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    if (d[u] == radius) continue;
    for (int v : census.neighbours(u)) {
      if (d[v] >= 0) continue;
      d[v] = d[u] + 1;
      q.push_back(v);
    }
  }
  return d;
}

// Pentagons (u, a2, w, a4, a5) on a census edge u-w, as (a2, a4, a5).
std::vector<std::array<int, 3>> pentagons_on_edge(const SphereCensus& census, int u, int w) {
  std::vector<std::array<int, 3>> out;
  const Curve& cu = census.curve(u);
  const Curve& cw = census.curve(w);
  for (int a4 : census.neighbours(u)) {
    if (intersection(census.curve(a4), cw) != 2) continue;
    for (int a5 : census.neighbours(w)) {
      if (intersection(census.curve(a5), cu) != 2 || intersection(census.curve(a5), census.curve(a4)) != 2) continue;
      for (int a2 : census.neighbours(a4)) {
        const auto& n5 = census.neighbours(a5);
        if (!std::binary_search(n5.begin(), n5.end(), a2)) continue;
        std::array<Curve, 5> p{cu, census.curve(a2), cw, census.curve(a4), census.curve(a5)};
        if (is_pentagon(p)) out.push_back({a2, a4, a5});
      }
    }
  }
  return out;
}

int require_index(const SphereCensus& census, const Curve& x, const char* what) {
  int i = census.index_of(x);
  if (i < 0) throw Error(ErrorCode::Precondition, std::string(what) + " is not a census curve");
  return i;
}

std::vector<Curve> drop_loops(const std::vector<Curve>& in) {
  std::vector<Curve> out;
  for (const Curve& v : in) {
    auto it = std::find(out.begin(), out.end(), v);
    if (it != out.end()) {
      out.erase(it + 1, out.end());
    } else {
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace

PathContext::PathContext(const SphereCensus& census, LowPathConfig cfg) : census_(census), cfg_(cfg) {
  cfg_.projection.validate();
}

DistanceCertificate PathContext::to_center(const Curve& x) {
  auto it = center_cache_.find(x.coords());
  if (it != center_cache_.end()) return it->second;
  const int i = census_.index_of(x);
  DistanceCertificate c = i >= 0 ? census_.certificate(i) : distance(center(), x, cfg_.distance, &census_);
  center_cache_.emplace(x.coords(), c);
  return c;
}

void PathContext::offer_path(const std::vector<Curve>& path) {
  if (path.empty() || path.front() != center()) throw Error(ErrorCode::Precondition, "witness must start at the center");
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    if (!adjacent(path[k], path[k + 1])) throw Error(ErrorCode::AuditFailure, "offered witness has a non-edge");
  }
  const int len = static_cast<int>(path.size()) - 1;
  DistanceCertificate c = to_center(path.back());
  if (c.hi >= 0 && c.hi <= len) return;
  if (len < c.lo) {
    if (c.evidence != Evidence::Exhaustion) throw Error(ErrorCode::AuditFailure, "witness beats a proven lower bound");
    // A semi-certified bound was wrong: fall back to what is proven.
    const bool five = center().surface()->punctures() == 5;
    c.lo = five ? 3 : 2;
    c.evidence = five ? Evidence::Filling : Evidence::Intersecting;
    c.exhaustion_bound = 0;
  }
  c.hi = len;
  c.witness = path;
  center_cache_[path.back().coords()] = c;
}

const SphereCensus& PathContext::centred_at(const Curve& p) {
  auto it = pivots_.find(p.coords());
  if (it != pivots_.end()) return *it->second;
  auto sc = std::make_unique<SphereCensus>(census_.index_of(p) >= 0 ? census_.recentred(p)
                                                                   : SphereCensus::build(p, census_.config()));
  const SphereCensus& ref = *sc;
  pivots_.emplace(p.coords(), std::move(sc));
  return ref;
}

DistanceCertificate PathContext::between(const Curve& p, const Curve& x) {
  const SphereCensus& pc = centred_at(p);
  const int i = pc.index_of(x);
  if (i >= 0) return pc.certificate(i);
  return distance(p, x, cfg_.distance, &pc);
}

int PathContext::layer(const Curve& x) {
  auto c = to_center(x);
  return c.exact() ? c.hi : -1;
}

nlohmann::json PathNote::to_json() const {
  nlohmann::json j;
  j["to_center"] = {{"lo", center.lo}, {"hi", center.hi}, {"evidence", sphereprobe::to_string(center.evidence)}};
  if (pivot) j["to_pivot"] = {{"lo", pivot->lo}, {"hi", pivot->hi}, {"evidence", sphereprobe::to_string(pivot->evidence)}};
  return j;
}

bool AnnotatedPath::is_path() const {
  for (std::size_t k = 0; k + 1 < vertices.size(); ++k) {
    if (!adjacent(vertices[k], vertices[k + 1])) return false;
  }
  return !vertices.empty();
}

nlohmann::json AnnotatedPath::to_json() const {
  nlohmann::json j;
  j["length"] = vertices.empty() ? 0 : static_cast<int>(vertices.size()) - 1;
  j["twist_power"] = twist_power;
  if (pivot) j["pivot"] = pivot->coords();
  j["vertices"] = nlohmann::json::array();
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    nlohmann::json v = notes.size() > k ? notes[k].to_json() : nlohmann::json::object();
    v["coords"] = vertices[k].coords();
    j["vertices"].push_back(v);
  }
  return j;
}

AnnotatedPath annotate(PathContext& ctx, std::vector<Curve> vertices, const std::optional<Curve>& pivot) {
  AnnotatedPath p;
  p.vertices = std::move(vertices);
  p.pivot = pivot;
  for (const Curve& v : p.vertices) {
    PathNote n;
    n.center = ctx.to_center(v);
    if (pivot) n.pivot = ctx.between(*pivot, v);
    p.notes.push_back(n);
  }
  if (!p.is_path()) throw Error(ErrorCode::AuditFailure, "constructed path has a non-edge");
  return p;
}

nlohmann::json PrelimAudit::to_json() const {
  return {{"within_three", within_three}, {"far_vertices_near", far_vertices_near}, {"adjacent_ones_up", adjacent_ones_up}};
}

AnnotatedPath detour_off_S1(PathContext& ctx, const Curve& x_prev, const Curve& x_mid, const Curve& x_next,
                            const Curve& a) {
  if (!adjacent(x_prev, x_mid) || !adjacent(x_mid, x_next)) throw Error(ErrorCode::Precondition, "detour needs a path through x_mid");
  if (!adjacent(x_mid, a)) throw Error(ErrorCode::Precondition, "x_mid must be adjacent to a");
  if (x_prev == x_next) return annotate(ctx, {x_prev}, a);
  const SphereCensus& census = ctx.census();
  const int s = require_index(census, x_prev, "x_prev");
  const int t = require_index(census, x_next, "x_next");
  const SphereCensus& mid = ctx.centred_at(x_mid);
  auto allowed = [&](int v) {
    const Curve& cv = census.curve(v);
    if (cv == a || intersection(cv, a) == 0) return false;
    const int m = mid.index_of(cv);
    return m >= 0 && mid.layer(m) >= 0 && mid.layer(m) <= 2;
  };
  if (!allowed(s) || !allowed(t)) throw Error(ErrorCode::Precondition, "detour endpoints must miss S_1(a)");
  auto idx = bfs_path(census, s, t, allowed);
  if (idx.empty()) {
    throw Error(ErrorCode::NotFoundUnderCap, "no detour off S_1(a) within census cap " + std::to_string(census.cap()));
  }
  std::vector<Curve> out;
  for (int i : idx) out.push_back(census.curve(i));
  return annotate(ctx, out, a);
}

AnnotatedPath preliminary_path(PathContext& ctx, const Curve& a, const Curve& b, const Curve& b2) {
  const SphereCensus& census = ctx.census();
  const int r = ctx.layer(a);
  if (r < 1) throw Error(ErrorCode::Precondition, "a needs a certified layer r >= 1");
  if (ctx.layer(b) != r + 1 || ctx.layer(b2) != r + 1) throw Error(ErrorCode::Precondition, "b and b' must lie in S_{r+1}");
  if (!adjacent(a, b) || !adjacent(a, b2)) throw Error(ErrorCode::Precondition, "b and b' must be adjacent to a");
  if (b == b2) return annotate(ctx, {b}, a);
  const SphereCensus& pa = ctx.centred_at(a);
  auto da = [&](int v) {
    const int i = pa.index_of(census.curve(v));
    return i >= 0 ? pa.layer(i) : -1;
  };
  auto allowed = [&](int v) {
    const int d = da(v);
    if (d == 2) return true;
    return d == 1 && census.layer(v) >= 0;
  };
  auto idx = bfs_path(census, require_index(census, b, "b"), require_index(census, b2, "b'"), allowed);
  if (idx.empty()) {
    throw Error(ErrorCode::NotFoundUnderCap, "S_1(a) + S_2(a) path not found within census cap " + std::to_string(census.cap()));
  }
  std::vector<Curve> out{census.curve(idx[0])};
  for (std::size_t j = 1; j < idx.size(); ++j) {
    const int v = idx[j];
    const bool low = j + 1 < idx.size() && da(v) == 1 && (census.layer(v) == r - 1 || census.layer(v) == r);
    if (!low) {
      out.push_back(census.curve(v));
      continue;
    }
    auto det = detour_off_S1(ctx, census.curve(idx[j - 1]), census.curve(v), census.curve(idx[j + 1]), a);
    // The detour runs from x_{j-1} to x_{j+1}; x_{j+1} is appended next.
    for (std::size_t k = 1; k + 1 < det.vertices.size(); ++k) out.push_back(det.vertices[k]);
  }
  return annotate(ctx, drop_loops(out), a);
}

PrelimAudit audit_preliminary(PathContext& ctx, const Curve& a, const AnnotatedPath& path) {
  PrelimAudit au;
  const SphereCensus& census = ctx.census();
  const int r = ctx.layer(a);
  // (S_{r-1} + S_r) ∩ S_1(a) within the census.
  std::vector<Curve> low;
  for (int v = 0; v < census.size(); ++v) {
    const int l = census.layer(v);
    if ((l == r - 1 || l == r) && adjacent(census.curve(v), a)) low.push_back(census.curve(v));
  }
  for (const Curve& v : path.vertices) {
    auto d = ctx.between(a, v);
    if (!(d.lo >= 1 && d.hi >= 0 && d.hi <= 3)) au.within_three = false;
    if (d.exact() && d.hi == 1 && ctx.layer(v) != r + 1) au.adjacent_ones_up = false;
    if (d.exact() && d.hi == 3) {
      bool near = false;
      for (const Curve& z : low) {
        auto dz = ctx.between(z, v);
        if (dz.hi >= 0 && dz.hi <= 2) {
          near = true;
          break;
        }
      }
      if (!near) au.far_vertices_near = false;
    }
  }
  return au;
}

nlohmann::json PushUpAudit::to_json() const {
  return {{"property", property}, {"exact", exact}, {"stable", stable}, {"semi_certified", semi_certified},
          {"failures", failures}, {"ok", ok()}};
}

namespace {

// Upper bounds for d(c, T(v)) through vertices fixed by the twist:
// d(c, T v) <= d(c, z) + d(z, v) for z in B_1(a).
void offer_through_pivot(PathContext& ctx, const Curve& a, const MappingClassWord& T, const Curve& v) {
  const SphereCensus& census = ctx.census();
  const int ia = census.index_of(a);
  std::vector<Curve> fixed{a};
  if (ia >= 0) {
    for (int z : census.neighbours(ia)) fixed.push_back(census.curve(z));
  }
  const Curve tv = T.apply(v);
  for (const Curve& z : fixed) {
    auto cz = ctx.to_center(z);
    if (!cz.exact()) continue;
    auto cur = ctx.to_center(tv);
    auto dz = distance(z, v, ctx.config().distance, &census);
    if (dz.hi < 0) continue;
    if (cur.hi >= 0 && cz.hi + dz.hi >= cur.hi) continue;
    std::vector<Curve> path = cz.witness;
    for (std::size_t k = 1; k < dz.witness.size(); ++k) path.push_back(T.apply(dz.witness[k]));
    ctx.offer_path(path);
  }
}

struct Twisted {
  std::vector<Curve> x;  // twisted
  std::vector<Curve> y;  // census sources
};

}  // namespace

PushUp push_up(PathContext& ctx, const Curve& a, const AnnotatedPath& prelim) {
  const SphereCensus& census = ctx.census();
  const Curve& c = ctx.center();
  const int r = ctx.layer(a);
  if (r < 1) throw Error(ErrorCode::Precondition, "a needs a certified layer r >= 1");
  if (!prelim.is_path()) throw Error(ErrorCode::Precondition, "preliminary path is not a path");
  PushUp out;
  out.source = prelim.vertices;
  // With r = 1 the center misses the annulus of a and no twisting is needed.
  const bool center_cuts = c != a && intersection(a, c) > 0;
  for (const Curve& y : prelim.vertices) {
    if (y == a || intersection(y, a) == 0 || !center_cuts) continue;
    out.N = std::max(out.N, twist_threshold(a, y, c, ctx.config().projection));
  }
  const MappingClassWord T = out.N > 0 ? dehn_twist_word(a, out.N) : MappingClassWord(a.surface());
  std::vector<Curve> xs;
  for (const Curve& y : prelim.vertices) {
    const bool moved = intersection(y, a) > 0;
    xs.push_back(moved ? T.apply(y) : y);
    if (moved) offer_through_pivot(ctx, a, T, y);
  }
  out.path = annotate(ctx, xs, a);
  out.path.twist_power = out.N;

  auto& au = out.audit;
  const VertexFlags fa = vertex_flags(census, a);
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    const Curve& x = xs[i];
    const auto& pc = out.path.notes[i].center;
    const auto& pa = *out.path.notes[i].pivot;
    const std::string tag = "vertex " + std::to_string(i) + ": ";
    if (!(pa.lo >= 1 && pa.hi >= 0 && pa.hi <= 3)) {
      au.property[0] = false;
      au.failures.push_back(tag + "distance to a outside [1,3]");
    }
    if (!(pc.lo >= r && pc.hi >= 0 && pc.hi <= r + 2)) {
      au.property[1] = false;
      au.failures.push_back(tag + "distance to c outside [r, r+2]");
    }
    if (!pc.exact()) au.exact = false;
    if (pc.evidence == Evidence::Exhaustion) {
      ++au.semi_certified;
      DistanceConfig doubled = ctx.config().distance;
      doubled.witness_bound *= 2;
      auto again = distance(c, x, doubled, &census);
      if (again.lo != pc.lo || (again.hi >= 0 && again.hi < pc.lo)) au.stable = false;
    }
    if (!(pc.exact() && pc.hi == r)) continue;
    // (3): unique common neighbour with a, one layer down, the only backtrack.
    bool p3 = pa.exact() && pa.hi == 2;
    Curve z;
    if (p3) {
      auto d = census.frame(a).descend(x);
      p3 = d.value == 0;
      z = d.minimiser;
    }
    std::vector<Curve> backtracks;
    std::vector<Curve> sidesteps;
    for (int v = 0; v < census.size(); ++v) {
      const Curve& cv = census.curve(v);
      if (cv == x || intersection(cv, x) != 0) continue;
      if (census.layer(v) == r - 1) backtracks.push_back(cv);
      if (census.layer(v) == r) sidesteps.push_back(cv);
    }
    if (p3) p3 = ctx.layer(z) == r - 1 && backtracks.size() == 1 && backtracks[0] == z;
    if (!p3) {
      au.property[2] = false;
      au.failures.push_back(tag + "no unique backtrack shared with a");
    }
    if (fa.unique_backtracking && !sidesteps.empty()) {
      au.property[3] = false;
      au.failures.push_back(tag + "sidestep found in census");
    }
  }
  return out;
}

nlohmann::json AboveAudit::to_json() const {
  return {{"layers_ok", layers_ok}, {"ball_ok", ball_ok}, {"ball", ball}, {"failures", failures}, {"ok", ok()}};
}

namespace {

class Lifter {
 public:
  Lifter(PathContext& ctx, const Curve& a, int N, int r, int ball)
      : ctx_(ctx), a_(a), r_(r), ball_(ball),
        T_(N > 0 ? dehn_twist_word(a, N) : MappingClassWord(a.surface())) {}

  Curve lift(const Curve& v) const { return intersection(v, a_) > 0 ? T_.apply(v) : v; }

  // T(v) certified in S_{r+1} + S_{r+2} and v within the ball about a.
  bool upper(int idx) {
    auto it = memo_.find(idx);
    if (it != memo_.end()) return it->second;
    const Curve& v = ctx_.census().curve(idx);
    bool ok = false;
    auto pa = ctx_.between(a_, v);
    if (pa.hi >= 0 && pa.hi <= ball_) {
      const Curve tv = lift(v);
      auto c = ctx_.to_center(tv);
      if (c.lo >= r_ + 1 && (c.hi < 0 || c.hi > r_ + 2) && intersection(v, a_) > 0) {
        offer_through_pivot(ctx_, a_, T_, v);
        c = ctx_.to_center(tv);
      }
      ok = c.lo >= r_ + 1 && c.hi >= 0 && c.hi <= r_ + 2;
    }
    memo_.emplace(idx, ok);
    return ok;
  }

  const MappingClassWord& twist() const { return T_; }

 private:
  PathContext& ctx_;
  Curve a_;
  int r_;
  int ball_;
  MappingClassWord T_;
  std::map<int, bool> memo_;
};

AboveAudit audit_above(PathContext& ctx, const AnnotatedPath& p, int r, int ball) {
  AboveAudit au;
  au.ball = ball;
  for (std::size_t i = 0; i < p.vertices.size(); ++i) {
    const auto& n = p.notes[i];
    if (!(n.center.lo >= r + 1 && n.center.hi >= 0 && n.center.hi <= r + 2)) {
      au.layers_ok = false;
      au.failures.push_back("vertex " + std::to_string(i) + " not certified in S_{r+1} + S_{r+2}");
    }
    if (!(n.pivot && n.pivot->hi >= 0 && n.pivot->hi <= ball)) {
      au.ball_ok = false;
      au.failures.push_back("vertex " + std::to_string(i) + " outside the ball");
    }
  }
  (void)ctx;
  return au;
}

// Replaces S_r vertices of a pushed-up path. Pentagons handle adjacent S_r
// pairs; single S_r vertices get a census detour around their source.
AbovePath lift_above(PathContext& ctx, const Curve& a, const Curve& b, const Curve& b2, int ball, bool pentagons) {
  const SphereCensus& census = ctx.census();
  const int r = ctx.layer(a);
  if (r < 1) throw Error(ErrorCode::Precondition, "a needs a certified layer r >= 1");
  AnnotatedPath prelim = preliminary_path(ctx, a, b, b2);
  PushUp pu = push_up(ctx, a, prelim);
  Lifter lifter(ctx, a, pu.N, r, ball);
  std::vector<Curve> xs = pu.path.vertices;
  std::vector<Curve> ys = pu.source;
  auto low = [&](const Curve& x) { return ctx.layer(x) == r; };

  if (pentagons) {
    std::vector<Curve> nx{xs[0]}, ny{ys[0]};
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (low(xs[i - 1]) && low(xs[i])) {
        const int u = require_index(census, ys[i - 1], "source vertex");
        const int w = require_index(census, ys[i], "source vertex");
        bool done = false;
        for (const auto& pent : pentagons_on_edge(census, u, w)) {
          const int a2 = pent[0], a4 = pent[1], a5 = pent[2];
          if (!lifter.upper(a4) || !lifter.upper(a2) || !lifter.upper(a5)) continue;
          for (int k : {a4, a2, a5}) {
            nx.push_back(lifter.lift(census.curve(k)));
            ny.push_back(census.curve(k));
          }
          done = true;
          break;
        }
        if (!done) throw Error(ErrorCode::NotFoundUnderCap, "no pentagon above an S_r edge within census cap");
      }
      nx.push_back(xs[i]);
      ny.push_back(ys[i]);
    }
    xs = std::move(nx);
    ys = std::move(ny);
  }

  std::vector<Curve> fx{xs[0]}, fy{ys[0]};
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (i + 1 == xs.size() || !low(xs[i])) {
      fx.push_back(xs[i]);
      fy.push_back(ys[i]);
      continue;
    }
    if (low(xs[i - 1]) || low(xs[i + 1])) throw Error(ErrorCode::AuditFailure, "adjacent S_r vertices survived");
    const int s = require_index(census, fy.back(), "source vertex");
    const int t = require_index(census, ys[i + 1], "source vertex");
    const int m = require_index(census, ys[i], "source vertex");
    std::vector<int> route;
    for (int radius : {2, 4}) {
      auto near = census_ball(census, m, radius);
      route = bfs_path(census, s, t, [&](int v) { return near[v] >= 0 && lifter.upper(v); });
      if (!route.empty()) break;
    }
    if (route.empty()) throw Error(ErrorCode::NotFoundUnderCap, "no S_{r+1} + S_{r+2} detour within census cap");
    for (std::size_t k = 1; k + 1 < route.size(); ++k) {
      fx.push_back(lifter.lift(census.curve(route[k])));
      fy.push_back(census.curve(route[k]));
    }
  }
  AbovePath out;
  out.path = annotate(ctx, drop_loops(fx), a);
  out.path.twist_power = pu.N;
  out.audit = audit_above(ctx, out.path, r, ball);
  return out;
}

}  // namespace

AbovePath connect_above_ubt(PathContext& ctx, const Curve& a, const Curve& b, const Curve& b2) {
  if (!vertex_flags(ctx.census(), a).unique_backtracking) {
    throw Error(ErrorCode::Precondition, "a must have unique backtracking");
  }
  const int r = ctx.layer(a);
  if (b == b2) {
    AbovePath p;
    p.path = annotate(ctx, {b}, a);
    p.audit = audit_above(ctx, p.path, r, 4);
    return p;
  }
  return lift_above(ctx, a, b, b2, 4, false);
}

AbovePath connect_above(PathContext& ctx, const Curve& a, const Curve& b, const Curve& b2) {
  const int r = ctx.layer(a);
  if (b == b2) {
    AbovePath p;
    p.path = annotate(ctx, {b}, a);
    p.audit = audit_above(ctx, p.path, r, 6);
    return p;
  }
  return lift_above(ctx, a, b, b2, 6, true);
}

nlohmann::json WrightReport::to_json() const {
  return {{"r", r},
          {"condition1", {{"samples", condition1_samples}, {"passed", condition1_passed}, {"cap_exhaustion", condition1_cap}}},
          {"condition2", {{"pairs", condition2_pairs}, {"passed", condition2_passed}, {"cap_exhaustion", condition2_cap}}},
          {"ok", ok()},
          {"records", records}};
}

WrightReport verify_wright_conditions(PathContext& ctx, int r, int samples, unsigned long long seed) {
  const SphereCensus& census = ctx.census();
  WrightReport rep;
  rep.r = r;
  std::mt19937_64 rng(seed);
  std::vector<std::array<int, 3>> triples;
  for (int z : census.layer_members(r)) {
    std::vector<int> up;
    for (int v : census.neighbours(z)) {
      if (census.layer(v) == r + 1) up.push_back(v);
    }
    for (std::size_t i = 0; i < up.size(); ++i) {
      for (std::size_t j = i + 1; j < up.size(); ++j) triples.push_back({z, up[i], up[j]});
    }
  }
  std::shuffle(triples.begin(), triples.end(), rng);
  if (static_cast<int>(triples.size()) > samples) triples.resize(samples);
  for (const auto& t : triples) {
    ++rep.condition1_samples;
    nlohmann::json rec{{"condition", 1}, {"z", census.curve(t[0]).coords()}, {"x", census.curve(t[1]).coords()},
                       {"y", census.curve(t[2]).coords()}};
    try {
      auto p = connect_above(ctx, census.curve(t[0]), census.curve(t[1]), census.curve(t[2]));
      rec["audit"] = p.audit.to_json();
      rec["length"] = static_cast<int>(p.path.vertices.size()) - 1;
      rec["twist_power"] = p.path.twist_power;
      if (p.audit.ok()) ++rep.condition1_passed;
    } catch (const Error& e) {
      if (e.is_cap_exhaustion()) ++rep.condition1_cap;
      rec["error"] = e.what();
    }
    rep.records.push_back(rec);
  }
  std::vector<std::pair<int, int>> pairs;
  for (int x : census.layer_members(r)) {
    for (int y : census.neighbours(x)) {
      if (y > x && census.layer(y) == r) pairs.emplace_back(x, y);
    }
  }
  std::shuffle(pairs.begin(), pairs.end(), rng);
  if (static_cast<int>(pairs.size()) > samples) pairs.resize(samples);
  for (const auto& [x, y] : pairs) {
    ++rep.condition2_pairs;
    nlohmann::json rec{{"condition", 2}, {"x", census.curve(x).coords()}, {"y", census.curve(y).coords()}};
    bool found = false;
    for (const auto& pent : pentagons_on_edge(census, x, y)) {
      bool up = true;
      for (int k : pent) up = up && (census.layer(k) == r + 1 || census.layer(k) == r + 2);
      if (!up) continue;
      rec["path"] = {census.curve(x).coords(), census.curve(pent[1]).coords(), census.curve(pent[0]).coords(),
                     census.curve(pent[2]).coords(), census.curve(y).coords()};
      found = true;
      break;
    }
    if (found) {
      ++rep.condition2_passed;
    } else {
      ++rep.condition2_cap;
      rec["error"] = "no pentagon above the edge within census cap";
    }
    rep.records.push_back(rec);
  }
  return rep;
}

nlohmann::json PushUpReport::to_json() const {
  return {{"r", r},
          {"samples", samples},
          {"passed", passed},
          {"cap", cap},
          {"prelim_failures", prelim_failures},
          {"property_failures", property_failures},
          {"inexact", inexact},
          {"unstable", unstable},
          {"semi_certified", semi_certified},
          {"stability_cap", stability_cap},
          {"stability_failures", stability_failures},
          {"ok", ok()},
          {"records", records}};
}

PushUpReport verify_push_up(PathContext& ctx, int r, int samples, unsigned long long seed, const SphereCensus* larger) {
  const SphereCensus& census = ctx.census();
  PushUpReport rep;
  rep.r = r;
  rep.stability_cap = larger ? larger->cap() : 0;
  if (larger && larger->center() != census.center()) {
    throw Error(ErrorCode::Precondition, "stability census has another center");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::array<int, 3>> triples;
  for (int a : census.layer_members(r)) {
    std::vector<int> up;
    for (int v : census.neighbours(a)) {
      if (census.layer(v) == r + 1) up.push_back(v);
    }
    for (std::size_t i = 0; i < up.size(); ++i) {
      for (std::size_t j = i + 1; j < up.size(); ++j) triples.push_back({a, up[i], up[j]});
    }
  }
  std::shuffle(triples.begin(), triples.end(), rng);
  if (static_cast<int>(triples.size()) > samples) triples.resize(samples);
  for (const auto& t : triples) {
    const Curve& a = census.curve(t[0]);
    const Curve& b = census.curve(t[1]);
    const Curve& b2 = census.curve(t[2]);
    ++rep.samples;
    nlohmann::json rec{{"a", a.coords()}, {"b", b.coords()}, {"b2", b2.coords()}};
    try {
      auto prelim = preliminary_path(ctx, a, b, b2);
      auto pa = audit_preliminary(ctx, a, prelim);
      rec["preliminary"] = pa.to_json();
      if (!pa.ok()) ++rep.prelim_failures;
      auto pu = push_up(ctx, a, prelim);
      rec["N"] = pu.N;
      rec["push_up"] = pu.audit.to_json();
      rec["path"] = pu.path.to_json();
      for (int k = 0; k < 4; ++k) {
        if (!pu.audit.property[k]) ++rep.property_failures[k];
      }
      bool certified = true;
      for (std::size_t i = 1; i + 1 < pu.path.notes.size(); ++i) {
        const auto& pc = pu.path.notes[i].center;
        if (pc.exact()) continue;
        if (!(pc.evidence == Evidence::Exhaustion && pc.lo == r + 2)) certified = false;
      }
      if (!certified) ++rep.inexact;
      if (!pu.audit.stable) ++rep.unstable;
      rep.semi_certified += pu.audit.semi_certified;
      bool stable4 = true;
      if (larger) {
        // Property (4) against the larger census: no layer-r curve disjoint
        // from a layer-r path vertex, when a has unique backtracking there.
        const bool ubt = vertex_flags(*larger, a).unique_backtracking;
        for (std::size_t i = 1; i + 1 < pu.path.vertices.size() && ubt; ++i) {
          const auto& pc = pu.path.notes[i].center;
          if (!(pc.exact() && pc.hi == r)) continue;
          const Curve& x = pu.path.vertices[i];
          for (int v : larger->layer_members(r)) {
            if (larger->curve(v) != x && intersection(larger->curve(v), x) == 0) {
              stable4 = false;
              break;
            }
          }
        }
        rec["property4_larger"] = stable4;
        rec["unique_backtracking_larger"] = ubt;
        if (!stable4) ++rep.stability_failures;
      }
      const bool pass = pa.ok() && pu.audit.ok() && certified && pu.audit.stable && stable4;
      rec["pass"] = pass;
      if (pass) ++rep.passed;
    } catch (const Error& e) {
      if (e.is_cap_exhaustion()) ++rep.cap;
      rec["error"] = e.what();
      rec["pass"] = false;
    }
    rep.records.push_back(rec);
  }
  return rep;
}

}  // namespace sphereprobe


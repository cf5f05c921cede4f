#include "sphereprobe/farey.hpp"

#include <map>
#include <numeric>
#include <set>

#include "sphereprobe/error.hpp"

namespace sphereprobe {

namespace {

long long checked_mul_add(long long a, long long b, long long c, long long d) {
  __int128 r = static_cast<__int128>(a) * b + static_cast<__int128>(c) * d;
  if (r > static_cast<__int128>(1) << 62 || r < -(static_cast<__int128>(1) << 62)) {
    throw Error(ErrorCode::ResourceCap, "slope coordinates overflow");
  }
  return static_cast<long long>(r);
}

int distance_from_infinity(long long p, long long q, std::map<std::pair<long long, long long>, int>& memo) {
  // p/q with q >= 0, gcd 1.
  if (q == 0) return 0;
  if (q == 1) return 1;
  auto key = std::make_pair(p, q);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  // floor and ceiling of p/q
  long long fl = p >= 0 ? p / q : -((-p + q - 1) / q);
  int best = 1 << 29;
  for (long long n : {fl, fl + 1}) {
    // -1 / (p/q - n) = -q / (p - n q)
    long long np = -q;
    long long nq = p - n * q;
    if (nq < 0) {
      np = -np;
      nq = -nq;
    }
    best = std::min(best, 1 + distance_from_infinity(np, nq, memo));
  }
  memo.emplace(key, best);
  return best;
}

}  // namespace

Slope normalize(long long p, long long q) {
  long long g = std::gcd(p < 0 ? -p : p, q < 0 ? -q : q);
  if (g == 0) throw Error(ErrorCode::InvalidArgument, "zero slope vector");
  p /= g;
  q /= g;
  if (q < 0 || (q == 0 && p < 0)) {
    p = -p;
    q = -q;
  }
  return {p, q};
}

int farey_distance(Slope a, Slope b) {
  a = normalize(a.p, a.q);
  b = normalize(b.p, b.q);
  if (a == b) return 0;
  // Move a to infinity with an integral unimodular map.
  // Find r, s with a.p * s - a.q * r = 1.
  long long old_r = a.p, r = a.q, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    long long quot = old_r / r;
    long long tmp = old_r - quot * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quot * s;
    old_s = s;
    s = tmp;
    tmp = old_t - quot * t;
    old_t = t;
    t = tmp;
  }
  // old_s * a.p + old_t * a.q = old_r = ±1
  long long sign = old_r;
  long long x = old_s * sign;  // x * a.p + y * a.q = 1
  long long y = old_t * sign;
  // Matrix [[x, y], [-a.q, a.p]] has det 1 and sends (a.p, a.q) to (1, 0).
  long long np = checked_mul_add(x, b.p, y, b.q);
  long long nq = checked_mul_add(-a.q, b.p, a.p, b.q);
  Slope m = normalize(np, nq);
  std::map<std::pair<long long, long long>, int> memo;
  return distance_from_infinity(m.p, m.q, memo);
}

FareyFrame::FareyFrame(const Curve& z) : z_(z) {
  if (z.surface()->punctures() != 5) throw Error(ErrorCode::Precondition, "Farey frames exist on the five-punctured sphere only");
  st_ = standardize(z);
  orient();
}

FareyFrame::FareyFrame(const Curve& z, Standardization st) : z_(z), st_(std::move(st)) {
  if (z.surface()->punctures() != 5) throw Error(ErrorCode::Precondition, "Farey frames exist on the five-punctured sphere only");
  orient();
}

Standardization FareyFrame::standardization(const Vertex& v) const {
  return Standardization{st_.h * v.g, twist_gen(v.slot), 2};
}

void FareyFrame::orient() {
  const SurfacePtr& s = z_.surface();
  u_ = (st_.position + 2) % 5;
  v_ = (st_.position + 3) % 5;
  y_[0] = block_curve(s, u_, 2);
  y_[1] = block_curve(s, v_, 2);
  Curve c1 = MappingClassWord::generator(s, u_, 1).apply(y_[1]);
  Curve c2 = MappingClassWord::generator(s, v_, 1).apply(y_[0]);
  const int i12 = intersection(c1, c2);
  if (i12 == 0) {
    eps1_ = 1;
  } else if (i12 == 4) {
    eps1_ = -1;
  } else {
    throw Error(ErrorCode::AuditFailure, "unexpected intersection while orienting a Farey frame");
  }
}

Curve FareyFrame::curve(const Vertex& v) const { return (st_.h * v.g).apply(y_[v.slot]); }

Slope FareyFrame::slope(const Vertex& v) const {
  return v.slot == 0 ? normalize(v.m[0], v.m[2]) : normalize(v.m[1], v.m[3]);
}

FareyFrame::Vertex FareyFrame::step(const Vertex& v, int k) const {
  Vertex out;
  const SurfacePtr& s = z_.surface();
  out.g = v.g * MappingClassWord::generator(s, twist_gen(v.slot), k);
  out.slot = 1 - v.slot;
  long long t[4];
  if (v.slot == 0) {
    t[0] = 1; t[1] = k; t[2] = 0; t[3] = 1;
  } else {
    t[0] = 1; t[1] = 0; t[2] = static_cast<long long>(eps1_) * k; t[3] = 1;
  }
  out.m[0] = checked_mul_add(v.m[0], t[0], v.m[1], t[2]);
  out.m[1] = checked_mul_add(v.m[0], t[1], v.m[1], t[3]);
  out.m[2] = checked_mul_add(v.m[2], t[0], v.m[3], t[2]);
  out.m[3] = checked_mul_add(v.m[2], t[1], v.m[3], t[3]);
  return out;
}

int FareyFrame::neighbour_value(int slot, const Curve& xt, int k) const {
  Curve moved = MappingClassWord::generator(z_.surface(), twist_gen(slot), -k).apply(xt);
  return intersection(y_[1 - slot], moved);
}

int FareyFrame::argmin_neighbour(int slot, const Curve& xt, int& value) const {
  std::map<int, int> cache;
  auto F = [&](int k) {
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    int v = neighbour_value(slot, xt, k);
    cache.emplace(k, v);
    return v;
  };
  const int f0 = F(0);
  int dir = 0;
  if (F(1) < f0) {
    dir = 1;
  } else if (F(-1) < f0) {
    dir = -1;
  } else {
    value = f0;
    return 0;
  }
  // F is convex along the neighbours; bracket the minimum by doubling.
  long long prev = 1;
  long long t = 2;
  while (F(static_cast<int>(dir * t)) < F(static_cast<int>(dir * prev))) {
    prev = t;
    t *= 2;
    if (t > (1 << 22)) throw Error(ErrorCode::ResourceCap, "Farey neighbour search diverged");
  }
  long long lo = prev, hi = t - 1;
  while (lo < hi) {
    long long mid = (lo + hi) / 2;
    if (F(static_cast<int>(dir * (mid + 1))) >= F(static_cast<int>(dir * mid))) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  value = F(static_cast<int>(dir * lo));
  return static_cast<int>(dir * lo);
}

FareyFrame::Descent FareyFrame::descend(const Curve& x) const {
  require_same_surface(z_, x);
  Descent d;
  d.transported = st_.h.inverse().apply(x);
  d.at.g = MappingClassWord(z_.surface());
  d.at.slot = 0;
  d.value = intersection(y_[0], d.transported);
  while (d.value > 0) {
    int val = 0;
    const int k = argmin_neighbour(d.at.slot, d.transported, val);
    if (val >= d.value) break;
    d.transported = MappingClassWord::generator(z_.surface(), twist_gen(d.at.slot), -k).apply(d.transported);
    d.at = step(d.at, k);
    d.value = val;
  }
  d.minimiser = curve(d.at);
  return d;
}

std::vector<FareyFrame::Vertex> FareyFrame::projection_vertices(const Curve& x) const {
  require_same_surface(z_, x);
  if (x == z_) throw Error(ErrorCode::Precondition, "the curve z does not cut its own complement");
  Descent d = descend(x);
  const int total = 2 * intersection(x, z_);
  if (total == 0) return {d.at};
  int fk = 0;
  const int kstar = argmin_neighbour(d.at.slot, d.transported, fk);
  // The arcs of x carry at most three slopes, a Farey triangle through the
  // minimiser; the weights follow from f(A) + f(B) + f(C) = 2 i(x, z).
  for (int k : {kstar - 1, kstar}) {
    const int fb = neighbour_value(d.at.slot, d.transported, k);
    const int fc = neighbour_value(d.at.slot, d.transported, k + 1);
    if (d.value + fb + fc != total) continue;
    const long long na = fb + fc - d.value;
    const long long nb = d.value + fc - fb;
    const long long nc = d.value + fb - fc;
    if (na < 0 || nb < 0 || nc < 0 || na % 4 || nb % 4 || nc % 4) continue;
    std::vector<Vertex> out;
    if (na > 0) out.push_back(d.at);
    if (nb > 0) out.push_back(step(d.at, k));
    if (nc > 0) out.push_back(step(d.at, k + 1));
    return out;
  }
  throw Error(ErrorCode::AuditFailure, "arc slopes of a projection do not form a Farey triangle");
}

std::vector<Slope> FareyFrame::projection(const Curve& x) const {
  std::vector<Slope> out;
  for (const Vertex& v : projection_vertices(x)) out.push_back(slope(v));
  return out;
}

std::vector<Curve> FareyFrame::projection_curves(const Curve& x) const {
  std::vector<Curve> out;
  for (const Vertex& v : projection_vertices(x)) out.push_back(curve(v));
  return out;
}

std::vector<FareyFrame::Neighbour> FareyFrame::neighbourhood(const Curve& x, int radius, int spread) const {
  Descent d = descend(x);
  struct Item {
    Vertex v;
    Curve xt;
  };
  std::vector<Item> frontier{{d.at, d.transported}};
  std::set<std::vector<int>> seen{d.minimiser.coords()};
  std::vector<Neighbour> out{{d.minimiser, standardization(d.at)}};
  for (int depth = 0; depth < radius; ++depth) {
    std::vector<Item> next;
    for (const Item& it : frontier) {
      int val = 0;
      const int kstar = argmin_neighbour(it.v.slot, it.xt, val);
      for (int k = kstar - spread; k <= kstar + spread; ++k) {
        Vertex nv = step(it.v, k);
        Curve c = curve(nv);
        if (!seen.insert(c.coords()).second) continue;
        Curve nxt = MappingClassWord::generator(z_.surface(), twist_gen(it.v.slot), -k).apply(it.xt);
        out.push_back({c, standardization(nv)});
        next.push_back({nv, nxt});
      }
    }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace sphereprobe

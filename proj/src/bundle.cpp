#include "sphereprobe/bundle.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <set>
#include <sstream>

#include "sphereprobe/error.hpp"

namespace sphereprobe {

namespace {

int census_layer(const SphereCensus& census, const Curve& v) {
  const int i = census.index_of(v);
  return i < 0 ? -1 : census.layer(i);
}

// Layer 1 is exact without the census: x is disjoint from c.
void require_layer1(const SphereCensus& census, const Curve& x) {
  const Curve& c = census.center();
  if (x == c || intersection(x, c) != 0) throw Error(ErrorCode::Precondition, "base vertex must lie in S_1(c)");
}

bool coords_less(const Curve& a, const Curve& b) { return a.coords() < b.coords(); }

}  // namespace

Curve backtrack(const SphereCensus& census, const Curve& v) {
  const int i = census.index_of(v);
  if (i < 0 || census.layer(i) != 2) throw Error(ErrorCode::Precondition, "backtrack needs a census vertex certified in layer 2");
  std::vector<int> down;
  for (int u : census.neighbours(i)) {
    if (census.layer(u) == 1) down.push_back(u);
  }
  if (down.size() > 1) throw Error(ErrorCode::AuditFailure, "two layer-1 neighbours: a quadrilateral through c");
  if (!down.empty()) return census.curve(down[0]);
  // Beyond the cap: the middle vertex of the layer certificate.
  const DistanceCertificate& cert = census.certificate(i);
  if (cert.exact() && cert.hi == 2 && cert.witness.size() == 3 && adjacent(cert.witness[1], census.center()) &&
      adjacent(cert.witness[1], v)) {
    return cert.witness[1];
  }
  throw Error(ErrorCode::NotFoundUnderCap, "no layer-1 neighbour within census cap");
}

ChopDown chop_down_check(const SphereCensus& census, const Curve& v) {
  ChopDown out;
  const int i = census.index_of(v);
  if (i < 0 || census.layer(i) != 2 || !census.nonisolated(i)) return out;
  out.applicable = true;
  const Curve x = backtrack(census, v);
  out.holds = intersection(v, census.center()) == 2 && adjacent(v, x);
  return out;
}

std::vector<Curve> fiber_members(const SphereCensus& census, const Curve& x) {
  const Curve& c = census.center();
  std::vector<Curve> out;
  for (int i = 0; i < census.size(); ++i) {
    const Curve& v = census.curve(i);
    if (v != x && intersection(v, x) == 0 && intersection(v, c) == 2) out.push_back(v);
  }
  std::sort(out.begin(), out.end(), coords_less);
  return out;
}

Curve FareyFiberChart::element(int n) const {
  if (n >= -window_ && n <= window_) return elements_[n + window_];
  return half_twist_word(c_, n).apply(basepoint());
}

std::optional<int> FareyFiberChart::zeta(const Curve& v) const {
  auto it = index_.find(v.coords());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

nlohmann::json FareyFiberChart::to_json() const {
  nlohmann::json el = nlohmann::json::array();
  for (int n = -window_; n <= window_; ++n) el.push_back({{"zeta", n}, {"curve", elements_[n + window_].coords()}});
  nlohmann::json miss = nlohmann::json::array();
  for (const Curve& m : census_missing) miss.push_back(m.coords());
  return {{"base", x_.coords()}, {"basepoint", basepoint().coords()}, {"window", window_}, {"elements", el},
          {"elements_ok", elements_ok}, {"distinct", distinct}, {"census_missing", miss}, {"failures", failures}};
}

FareyFiberChart build_chart(const SphereCensus& census, const Curve& x, int W, int basepoint_shift) {
  if (W < 0) throw Error(ErrorCode::InvalidArgument, "window must be non-negative");
  require_layer1(census, x);
  const Curve& c = census.center();
  std::vector<Curve> members = fiber_members(census, x);
  if (members.empty()) throw Error(ErrorCode::NotFoundUnderCap, "E_x has no census member");
  FareyFiberChart ch;
  ch.c_ = c;
  ch.x_ = x;
  ch.window_ = W;
  const MappingClassWord fwd = half_twist_word(c, 1);
  const MappingClassWord back = half_twist_word(c, -1);
  const Curve base = basepoint_shift == 0 ? members.front() : half_twist_word(c, basepoint_shift).apply(members.front());
  ch.elements_.assign(2 * W + 1, base);
  for (int n = 1; n <= W; ++n) {
    ch.elements_[W + n] = fwd.apply(ch.elements_[W + n - 1]);
    ch.elements_[W - n] = back.apply(ch.elements_[W - n + 1]);
  }
  for (int n = -W; n <= W; ++n) {
    const Curve& e = ch.elements_[n + W];
    if (!ch.index_.emplace(e.coords(), n).second) {
      ch.distinct = false;
      ch.failures.push_back("element " + std::to_string(n) + " repeats");
    }
    if (!adjacent(e, x) || intersection(e, c) != 2) {
      ch.elements_ok = false;
      ch.failures.push_back("element " + std::to_string(n) + " not in E_x");
      continue;
    }
    const int ci = census.index_of(e);
    const DistanceCertificate d = ci >= 0 ? census.certificate(ci) : distance(c, e, census.config().distance, &census);
    if (!(d.exact() && d.hi == 2)) {
      ch.elements_ok = false;
      ch.failures.push_back("element " + std::to_string(n) + " not certified in layer 2");
    }
  }
  for (const Curve& m : members) {
    if (!ch.zeta(m)) ch.census_missing.push_back(m);
  }
  return ch;
}

nlohmann::json PairingTable::to_json() const {
  return {{"x1", x1.coords()},         {"x2", x2.coords()},           {"window", window},
          {"offset", offset},          {"matches", matches},          {"matching_ok", matching_ok},
          {"offset_ok", offset_ok},    {"complete", complete},        {"seed_pentagon", seed_pentagon},
          {"failures", failures},      {"ok", ok()}};
}

PairingTable pairing(const SphereCensus& census, const FareyFiberChart& c1, const FareyFiberChart& c2) {
  const Curve& c = census.center();
  if (intersection(c1.base(), c2.base()) != 2) throw Error(ErrorCode::Precondition, "pairing needs Farey-adjacent base vertices");
  PairingTable t;
  t.x1 = c1.base();
  t.x2 = c2.base();
  t.window = std::min(c1.window(), c2.window());
  const int W1 = c1.window();
  const int W2 = c2.window();
  std::vector<Curve> second;
  for (int j = -W2; j <= W2; ++j) second.push_back(c2.element(j));
  std::map<int, int> used;
  std::set<int> offsets;
  std::vector<char> matched(2 * W1 + 1, 0);
  for (int i = -W1; i <= W1; ++i) {
    const Curve v = c1.element(i);
    int hits = 0;
    for (int j = -W2; j <= W2; ++j) {
      if (intersection(v, second[j + W2]) != 0) continue;
      ++hits;
      t.matches.emplace_back(i, j);
      offsets.insert(j - i);
      if (++used[j] > 1) {
        t.matching_ok = false;
        t.failures.push_back("element " + std::to_string(j) + " of E_x2 matched twice");
      }
    }
    if (hits > 1) {
      t.matching_ok = false;
      t.failures.push_back("element " + std::to_string(i) + " of E_x1 matched twice");
    }
    matched[i + W1] = hits > 0;
  }
  if (t.matches.empty()) throw Error(ErrorCode::WindowExhausted, "no matched pair within the windows");
  t.offset = *offsets.begin();
  if (offsets.size() > 1) {
    t.offset_ok = false;
    t.failures.push_back("matches need " + std::to_string(offsets.size()) + " different offsets");
  }
  for (int i = -W1; i <= W1; ++i) {
    if (std::abs(i + t.offset) <= W2 && !matched[i + W1]) {
      t.complete = false;
      t.failures.push_back("element " + std::to_string(i) + " of E_x1 unmatched inside the window");
    }
  }
  const auto [i0, j0] = t.matches.front();
  t.seed_pentagon = is_pentagon_cycle({c, t.x1, c1.element(i0), c2.element(j0), t.x2});
  if (!t.seed_pentagon) t.failures.push_back("first match does not close a pentagon through c");
  return t;
}

Bundle::Bundle(const SphereCensus& census, int window, int max_window)
    : census_(census), window_(window), max_window_(max_window) {
  if (census.surface()->punctures() != 5) throw Error(ErrorCode::Precondition, "the bundle structure lives on the five-punctured sphere");
  if (window < 1 || max_window < window) throw Error(ErrorCode::InvalidArgument, "bad chart window");
}

const FareyFiberChart& Bundle::chart(const Curve& x) {
  auto it = charts_.find(x.coords());
  if (it != charts_.end()) return it->second;
  return charts_.emplace(x.coords(), build_chart(census_, x, window_)).first->second;
}

int Bundle::zeta(const Curve& x, const Curve& v) {
  for (;;) {
    const FareyFiberChart& ch = chart(x);
    if (auto z = ch.zeta(v)) return *z;
    if (ch.window() >= max_window_) {
      throw Error(ErrorCode::WindowExhausted, "curve not in the chart of its fiber within window " + std::to_string(max_window_));
    }
    const int W = std::min(2 * ch.window(), max_window_);
    charts_.erase(x.coords());
    charts_.emplace(x.coords(), build_chart(census_, x, W));
    for (auto p = pairs_.begin(); p != pairs_.end();) {
      p = (p->first.first == x.coords() || p->first.second == x.coords()) ? pairs_.erase(p) : std::next(p);
    }
  }
}

const PairingTable& Bundle::pair(const Curve& x1, const Curve& x2) {
  auto key = std::make_pair(x1.coords(), x2.coords());
  auto it = pairs_.find(key);
  if (it != pairs_.end()) return it->second;
  for (;;) {
    try {
      return pairs_.emplace(key, pairing(census_, chart(x1), chart(x2))).first->second;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::WindowExhausted) throw;
      const int W = std::max(chart(x1).window(), chart(x2).window());
      if (W >= max_window_) throw;
      const int W2 = std::min(2 * W, max_window_);
      charts_.erase(x1.coords());
      charts_.erase(x2.coords());
      charts_.emplace(x1.coords(), build_chart(census_, x1, W2));
      charts_.emplace(x2.coords(), build_chart(census_, x2, W2));
    }
  }
}

std::vector<Curve> Bundle::farey_path(const Curve& from, const Curve& to) const {
  require_layer1(census_, from);
  require_layer1(census_, to);
  std::vector<Curve> nodes{from};
  if (to != from) nodes.push_back(to);
  for (int i : census_.layer_members(1)) {
    const Curve& x = census_.curve(i);
    if (x != from && x != to) nodes.push_back(x);
  }
  const int t = to == from ? 0 : 1;
  std::vector<int> parent(nodes.size(), -2);
  parent[0] = -1;
  std::deque<int> q{0};
  while (!q.empty() && parent[t] == -2) {
    const int u = q.front();
    q.pop_front();
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      if (parent[v] != -2 || intersection(nodes[u], nodes[v]) != 2) continue;
      parent[v] = u;
      q.push_back(static_cast<int>(v));
    }
  }
  if (parent[t] == -2) throw Error(ErrorCode::NotFoundUnderCap, "no Farey path in S_1(c) within census cap");
  std::vector<Curve> out;
  for (int x = t; x != -1; x = parent[x]) out.push_back(nodes[x]);
  std::reverse(out.begin(), out.end());
  return out;
}

nlohmann::json MonodromyResult::to_json() const {
  return {{"value", value},
          {"per_v", per_v},
          {"independent_of_v", independent_of_v},
          {"adjacency_ok", adjacency_ok},
          {"per_basepoint", per_basepoint},
          {"independent_of_basepoint", independent_of_basepoint},
          {"failures", failures},
          {"ok", ok()}};
}

MonodromyResult monodromy(Bundle& bundle, const std::vector<Curve>& path, int basepoint_trials) {
  const SphereCensus& census = bundle.census();
  MonodromyResult out;
  if (path.size() <= 1) {
    if (path.size() == 1) require_layer1(census, path[0]);
    return out;
  }
  for (std::size_t k = 0; k < path.size(); ++k) {
    require_layer1(census, path[k]);
    if (k + 1 < path.size() && intersection(path[k], path[k + 1]) != 2) {
      throw Error(ErrorCode::Precondition, "consecutive path vertices must be Farey-adjacent");
    }
  }
  std::vector<int> offsets;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const PairingTable& t = bundle.pair(path[k], path[k + 1]);
    if (!t.ok()) {
      out.adjacency_ok = false;
      out.failures.push_back("pairing " + std::to_string(k) + " failed its audit");
    }
    offsets.push_back(t.offset);
  }
  for (int n0 : {0, 1, -1}) {
    int n = n0;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const Curve u = bundle.chart(path[k]).element(n);
      const FareyFiberChart& next = bundle.chart(path[k + 1]);
      const int m = n + offsets[k];
      if (!adjacent(u, next.element(m)) || adjacent(u, next.element(m - 1)) || adjacent(u, next.element(m + 1))) {
        out.adjacency_ok = false;
        out.failures.push_back("step " + std::to_string(k) + " from zeta " + std::to_string(n) + " is not the unique match");
      }
      n = m;
    }
    out.per_v.push_back(n - n0);
  }
  out.value = out.per_v.front();
  for (int v : out.per_v) out.independent_of_v = out.independent_of_v && v == out.value;

  if (path.front() == path.back()) {
    // Recompute with charts based at other points of each fiber.
    for (int trial = 1; trial <= basepoint_trials; ++trial) {
      std::map<std::vector<int>, FareyFiberChart> charts;
      for (std::size_t k = 0; k < path.size(); ++k) {
        if (charts.count(path[k].coords())) continue;
        const int shift = (trial * static_cast<int>(k + 2)) % 7 - 3;
        charts.emplace(path[k].coords(), build_chart(census, path[k], bundle.chart(path[k]).window(), shift));
      }
      int total = 0;
      for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        PairingTable t = pairing(census, charts.at(path[k].coords()), charts.at(path[k + 1].coords()));
        if (!t.ok()) out.failures.push_back("basepoint trial " + std::to_string(trial) + ": pairing failed its audit");
        total += t.offset;
      }
      out.per_basepoint.push_back(total);
      if (total != out.value) out.independent_of_basepoint = false;
    }
  }
  return out;
}

std::array<Curve, 3> fundamental_triangle(const SphereCensus& census) {
  const SurfacePtr& s = census.surface();
  if (s->punctures() != 5 || census.center() != standard_curve(s, 1, 2)) {
    throw Error(ErrorCode::Precondition, "the fundamental triangle is defined for the census about P{1,2}");
  }
  std::array<Curve, 3> t{standard_curve(s, 3, 4), standard_curve(s, 3, 5), standard_curve(s, 4, 5)};
  for (int k = 0; k < 3; ++k) {
    if (intersection(t[k], t[(k + 1) % 3]) != 2 || census_layer(census, t[k]) != 1) {
      throw Error(ErrorCode::AuditFailure, "fundamental triangle fails its audit");
    }
  }
  return t;
}

nlohmann::json S2Path::to_json() const {
  return {{"path", path.to_json()}, {"loops", loops}, {"layers_ok", layers_ok}, {"nonisolated_ok", nonisolated_ok},
          {"failures", failures}, {"ok", ok()}};
}

namespace {

// Follows the pairings along a Farey path from v in E_{path[0]}.
std::vector<Curve> carry(Bundle& bundle, const std::vector<Curve>& path, const Curve& v, int& n) {
  std::vector<Curve> out{v};
  n = bundle.zeta(path[0], v);
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    n += bundle.pair(path[k], path[k + 1]).offset;
    Curve u = bundle.chart(path[k + 1]).element(n);
    if (!adjacent(out.back(), u)) throw Error(ErrorCode::AuditFailure, "pairing step is not an edge");
    out.push_back(u);
  }
  return out;
}

std::vector<Curve> erase_loops(const std::vector<Curve>& p) {
  std::vector<Curve> out;
  for (const Curve& v : p) {
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

S2Path s2prime_path(Bundle& bundle, PathContext& ctx, const Curve& v, const Curve& w) {
  const SphereCensus& census = bundle.census();
  for (const Curve* p : {&v, &w}) {
    const int i = census.index_of(*p);
    if (i < 0 || census.layer(i) != 2 || !census.nonisolated(i)) {
      throw Error(ErrorCode::Precondition, "endpoints must be non-isolated layer-2 census vertices");
    }
  }
  S2Path out;
  std::vector<Curve> full{v};
  if (v != w) {
    const auto tri = fundamental_triangle(census);
    const Curve& x1 = tri[0];
    int nv = 0;
    int nw = 0;
    std::vector<Curve> from_v = carry(bundle, bundle.farey_path(backtrack(census, v), x1), v, nv);
    std::vector<Curve> from_w = carry(bundle, bundle.farey_path(backtrack(census, w), x1), w, nw);
    const std::vector<Curve> forward{tri[0], tri[1], tri[2], tri[0]};
    const std::vector<Curve> reverse{tri[0], tri[2], tri[1], tri[0]};
    const int m = monodromy(bundle, forward, 0).value;
    if (std::abs(m) != 1) throw Error(ErrorCode::AuditFailure, "fundamental triangle monodromy is not +-1");
    full = from_v;
    int n = nv;
    while (n != nw) {
      const bool up = (nw - n) * m > 0;
      int dummy = 0;
      std::vector<Curve> loop = carry(bundle, up ? forward : reverse, full.back(), dummy);
      full.insert(full.end(), loop.begin() + 1, loop.end());
      n += up ? m : -m;
      ++out.loops;
      if (bundle.zeta(x1, full.back()) != n) throw Error(ErrorCode::AuditFailure, "triangle loop moved by the wrong amount");
    }
    full.insert(full.end(), from_w.rbegin() + 1, from_w.rend());
  }
  out.path = annotate(ctx, erase_loops(full), std::nullopt);
  const auto& vs = out.path.vertices;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto& c = out.path.notes[i].center;
    if (!(c.exact() && c.hi == 2)) {
      out.layers_ok = false;
      out.failures.push_back("vertex " + std::to_string(i) + " not certified in layer 2");
    }
    const int ci = census.index_of(vs[i]);
    bool has = ci >= 0 && census.nonisolated(ci);
    for (std::size_t j : {i - 1, i + 1}) {
      if (j < vs.size()) has = has || (out.path.notes[j].center.exact() && out.path.notes[j].center.hi == 2);
    }
    if (!has) {
      out.nonisolated_ok = false;
      out.failures.push_back("vertex " + std::to_string(i) + " has no certified layer-2 neighbour");
    }
  }
  return out;
}

bool BundleReport::ok() const {
  return decomposition_failures == 0 && chart_failures == 0 && unplaced == 0 && pairing_failures == 0 &&
         triangle_ok && path_passed + path_cap == path_samples && path_cap * 10 < std::max(path_samples, 1);
}

nlohmann::json BundleReport::to_json() const {
  return {{"s2prime", s2prime},
          {"decomposition_failures", decomposition_failures},
          {"charts", charts},
          {"chart_failures", chart_failures},
          {"unplaced", unplaced},
          {"pairings", pairings},
          {"pairing_failures", pairing_failures},
          {"pairing_cap", pairing_cap},
          {"triangle", {{"monodromy", triangle_monodromy}, {"reversed", reversed_monodromy}, {"ok", triangle_ok}}},
          {"paths", {{"samples", path_samples}, {"passed", path_passed}, {"cap_exhaustion", path_cap}}},
          {"ok", ok()},
          {"records", records}};
}

BundleReport verify_bundle(Bundle& bundle, PathContext& ctx, int samples, unsigned long long seed) {
  const SphereCensus& census = bundle.census();
  BundleReport rep;
  std::vector<int> s2;
  for (int i : census.nonisolated_members(2)) {
    s2.push_back(i);
    ++rep.s2prime;
    try {
      if (!chop_down_check(census, census.curve(i)).holds) ++rep.decomposition_failures;
    } catch (const Error& e) {
      ++rep.decomposition_failures;
      rep.records.push_back({{"stage", "decomposition"}, {"v", census.curve(i).coords()}, {"error", e.what()}});
    }
  }
  // Fiber decomposition: one chart per layer-1 curve, every S'_2 vertex
  // placed in the chart of its backtrack.
  for (int x : census.layer_members(1)) {
    ++rep.charts;
    const auto& ch = bundle.chart(census.curve(x));
    if (!ch.elements_ok || !ch.distinct || !ch.census_missing.empty()) {
      ++rep.chart_failures;
      rep.records.push_back({{"stage", "chart"}, {"x", census.curve(x).coords()}, {"chart", ch.to_json()}});
    }
  }
  for (int i : s2) {
    try {
      const Curve x = backtrack(census, census.curve(i));
      bundle.zeta(x, census.curve(i));
    } catch (const Error& e) {
      ++rep.unplaced;
      rep.records.push_back({{"stage", "fiber"}, {"v", census.curve(i).coords()}, {"error", e.what()}});
    }
  }
  for (const auto& [a, b] : census.pairs_with_intersection(1, 2)) {
    ++rep.pairings;
    try {
      const auto& pt = bundle.pair(census.curve(a), census.curve(b));
      if (!pt.ok()) {
        ++rep.pairing_failures;
        rep.records.push_back({{"stage", "pairing"}, {"pairing", pt.to_json()}});
      }
    } catch (const Error& e) {
      if (e.is_cap_exhaustion()) {
        ++rep.pairing_cap;
      } else {
        ++rep.pairing_failures;
      }
      rep.records.push_back({{"stage", "pairing"}, {"x1", census.curve(a).coords()},
                             {"x2", census.curve(b).coords()}, {"error", e.what()}});
    }
  }
  const auto tri = fundamental_triangle(census);
  MonodromyResult fwd = monodromy(bundle, {tri[0], tri[1], tri[2], tri[0]});
  MonodromyResult rev = monodromy(bundle, {tri[0], tri[2], tri[1], tri[0]}, 0);
  rep.triangle_monodromy = fwd.value;
  rep.reversed_monodromy = rev.value;
  rep.triangle_ok = fwd.ok() && rev.ok() && std::abs(fwd.value) == 1 && rev.value == -fwd.value;
  rep.records.push_back({{"stage", "triangle"}, {"forward", fwd.to_json()}, {"reversed", rev.to_json()}});

  std::mt19937_64 rng(seed);
  if (s2.size() >= 2) {
    std::uniform_int_distribution<std::size_t> pick(0, s2.size() - 1);
    std::set<std::pair<int, int>> seen;
    const std::size_t total = s2.size() * (s2.size() - 1) / 2;
    while (static_cast<int>(seen.size()) < samples && seen.size() < total) {
      int a = s2[pick(rng)];
      int b = s2[pick(rng)];
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      if (!seen.insert({a, b}).second) continue;
      ++rep.path_samples;
      nlohmann::json rec{{"stage", "s2prime_path"}, {"v", census.curve(a).coords()}, {"w", census.curve(b).coords()}};
      try {
        S2Path p = s2prime_path(bundle, ctx, census.curve(a), census.curve(b));
        rec["length"] = static_cast<int>(p.path.vertices.size()) - 1;
        rec["loops"] = p.loops;
        rec["ok"] = p.ok();
        if (!p.failures.empty()) rec["failures"] = p.failures;
        if (p.ok()) ++rep.path_passed;
      } catch (const Error& e) {
        if (e.is_cap_exhaustion()) ++rep.path_cap;
        rec["error"] = e.what();
      }
      rep.records.push_back(rec);
    }
  }
  return rep;
}

std::string bundle_dot(Bundle& bundle) {
  const SphereCensus& census = bundle.census();
  static const char* palette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"};
  const std::vector<int> ones = census.layer_members(1);
  // Fiber ids: census layer-1 curves in order, then backtracks outside the census.
  std::map<std::vector<int>, int> fiber_id;
  for (int x : ones) fiber_id.emplace(census.curve(x).coords(), static_cast<int>(fiber_id.size()));
  const std::vector<int> s2 = census.nonisolated_members(2);
  std::set<int> in(s2.begin(), s2.end());
  std::ostringstream os;
  os << "graph s2prime {\n  node [style=filled, fontsize=9];\n";
  for (int i : s2) {
    std::string label = std::to_string(i);
    std::string colour = "#ffffff";
    try {
      const Curve x = backtrack(census, census.curve(i));
      const int f = fiber_id.emplace(x.coords(), static_cast<int>(fiber_id.size())).first->second;
      colour = palette[f % 8];
      label = "x" + std::to_string(f) + ":" + std::to_string(bundle.zeta(x, census.curve(i)));
    } catch (const Error&) {
      label += "?";
    }
    os << "  v" << i << " [label=\"" << label << "\", fillcolor=\"" << colour << "\"];\n";
  }
  for (int i : s2) {
    for (int j : census.neighbours(i)) {
      if (j > i && in.count(j)) os << "  v" << i << " -- v" << j << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace sphereprobe

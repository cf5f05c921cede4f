#include "sphereprobe/medium.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <random>
#include <set>

#include "sphereprobe/error.hpp"

namespace sphereprobe {

namespace {

void require_six(const Curve& a) {
  if (a.surface()->punctures() != 6) throw Error(ErrorCode::Precondition, "medium constructions need the six-punctured sphere");
}

// Census path from s through accepted vertices to the first vertex passing
// `target`. Empty when none exists.
std::vector<int> search(int n, int s, const std::function<const std::vector<int>&(int)>& nbrs,
                        const std::function<bool(int)>& allowed, const std::function<bool(int)>& target) {
  std::vector<int> parent(n, -2);
  std::deque<int> q{s};
  parent[s] = -1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop_front();
    if (target(u)) {
      std::vector<int> out;
      for (int x = u; x != -1; x = parent[x]) out.push_back(x);
      std::reverse(out.begin(), out.end());
      return out;
    }
    for (int v : nbrs(u)) {
      if (parent[v] != -2 || !allowed(v)) continue;
      parent[v] = u;
      q.push_back(v);
    }
  }
  return {};
}

int require_layer(const SphereCensus& census, const Curve& x, const char* what) {
  const int i = census.index_of(x);
  if (i < 0) throw Error(ErrorCode::NotFoundUnderCap, std::string(what) + " is not a census curve");
  const int l = census.layer(i);
  if (l < 0) throw Error(ErrorCode::Precondition, std::string(what) + " has no certified layer");
  return l;
}

// Drops repeated stretches so that no vertex occurs twice.
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

nlohmann::json EnsClassification::to_json() const {
  nlohmann::json j{{"is_pants", is_pants}, {"essentially_nonseparating", essentially_nonseparating}};
  if (pair) {
    j["components_ens"] = components_ens;
    j["conditions"] = condition;
    j["punctures_between"] = punctures_between;
    j["pair_ens"] = pair_ens;
  }
  return j;
}

EnsClassification classify_ens(const Curve& a) {
  require_six(a);
  EnsClassification e;
  e.is_pants = a.is_pants();
  e.essentially_nonseparating = e.is_pants;
  return e;
}

EnsClassification classify_ens_pair(const Curve& alpha, const Curve& beta) {
  require_six(alpha);
  require_same_surface(alpha, beta);
  if (alpha == beta || intersection(alpha, beta) != 0) {
    throw Error(ErrorCode::Precondition, "a multicurve needs two distinct disjoint curves");
  }
  EnsClassification e;
  e.pair = true;
  e.is_pants = alpha.is_pants() || beta.is_pants();
  e.components_ens = alpha.is_pants() && beta.is_pants();
  e.essentially_nonseparating = e.components_ens;
  // Disjoint separating curves on a sphere nest: one side of alpha sits
  // inside one side of beta, and the region between holds the difference.
  auto as_set = [](const std::vector<int>& v) { return std::set<int>(v.begin(), v.end()); };
  const std::array<std::set<int>, 2> A{as_set(alpha.pants_side()), as_set(alpha.other_side())};
  const std::array<std::set<int>, 2> B{as_set(beta.pants_side()), as_set(beta.other_side())};
  for (const auto& a : A) {
    for (const auto& b : B) {
      if (a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end())) {
        e.punctures_between = static_cast<int>(b.size() - a.size());
      } else if (b.size() < a.size() && std::includes(a.begin(), a.end(), b.begin(), b.end())) {
        e.punctures_between = static_cast<int>(a.size() - b.size());
      }
    }
  }
  if (e.punctures_between < 0) throw Error(ErrorCode::AuditFailure, "disjoint curves with crossing puncture partitions");
  e.condition[0] = false;  // a union of curves on a sphere always separates
  e.condition[1] = alpha.is_pants() || beta.is_pants();
  e.condition[2] = e.punctures_between == 1;
  e.pair_ens = e.components_ens && (e.condition[0] || e.condition[1] || e.condition[2]);
  return e;
}

RestrictedGraphView::RestrictedGraphView(const SphereCensus& census) : census_(census) {
  require_six(census.center());
  const int n = census.size();
  const int ci = census.index_of(census.center());
  in_view_.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    if (i == ci || census.curve(i).is_pants()) {
      in_view_[i] = 1;
      vertices_.push_back(i);
    }
  }
  adj_.assign(n, {});
  for (int i : vertices_) {
    for (int j : census.neighbours(i)) {
      if (j > i && in_view_[j] && edge(i, j)) {
        adj_[i].push_back(j);
        adj_[j].push_back(i);
      }
    }
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
  bfs_.assign(n, -1);
  std::deque<int> q{ci};
  bfs_[ci] = 0;
  while (!q.empty()) {
    const int u = q.front();
    q.pop_front();
    for (int v : adj_[u]) {
      if (bfs_[v] >= 0) continue;
      bfs_[v] = bfs_[u] + 1;
      q.push_back(v);
    }
  }
}

bool RestrictedGraphView::edge(int i, int j) const {
  if (!in_view_[i] || !in_view_[j] || i == j) return false;
  const Curve& a = census_.curve(i);
  const Curve& b = census_.curve(j);
  if (intersection(a, b) != 0) return false;
  const int li = census_.layer(i);
  const int lj = census_.layer(j);
  if (li >= 0 && lj >= 0 && li != lj) return true;
  return classify_ens_pair(a, b).pair_ens;
}

std::vector<int> RestrictedGraphView::sphere(int r) const {
  std::vector<int> out;
  for (int i : vertices_) {
    if (census_.layer(i) == r) out.push_back(i);
  }
  return out;
}

std::vector<int> RestrictedGraphView::bfs_sphere(int r) const {
  std::vector<int> out;
  for (int i : vertices_) {
    if (bfs_[i] == r) out.push_back(i);
  }
  return out;
}

int RestrictedGraphView::first_disagreement(int rmax) const {
  for (int r = 0; r <= rmax; ++r) {
    if (sphere(r) != bfs_sphere(r)) return r;
  }
  return -1;
}

nlohmann::json OzSet::to_json(const SphereCensus& census) const {
  nlohmann::json m = nlohmann::json::array();
  for (std::size_t k = 0; k < members.size(); ++k) {
    m.push_back({{"curve", census.curve(members[k]).coords()}, {"d_U", projection[k]}, {"layer", census.layer(members[k])}});
  }
  nlohmann::json l = nlohmann::json::array();
  for (std::size_t k = 0; k < lifted.size(); ++k) l.push_back({{"curve", lifted[k].coords()}, {"d_U", lifted_projection[k]}});
  return {{"z", z.coords()}, {"r", r}, {"M", M}, {"k", k}, {"members", m}, {"lifted", l}, {"inclusion_ok", inclusion_ok},
          {"failures", failures}, {"note", note}};
}

MediumContext::MediumContext(const SphereCensus& census, MediumConfig cfg)
    : view_(census), cfg_(cfg), paths_(census, LowPathConfig{cfg.projection, cfg.distance}) {
  cfg_.projection.validate();
}

const SphereCensus& MediumContext::model_census(const Curve& z) {
  auto it = models_.find(z.coords());
  if (it != models_.end()) return *it->second;
  Curve mc;
  try {
    mc = complement_model(z, center());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Precondition) throw;
    throw Error(ErrorCode::Precondition, "the center crosses z; only centers inside the complement are modelled");
  }
  CensusConfig cc;
  cc.cap = std::max(cfg_.model_cap, mc.weight());
  cc.distance = cfg_.distance;
  auto sc = std::make_unique<SphereCensus>(SphereCensus::build(mc, cc));
  const SphereCensus& ref = *sc;
  models_.emplace(z.coords(), std::move(sc));
  return ref;
}

const Curve& MediumContext::lift(const Curve& z, int model_index) {
  auto key = std::make_pair(z.coords(), model_index);
  auto it = lifts_.find(key);
  if (it != lifts_.end()) return it->second;
  return lifts_.emplace(key, complement_lift(z, model_census(z).curve(model_index))).first->second;
}

int MediumContext::du_center(const Curve& z, const Curve& x) {
  auto key = std::make_pair(z.coords(), x.coords());
  auto it = du_.find(key);
  if (it != du_.end()) return it->second;
  const SphereCensus& model = model_census(z);
  const Curve mx = complement_model(z, x);
  const int i = model.index_of(mx);
  DistanceCertificate cert = i >= 0 ? model.certificate(i) : distance(model.center(), mx, cfg_.distance, &model);
  // Filling pairs past the witness search count with their lower bound.
  const int d = cert.exact() ? cert.hi : cert.lo;
  du_.emplace(key, d);
  return d;
}

OzSet oz_set(MediumContext& mc, const Curve& z) {
  const SphereCensus& census = mc.census();
  require_six(z);
  if (!z.is_pants()) throw Error(ErrorCode::NotPants, "O(z) needs a pants curve z");
  OzSet o;
  o.z = z;
  o.r = require_layer(census, z, "z");
  if (o.r < 1) throw Error(ErrorCode::Precondition, "z must lie in a sphere of radius r >= 1");
  o.M = mc.config().projection.M;
  // The center lies inside U when r = 1, so its projection is one curve.
  o.k = 0;
  const int zi = census.index_of(z);
  for (int v : census.neighbours(zi)) {
    if (!mc.view().contains(v)) continue;
    const int d = mc.du_center(z, census.curve(v));
    if (d <= o.M) continue;
    o.members.push_back(v);
    o.projection.push_back(d);
    if (census.layer(v) != o.r + 1) {
      o.inclusion_ok = false;
      o.failures.push_back("member " + std::to_string(v) + " not certified in layer r+1");
    }
  }
  const SphereCensus& model = mc.model_census(z);
  for (int v = 0; v < model.size(); ++v) {
    const auto& cert = model.certificate(v);
    const int d = cert.exact() ? cert.hi : cert.lo;
    if (d <= o.M) continue;
    const Curve& a = mc.lift(z, v);
    if (!a.is_pants() || census.index_of(a) >= 0) continue;
    o.lifted.push_back(a);
    o.lifted_projection.push_back(d);
    const auto c = mc.paths().to_center(a);
    if (!(c.exact() && c.hi == o.r + 1)) {
      o.inclusion_ok = false;
      o.failures.push_back("lifted member " + std::to_string(o.lifted.size() - 1) + " not certified in layer r+1");
    }
  }
  if (o.members.empty() && o.lifted.empty()) {
    o.note = "no member within census cap " + std::to_string(census.cap()) + " and model cap " + std::to_string(model.cap());
  }
  return o;
}

OzConnection connect_to_oz(MediumContext& mc, const Curve& z, const Curve& x, int N) {
  const SphereCensus& census = mc.census();
  const RestrictedGraphView& view = mc.view();
  const int r = require_layer(census, z, "z");
  const int xi = census.index_of(x);
  if (xi < 0 || !view.contains(xi) || !adjacent(x, z) || census.layer(xi) != r + 1) {
    throw Error(ErrorCode::Precondition, "x must be an essentially non-separating census curve in S_1(z) and S_{r+1}");
  }
  // Search in the curve graph of U: lifts that are pants curves crossing
  // the center, joined when disjoint (pants pairs are always view edges).
  const SphereCensus& model = mc.model_census(z);
  const int s = model.index_of(complement_model(z, x));
  if (s < 0) throw Error(ErrorCode::NotFoundUnderCap, "x lies beyond the model census cap");
  auto allowed = [&](int v) { return model.certificate(v).lo >= 2 && mc.lift(z, v).is_pants(); };
  auto target = [&](int v) { return model.certificate(v).lo > N; };
  auto nbrs = [&](int v) -> const std::vector<int>& { return model.neighbours(v); };
  std::vector<int> p = search(model.size(), s, nbrs, allowed, target);
  if (p.empty()) {
    throw Error(ErrorCode::NotFoundUnderCap,
                "no curve with d_U > " + std::to_string(N) + " reachable within model cap " + std::to_string(model.cap()));
  }
  OzConnection out;
  std::vector<Curve> vs;
  for (int v : p) vs.push_back(mc.lift(z, v));
  out.e = vs.back();
  out.du = mc.du_center(z, out.e);
  out.path = annotate(mc.paths(), vs, z);
  return out;
}

nlohmann::json InOzPath::to_json() const {
  return {{"path", path.to_json()}, {"inside_u", inside_u}, {"layers_ok", layers_ok}, {"failures", failures}, {"ok", ok()}};
}

InOzPath connect_in_oz(MediumContext& mc, const Curve& z, const Curve& a, const Curve& b) {
  const SphereCensus& census = mc.census();
  const int r = require_layer(census, z, "z");
  const int M = mc.config().projection.M;
  for (const Curve* p : {&a, &b}) {
    if (!adjacent(*p, z) || mc.du_center(z, *p) <= M) throw Error(ErrorCode::Precondition, "endpoints must lie in O(z)");
  }
  InOzPath out;
  std::vector<Curve> vs{a};
  if (a != b) {
    // A path between the projections in the curve graph of U that keeps
    // d_U(., c) > M, found in the model census of U.
    const SphereCensus& model = mc.model_census(z);
    const int s = model.index_of(complement_model(z, a));
    const int t = model.index_of(complement_model(z, b));
    if (s < 0 || t < 0) throw Error(ErrorCode::NotFoundUnderCap, "endpoint beyond the model census cap");
    auto far = [&](int v) { return model.certificate(v).lo > M; };
    auto nbrs = [&](int v) -> const std::vector<int>& { return model.neighbours(v); };
    std::vector<int> p = search(model.size(), s, nbrs, far, [&](int v) { return v == t; });
    if (p.empty()) {
      throw Error(ErrorCode::NotFoundUnderCap,
                  "no path far from the center inside U within model cap " + std::to_string(model.cap()));
    }
    vs.clear();
    for (int v : p) vs.push_back(complement_lift(z, model.curve(v)));
  }
  out.path = annotate(mc.paths(), vs, z);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string tag = "vertex " + std::to_string(i) + ": ";
    if (vs[i] == z || intersection(vs[i], z) != 0) {
      out.inside_u = false;
      out.failures.push_back(tag + "not inside U");
    }
    const auto& c = out.path.notes[i].center;
    if (!(c.exact() && c.hi == r + 1)) {
      out.layers_ok = false;
      out.failures.push_back(tag + "not certified in layer r+1");
    }
  }
  return out;
}

Curve nearest_ens(const SphereCensus& census, const Curve& x) {
  require_six(x);
  const int l = require_layer(census, x, "x");
  if (x.is_pants()) return x;
  const int xi = census.index_of(x);
  for (int v : census.neighbours(xi)) {
    if (census.layer(v) == l && census.curve(v).is_pants()) return census.curve(v);
  }
  throw Error(ErrorCode::NotFoundUnderCap, "no adjacent pants curve in the same layer within census cap");
}

nlohmann::json MediumPath::to_json() const {
  nlohmann::json vp = nlohmann::json::array();
  for (const Curve& v : view_path) vp.push_back(v.coords());
  return {{"path", path.to_json()}, {"view_path", vp}, {"eliminated", eliminated}, {"layers_ok", layers_ok},
          {"failures", failures}, {"ok", ok()}};
}

MediumPath medium_sphere_path(MediumContext& mc, const Curve& x, const Curve& y) {
  const SphereCensus& census = mc.census();
  const RestrictedGraphView& view = mc.view();
  const int lx = require_layer(census, x, "x");
  const int ly = require_layer(census, y, "y");
  if (lx != ly) throw Error(ErrorCode::Precondition, "x and y must lie in the same sphere");
  const int r = lx - 1;
  if (r < 1) throw Error(ErrorCode::Precondition, "the sphere construction needs r > 0");
  std::string stage;
  try {
    MediumPath out;
    stage = "nearest_ens";
    const Curve x2 = nearest_ens(census, x);
    const Curve y2 = nearest_ens(census, y);

    // A view path in S_r^c + S_{r+1}^c with no edge inside S_r^c.
    stage = "view_path";
    const int s = census.index_of(x2);
    const int t = census.index_of(y2);
    auto allowed = [&](int v) { return census.layer(v) == r || census.layer(v) == r + 1; };
    std::vector<std::vector<int>> nb(census.size());
    for (int v : view.vertices()) {
      for (int w : view.neighbours(v)) {
        if (!(census.layer(v) == r && census.layer(w) == r)) nb[v].push_back(w);
      }
    }
    auto nbrs = [&](int v) -> const std::vector<int>& { return nb[v]; };
    std::vector<int> vp = search(census.size(), s, nbrs, allowed, [&](int v) { return v == t; });
    if (vp.empty()) throw Error(ErrorCode::NotFoundUnderCap, "no view path within census cap");
    for (int v : vp) out.view_path.push_back(census.curve(v));

    stage = "eliminate";
    std::vector<Curve> full{x};
    if (x2 != x) full.push_back(x2);
    const int N = mc.config().target_or_default();
    for (std::size_t i = 1; i < vp.size(); ++i) {
      if (census.layer(vp[i]) != r) {
        full.push_back(census.curve(vp[i]));
        continue;
      }
      // vp[i] is in S_r^c, its neighbours on the path are in S_{r+1}^c.
      const Curve& z = census.curve(vp[i]);
      const Curve& prev = census.curve(vp[i - 1]);
      const Curve& next = census.curve(vp[i + 1]);
      stage = "connect_to_oz";
      OzConnection to1 = connect_to_oz(mc, z, prev, N);
      OzConnection to2 = connect_to_oz(mc, z, next, N);
      stage = "connect_in_oz";
      InOzPath mid = connect_in_oz(mc, z, to1.e, to2.e);
      if (!mid.ok()) throw Error(ErrorCode::AuditFailure, "path inside O(z) failed its audit");
      stage = "eliminate";
      full.insert(full.end(), to1.path.vertices.begin() + 1, to1.path.vertices.end());
      full.insert(full.end(), mid.path.vertices.begin() + 1, mid.path.vertices.end());
      full.insert(full.end(), to2.path.vertices.rbegin() + 1, to2.path.vertices.rend());
      ++out.eliminated;
      ++i;  // next is already on the path
    }
    if (y2 != y) full.push_back(y);
    stage = "audit";
    out.path = annotate(mc.paths(), erase_loops(full), std::nullopt);
    for (std::size_t i = 0; i < out.path.vertices.size(); ++i) {
      const auto& c = out.path.notes[i].center;
      if (!(c.exact() && c.hi == r + 1)) {
        out.layers_ok = false;
        out.failures.push_back("vertex " + std::to_string(i) + " not certified in S_{r+1}");
      }
    }
    return out;
  } catch (const Error& e) {
    throw Error(e.code(), "stage " + stage + ": " + e.what());
  }
}

nlohmann::json MediumReport::to_json() const {
  return {{"r", r},
          {"view_disagreement", view_disagreement},
          {"oz", {{"samples", oz_samples}, {"passed", oz_passed}, {"empty", oz_empty}}},
          {"paths", {{"samples", path_samples}, {"passed", path_passed}, {"cap_exhaustion", path_cap}}},
          {"ok", ok()},
          {"records", records}};
}

MediumReport verify_medium(MediumContext& mc, int r, int samples, unsigned long long seed) {
  const SphereCensus& census = mc.census();
  MediumReport rep;
  rep.r = r;
  rep.view_disagreement = mc.view().first_disagreement(std::min(3, census.max_layer()));
  std::mt19937_64 rng(seed);

  std::vector<int> zs;
  for (int z : census.layer_members(r)) {
    if (census.curve(z).is_pants()) zs.push_back(z);
  }
  std::shuffle(zs.begin(), zs.end(), rng);
  if (static_cast<int>(zs.size()) > samples) zs.resize(samples);
  for (int z : zs) {
    ++rep.oz_samples;
    nlohmann::json rec{{"stage", "oz_set"}, {"z", census.curve(z).coords()}};
    try {
      OzSet o = oz_set(mc, census.curve(z));
      rec["members"] = o.members.size();
      rec["lifted"] = o.lifted.size();
      rec["inclusion_ok"] = o.inclusion_ok;
      if (!o.failures.empty()) rec["failures"] = o.failures;
      if (o.members.empty() && o.lifted.empty()) {
        ++rep.oz_empty;
        rec["note"] = o.note;
      }
      if (o.inclusion_ok) ++rep.oz_passed;
    } catch (const Error& e) {
      rec["error"] = e.what();
    }
    rep.records.push_back(rec);
  }

  const std::vector<int> up = census.layer_members(r + 1);
  if (up.size() >= 2) {
    std::uniform_int_distribution<std::size_t> pick(0, up.size() - 1);
    std::set<std::pair<int, int>> seen;
    const std::size_t total = up.size() * (up.size() - 1) / 2;
    while (static_cast<int>(seen.size()) < samples && seen.size() < total) {
      int a = up[pick(rng)];
      int b = up[pick(rng)];
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      if (!seen.insert({a, b}).second) continue;
      ++rep.path_samples;
      nlohmann::json rec{{"stage", "medium_sphere_path"}, {"x", census.curve(a).coords()}, {"y", census.curve(b).coords()}};
      try {
        MediumPath p = medium_sphere_path(mc, census.curve(a), census.curve(b));
        rec["length"] = static_cast<int>(p.path.vertices.size()) - 1;
        rec["eliminated"] = p.eliminated;
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

}  // namespace sphereprobe

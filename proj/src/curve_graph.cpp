#include "sphereprobe/curve_graph.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <queue>
#include <set>
#include <sstream>

#include "sphereprobe/error.hpp"

namespace sphereprobe {

namespace {

bool subset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Disjoint separating curves have nested sides.
bool sides_compatible(const Curve& a, const Curve& b) {
  for (const auto* sa : {&a.pants_side(), &a.other_side()}) {
    for (const auto* sb : {&b.pants_side(), &b.other_side()}) {
      if (subset(*sa, *sb)) return true;
    }
  }
  return false;
}

std::size_t intersect_count(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out.size();
}

nlohmann::json coords_list(const std::vector<Curve>& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : path) j.push_back(c.coords());
  return j;
}

Evidence evidence_from_string(const std::string& s) {
  if (s == "EQUAL") return Evidence::Equal;
  if (s == "DISTINCT") return Evidence::Distinct;
  if (s == "INTERSECTING") return Evidence::Intersecting;
  if (s == "FILLING") return Evidence::Filling;
  if (s == "EXHAUSTION") return Evidence::Exhaustion;
  throw Error(ErrorCode::Io, "unknown evidence tag '" + s + "'");
}

DistanceCertificate certificate_from_json(const nlohmann::json& j, const SurfacePtr& s) {
  DistanceCertificate c;
  c.lo = j.at("lo").get<int>();
  c.hi = j.at("hi").get<int>();
  c.evidence = evidence_from_string(j.at("evidence").get<std::string>());
  c.exhaustion_bound = j.value("exhaustion_bound", 0);
  for (const auto& w : j.at("witness")) c.witness.push_back(Curve::from_coords(s, w.get<std::vector<int>>()));
  return c;
}

std::string fnv_hex(const std::string& s) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char ch : s) h = (h ^ ch) * 1099511628211ull;
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace

const char* to_string(Evidence e) {
  switch (e) {
    case Evidence::Equal: return "EQUAL";
    case Evidence::Distinct: return "DISTINCT";
    case Evidence::Intersecting: return "INTERSECTING";
    case Evidence::Filling: return "FILLING";
    case Evidence::Exhaustion: return "EXHAUSTION";
  }
  return "?";
}

nlohmann::json DistanceCertificate::to_json() const {
  nlohmann::json j;
  j["lo"] = lo;
  j["hi"] = hi;
  j["evidence"] = sphereprobe::to_string(evidence);
  j["exact"] = exact();
  j["witness"] = coords_list(witness);
  if (evidence == Evidence::Exhaustion) j["exhaustion_bound"] = exhaustion_bound;
  return j;
}

bool adjacent(const Curve& a, const Curve& b) {
  require_same_surface(a, b);
  return a != b && intersection(a, b) == 0;
}

bool fills(const Curve& a, const Curve& b) {
  require_same_surface(a, b);
  if (a.surface()->punctures() != 5) throw Error(ErrorCode::Precondition, "filling test is implemented for five punctures");
  if (a == b || intersection(a, b) == 0) return false;
  return FareyFrame(a).descend(b).value > 0;
}

DistanceCertificate distance(const Curve& a, const Curve& b, const DistanceConfig& cfg, const SphereCensus* census) {
  require_same_surface(a, b);
  DistanceCertificate cert;
  if (a == b) {
    cert.lo = cert.hi = 0;
    cert.evidence = Evidence::Equal;
    cert.witness = {a};
    return cert;
  }
  if (intersection(a, b) == 0) {
    cert.lo = cert.hi = 1;
    cert.evidence = Evidence::Distinct;
    cert.witness = {a, b};
    return cert;
  }
  if (a.surface()->punctures() == 5) {
    std::unique_ptr<FareyFrame> own_a;
    const FareyFrame* fa = nullptr;
    if (census) {
      fa = &census->frame(a);
    } else {
      own_a = std::make_unique<FareyFrame>(a);
      fa = own_a.get();
    }
    auto d = fa->descend(b);
    if (d.value == 0) {
      cert.lo = cert.hi = 2;
      cert.evidence = Evidence::Intersecting;
      cert.witness = {a, d.minimiser, b};
      return cert;
    }
    cert.lo = 3;
    cert.evidence = Evidence::Filling;
    // Witnesses come with known standardizations; descending b in their
    // frames avoids standardizing b, which is slow for long curves.
    for (const auto& w : fa->neighbourhood(b, cfg.witness_bound, cfg.witness_spread)) {
      std::unique_ptr<FareyFrame> own_w;
      const FareyFrame* fw = nullptr;
      if (census) {
        fw = &census->frame(w.curve, &w.st);
      } else {
        own_w = std::make_unique<FareyFrame>(w.curve, w.st);
        fw = own_w.get();
      }
      auto e = fw->descend(b);
      if (e.value == 0) {
        cert.hi = 3;
        cert.witness = {a, w.curve, e.minimiser, b};
        return cert;
      }
    }
    cert.lo = 4;
    cert.evidence = Evidence::Exhaustion;
    cert.exhaustion_bound = cfg.witness_bound;
    return cert;
  }
  // Six punctures: common neighbours among census curves.
  if (census) {
    for (int i = 0; i < census->size(); ++i) {
      const Curve& w = census->curve(i);
      if (w == a || w == b) continue;
      if (!sides_compatible(w, a) || !sides_compatible(w, b)) continue;
      if (disjoint_by_sum(w, a) && disjoint_by_sum(w, b)) {
        cert.lo = cert.hi = 2;
        cert.evidence = Evidence::Intersecting;
        cert.witness = {a, w, b};
        return cert;
      }
    }
  }
  cert.lo = 3;
  cert.evidence = Evidence::Exhaustion;
  cert.exhaustion_bound = census ? census->cap() : 0;
  return cert;
}

bool audit_certificate(const DistanceCertificate& cert, const Curve& a, const Curve& b) {
  if (cert.hi >= 0) {
    if (cert.witness.empty() || cert.witness.front() != a || cert.witness.back() != b) return false;
    if (static_cast<int>(cert.witness.size()) - 1 != cert.hi) return false;
    for (std::size_t k = 0; k + 1 < cert.witness.size(); ++k) {
      if (!adjacent(cert.witness[k], cert.witness[k + 1])) return false;
    }
  }
  switch (cert.evidence) {
    case Evidence::Equal: return a == b && cert.lo == 0;
    case Evidence::Distinct: return a != b && cert.lo <= 1;
    case Evidence::Intersecting: return intersection(a, b) > 0 && cert.lo <= 2;
    case Evidence::Filling: return cert.lo <= 3 && fills(a, b);
    case Evidence::Exhaustion: return intersection(a, b) > 0;
  }
  return false;
}

std::vector<Curve> enumerate_curves(const SurfacePtr& s, int cap, int max_curves) {
  const int E = s->edge_count();
  // Order edges so that triangles close as early as possible.
  std::vector<int> order;
  std::vector<char> used(E, 0);
  std::vector<std::vector<int>> close_at(E);
  while (static_cast<int>(order.size()) < E) {
    int best = -1, best_score = -1;
    for (int e = 0; e < E; ++e) {
      if (used[e]) continue;
      int score = 0;
      for (int t = 0; t < s->triangle_count(); ++t) {
        const auto& sd = s->triangle(t).sides;
        if (std::find(sd.begin(), sd.end(), e) == sd.end()) continue;
        int known = 0;
        for (int x : sd) known += used[x];
        score += known * known + 1;
      }
      if (score > best_score) {
        best_score = score;
        best = e;
      }
    }
    used[best] = 1;
    order.push_back(best);
    for (int t = 0; t < s->triangle_count(); ++t) {
      const auto& sd = s->triangle(t).sides;
      if (std::find(sd.begin(), sd.end(), best) == sd.end()) continue;
      if (used[sd[0]] && used[sd[1]] && used[sd[2]]) close_at[order.size() - 1].push_back(t);
    }
  }

  std::vector<Curve> out;
  std::vector<int> w(E, 0);
  std::function<void(int, int)> rec = [&](int k, int rem) {
    if (k == E) {
      auto comps = trace_components(*s, w);
      if (comps.size() != 1) return;
      for (int p = 0; p < s->punctures(); ++p) {
        if (w == s->link_coords(p)) return;
      }
      out.push_back(Curve::from_coords(s, w));
      if (static_cast<int>(out.size()) > max_curves) {
        throw Error(ErrorCode::ResourceCap, "census exceeds " + std::to_string(max_curves) + " curves");
      }
      return;
    }
    const int e = order[k];
    for (int v = 0; v <= rem; ++v) {
      w[e] = v;
      bool ok = true;
      for (int t : close_at[k]) {
        const auto& sd = s->triangle(t).sides;
        int x = w[sd[0]], y = w[sd[1]], z = w[sd[2]];
        if ((x + y + z) % 2 || x > y + z || y > x + z || z > x + y) {
          ok = false;
          break;
        }
      }
      if (ok) rec(k + 1, rem - v);
    }
    w[e] = 0;
  };
  rec(0, cap);
  std::sort(out.begin(), out.end());
  return out;
}

SphereCensus SphereCensus::build(const Curve& center, const CensusConfig& cfg) {
  if (cfg.cap < 1) throw Error(ErrorCode::InvalidArgument, "census cap must be positive");
  SphereCensus c;
  c.center_ = center;
  c.cfg_ = cfg;
  c.curves_ = enumerate_curves(center.surface(), cfg.cap, cfg.max_curves);
  if (!std::binary_search(c.curves_.begin(), c.curves_.end(), center)) {
    c.curves_.insert(std::lower_bound(c.curves_.begin(), c.curves_.end(), center), center);
  }
  for (int i = 0; i < c.size(); ++i) c.index_.emplace(c.curves_[i], i);
  c.adj_.assign(c.size(), {});
  for (int i = 0; i < c.size(); ++i) {
    for (int j = i + 1; j < c.size(); ++j) {
      if (!sides_compatible(c.curves_[i], c.curves_[j])) continue;
      if (disjoint_by_sum(c.curves_[i], c.curves_[j])) {
        c.adj_[i].push_back(j);
        c.adj_[j].push_back(i);
      }
    }
  }
  c.certify();
  return c;
}

SphereCensus SphereCensus::recentred(const Curve& p) const {
  if (index_of(p) < 0) throw Error(ErrorCode::Precondition, "recentring needs a census curve");
  SphereCensus c;
  c.center_ = p;
  c.cfg_ = cfg_;
  c.curves_ = curves_;
  c.index_ = index_;
  c.adj_ = adj_;
  c.frames_ = frames_;
  c.certify();
  return c;
}

void SphereCensus::certify() {
  const int n = size();
  certs_.assign(n, {});
  layer_.assign(n, -1);
  const int ci = index_of(center_);
  const bool five = surface()->punctures() == 5;
  // Distances up to 2 first (exact on five punctures).
  for (int i = 0; i < n; ++i) {
    const Curve& x = curves_[i];
    if (i == ci) {
      certs_[i] = distance(center_, x, cfg_.distance, this);
    } else if (std::binary_search(adj_[ci].begin(), adj_[ci].end(), i)) {
      DistanceCertificate d;
      d.lo = d.hi = 1;
      d.evidence = Evidence::Distinct;
      d.witness = {center_, x};
      certs_[i] = d;
    } else if (five) {
      auto d = frame(center_).descend(x);
      DistanceCertificate cert;
      if (d.value == 0) {
        cert.lo = cert.hi = 2;
        cert.evidence = Evidence::Intersecting;
        cert.witness = {center_, d.minimiser, x};
      } else {
        cert.lo = 3;
        cert.evidence = Evidence::Filling;
      }
      certs_[i] = cert;
    } else {
      DistanceCertificate cert;
      cert.lo = 2;
      cert.evidence = Evidence::Intersecting;
      for (int w : adj_[i]) {
        if (std::binary_search(adj_[ci].begin(), adj_[ci].end(), w)) {
          cert.hi = 2;
          cert.witness = {center_, curves_[w], x};
          break;
        }
      }
      if (cert.hi < 0) {
        cert.lo = 3;
        cert.evidence = Evidence::Exhaustion;
        cert.exhaustion_bound = cfg_.cap;
      }
      certs_[i] = cert;
    }
  }
  // Census neighbours one layer down give witness paths; on five punctures
  // a Farey search may find distance-3 witnesses outside the census.
  for (int i = 0; i < n; ++i) {
    if (certs_[i].hi >= 0) continue;
    for (int j : adj_[i]) {
      if (certs_[j].exact() && certs_[j].hi == certs_[i].lo - 1) {
        certs_[i].hi = certs_[i].lo;
        certs_[i].witness = certs_[j].witness;
        certs_[i].witness.push_back(curves_[i]);
        break;
      }
    }
    if (certs_[i].hi < 0 && five) {
      auto d = distance(center_, curves_[i], cfg_.distance, this);
      if (d.hi >= 0) {
        certs_[i] = d;
      } else {
        certs_[i].lo = d.lo;
        certs_[i].evidence = d.evidence;
        certs_[i].exhaustion_bound = d.exhaustion_bound;
      }
    }
  }
  // Upper bounds by census search for the rest.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      for (int j : adj_[i]) {
        if (certs_[j].hi < 0) continue;
        const int cand = certs_[j].hi + 1;
        if (certs_[i].hi < 0 || cand < certs_[i].hi) {
          certs_[i].hi = cand;
          certs_[i].witness = certs_[j].witness;
          certs_[i].witness.push_back(curves_[i]);
          changed = true;
        }
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (certs_[i].hi >= 0 && certs_[i].hi == certs_[i].lo) layer_[i] = certs_[i].hi;
  }
}

const FareyFrame& SphereCensus::frame(const Curve& z, const Standardization* hint) const {
  auto it = frames_.find(z.coords());
  if (it != frames_.end()) return *it->second;
  auto f = hint ? std::make_shared<FareyFrame>(z, *hint) : std::make_shared<FareyFrame>(z);
  frames_.emplace(z.coords(), f);
  return *f;
}

bool SphereCensus::nonisolated(int i) const {
  if (layer_[i] < 1) return false;
  for (int j : adj_[i]) {
    if (layer_[j] == layer_[i]) return true;
  }
  return false;
}

int SphereCensus::index_of(const Curve& c) const {
  auto it = index_.find(c);
  return it == index_.end() ? -1 : it->second;
}

std::vector<int> SphereCensus::layer_members(int r) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (layer_[i] == r) out.push_back(i);
  }
  return out;
}

std::vector<int> SphereCensus::nonisolated_members(int r) const {
  std::vector<int> out;
  for (int i : layer_members(r)) {
    if (nonisolated(i)) out.push_back(i);
  }
  return out;
}

int SphereCensus::max_layer() const {
  int m = 0;
  for (int l : layer_) m = std::max(m, l);
  return m;
}

std::vector<std::pair<int, int>> SphereCensus::pairs_with_intersection(int r, int value) const {
  std::vector<std::pair<int, int>> out;
  auto members = layer_members(r);
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      if (intersection(curves_[members[a]], curves_[members[b]]) == value) out.emplace_back(members[a], members[b]);
    }
  }
  return out;
}

std::string SphereCensus::config_hash(const Curve& center, const CensusConfig& cfg) {
  std::ostringstream os;
  os << "census-v1|" << center.surface()->name() << "|";
  for (int x : center.coords()) os << x << ",";
  os << "|" << cfg.cap << "|" << cfg.max_curves << "|" << cfg.distance.witness_bound << "|"
     << cfg.distance.witness_spread;
  return fnv_hex(os.str());
}

void SphereCensus::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write census file " + path);
  nlohmann::json header;
  header["format"] = "sphereprobe-census";
  header["version"] = 1;
  header["surface"] = surface()->name();
  header["center"] = center_.coords();
  header["cap"] = cfg_.cap;
  header["max_curves"] = cfg_.max_curves;
  header["witness_bound"] = cfg_.distance.witness_bound;
  header["witness_spread"] = cfg_.distance.witness_spread;
  header["config_hash"] = config_hash();
  header["size"] = size();
  out << header.dump() << "\n";
  for (int i = 0; i < size(); ++i) {
    nlohmann::json rec;
    rec["id"] = i;
    rec["coords"] = curves_[i].coords();
    rec["layer"] = layer_[i];
    rec["certificate"] = certs_[i].to_json();
    rec["neighbors"] = adj_[i];
    out << rec.dump() << "\n";
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing census file " + path);
}

SphereCensus SphereCensus::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read census file " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Io, "empty census file " + path);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, std::string("bad census header: ") + e.what());
  }
  if (header.value("format", "") != "sphereprobe-census" || header.value("version", 0) != 1) {
    throw Error(ErrorCode::Io, "unsupported census format in " + path);
  }
  SphereCensus c;
  auto s = Surface::by_name(header.at("surface").get<std::string>());
  c.center_ = Curve::from_coords(s, header.at("center").get<std::vector<int>>());
  c.cfg_.cap = header.at("cap").get<int>();
  c.cfg_.max_curves = header.at("max_curves").get<int>();
  c.cfg_.distance.witness_bound = header.at("witness_bound").get<int>();
  c.cfg_.distance.witness_spread = header.at("witness_spread").get<int>();
  const int n = header.at("size").get<int>();
  c.curves_.reserve(n);
  std::vector<nlohmann::json> recs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    recs.push_back(nlohmann::json::parse(line));
  }
  if (static_cast<int>(recs.size()) != n) throw Error(ErrorCode::Io, "census record count mismatch in " + path);
  for (const auto& r : recs) c.curves_.push_back(Curve::from_coords(s, r.at("coords").get<std::vector<int>>()));
  for (int i = 0; i < n; ++i) c.index_.emplace(c.curves_[i], i);
  for (const auto& r : recs) {
    c.certs_.push_back(certificate_from_json(r.at("certificate"), s));
    c.layer_.push_back(r.at("layer").get<int>());
    c.adj_.push_back(r.at("neighbors").get<std::vector<int>>());
  }
  if (c.config_hash() != header.at("config_hash").get<std::string>()) {
    throw Error(ErrorCode::Io, "census config hash mismatch in " + path);
  }
  return c;
}

bool is_pentagon(const std::array<Curve, 5>& a) {
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) {
      if (a[i] == a[j]) return false;
    }
  }
  for (int i = 0; i < 5; ++i) {
    require_same_surface(a[i], a[(i + 1) % 5]);
    if (!a[i].is_pants() || a[i].surface()->punctures() != 5) return false;
  }
  for (int i = 0; i < 5; ++i) {
    const Curve& x = a[i];
    const Curve& y = a[(i + 1) % 5];
    const Curve& z = a[(i + 2) % 5];
    if (intersection(x, y) != 2 || intersection(x, z) != 0) return false;
    if (intersect_count(x.pants_side(), y.pants_side()) != 1) return false;
    if (intersect_count(x.pants_side(), z.pants_side()) != 0) return false;
  }
  return true;
}

bool is_pentagon_cycle(const std::array<Curve, 5>& v) {
  return is_pentagon({v[0], v[2], v[4], v[1], v[3]});
}

nlohmann::json PentagonWitness::to_json() const {
  nlohmann::json j;
  j["curves"] = nlohmann::json::array();
  for (int i = 0; i < 5; ++i) {
    nlohmann::json c = curves[i].to_json();
    c["punctures"] = pairs[i];
    j["curves"].push_back(c);
  }
  j["cycle_order"] = {1, 3, 5, 2, 4};
  return j;
}

namespace {

PentagonWitness make_witness(const std::array<Curve, 5>& a) {
  PentagonWitness w;
  w.curves = a;
  for (int i = 0; i < 5; ++i) w.pairs[i] = a[i].pants_side();
  return w;
}

void require_layer(const SphereCensus& census, int idx, const char* what) {
  if (idx < 0) throw Error(ErrorCode::Precondition, std::string(what) + " is not a census curve");
  if (census.layer(idx) < 0) throw Error(ErrorCode::Precondition, std::string(what) + " has no certified layer");
}

}  // namespace

PentagonWitness complete_pentagon_edge(const SphereCensus& census, const Curve& a1, const Curve& a3) {
  const int i1 = census.index_of(a1);
  const int i3 = census.index_of(a3);
  require_layer(census, i1, "a1");
  require_layer(census, i3, "a3");
  if (!adjacent(a1, a3)) throw Error(ErrorCode::Precondition, "a1 and a3 must be adjacent");
  if (census.layer(i1) != census.layer(i3)) throw Error(ErrorCode::Precondition, "a1 and a3 must share a layer");
  const int r = census.layer(i1) + 1;
  auto ok_layer = [&](int i) { return census.layer(i) == r || census.layer(i) == r + 1; };
  for (int i4 : census.neighbours(i1)) {
    if (!ok_layer(i4) || intersection(census.curve(i4), a3) != 2) continue;
    for (int i5 : census.neighbours(i3)) {
      if (!ok_layer(i5)) continue;
      const Curve& a5 = census.curve(i5);
      if (intersection(a5, a1) != 2 || intersection(a5, census.curve(i4)) != 2) continue;
      for (int i2 : census.neighbours(i4)) {
        if (!ok_layer(i2)) continue;
        const Curve& a2 = census.curve(i2);
        if (!std::binary_search(census.neighbours(i5).begin(), census.neighbours(i5).end(), i2)) continue;
        std::array<Curve, 5> p{a1, a2, a3, census.curve(i4), a5};
        if (is_pentagon(p)) return make_witness(p);
      }
    }
  }
  throw Error(ErrorCode::NotFoundUnderCap,
              "no pentagon completion within census cap " + std::to_string(census.cap()));
}

PentagonWitness complete_pentagon_wedge(const SphereCensus& census, const Curve& a1, const Curve& a3, const Curve& a4) {
  const int i1 = census.index_of(a1);
  const int i3 = census.index_of(a3);
  const int i4 = census.index_of(a4);
  require_layer(census, i1, "a1");
  require_layer(census, i3, "a3");
  require_layer(census, i4, "a4");
  if (!adjacent(a1, a3) || !adjacent(a1, a4)) throw Error(ErrorCode::Precondition, "a3 and a4 must be adjacent to a1");
  if (intersection(a3, a4) != 2) throw Error(ErrorCode::Precondition, "i(a3, a4) must be 2");
  const int r = census.layer(i1) + 1;
  if (census.layer(i3) != r || census.layer(i4) != r) {
    throw Error(ErrorCode::Precondition, "a3 and a4 must lie one layer above a1");
  }
  auto ok_layer = [&](int i) { return census.layer(i) == r || census.layer(i) == r + 1; };
  for (int i2 : census.neighbours(i4)) {
    if (!ok_layer(i2)) continue;
    const Curve& a2 = census.curve(i2);
    if (intersection(a2, a1) != 2 || intersection(a2, a3) != 2) continue;
    for (int i5 : census.neighbours(i3)) {
      if (!ok_layer(i5)) continue;
      const Curve& a5 = census.curve(i5);
      if (!std::binary_search(census.neighbours(i2).begin(), census.neighbours(i2).end(), i5)) continue;
      if (intersection(a5, a4) != 2 || intersection(a5, a1) != 2) continue;
      std::array<Curve, 5> p{a1, a2, a3, a4, a5};
      if (is_pentagon(p)) return make_witness(p);
    }
  }
  throw Error(ErrorCode::NotFoundUnderCap,
              "no pentagon completion within census cap " + std::to_string(census.cap()));
}

GirthReport check_girth(const SphereCensus& census) {
  GirthReport rep;
  const int n = census.size();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j : census.neighbours(i)) adj[i][j] = 1;
  }
  for (int i = 0; i < n; ++i) {
    for (int j : census.neighbours(i)) {
      if (j <= i) continue;
      for (int k : census.neighbours(j)) {
        if (k <= j || !adj[i][k]) continue;
        ++rep.triangles;
        if (rep.short_cycles.size() < 20) rep.short_cycles.push_back({i, j, k, -1});
      }
    }
  }
  // Each 4-cycle has two diagonals; count common-neighbour pairs.
  long long quad2 = 0;
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      long long common = 0;
      int first = -1, second = -1;
      for (int j : census.neighbours(i)) {
        if (adj[k][j]) {
          ++common;
          if (first < 0) first = j; else if (second < 0) second = j;
        }
      }
      if (common >= 2) {
        quad2 += common * (common - 1) / 2;
        if (rep.short_cycles.size() < 20) rep.short_cycles.push_back({i, first, k, second});
      }
    }
  }
  rep.quadrilaterals = quad2 / 2;
  // 5-cycles with smallest vertex first and v1 < v4.
  for (int v0 = 0; v0 < n; ++v0) {
    for (int v1 : census.neighbours(v0)) {
      if (v1 <= v0) continue;
      for (int v2 : census.neighbours(v1)) {
        if (v2 <= v0 || v2 == v1) continue;
        for (int v3 : census.neighbours(v2)) {
          if (v3 <= v0 || v3 == v1 || v3 == v2) continue;
          for (int v4 : census.neighbours(v3)) {
            if (v4 <= v0 || v4 == v1 || v4 == v2 || v4 == v3 || v4 < v1) continue;
            if (!adj[v4][v0]) continue;
            ++rep.pentagons_checked;
            std::array<Curve, 5> cyc{census.curve(v0), census.curve(v1), census.curve(v2), census.curve(v3),
                                     census.curve(v4)};
            if (!is_pentagon_cycle(cyc)) {
              ++rep.pentagon_failures;
              if (rep.failing_cycles.size() < 20) rep.failing_cycles.push_back({v0, v1, v2, v3, v4});
            }
          }
        }
      }
    }
  }
  return rep;
}

nlohmann::json GirthReport::to_json(const SphereCensus& census) const {
  nlohmann::json j;
  j["triangles"] = triangles;
  j["quadrilaterals"] = quadrilaterals;
  j["five_cycles"] = pentagons_checked;
  j["five_cycles_not_pentagons"] = pentagon_failures;
  j["short_cycle_witnesses"] = nlohmann::json::array();
  for (const auto& c : short_cycles) {
    nlohmann::json cyc = nlohmann::json::array();
    for (int v : c) {
      if (v >= 0) cyc.push_back(census.curve(v).coords());
    }
    j["short_cycle_witnesses"].push_back(cyc);
  }
  j["failing_five_cycles"] = nlohmann::json::array();
  for (const auto& c : failing_cycles) {
    nlohmann::json cyc = nlohmann::json::array();
    for (int v : c) cyc.push_back(census.curve(v).coords());
    j["failing_five_cycles"].push_back(cyc);
  }
  return j;
}

VertexFlags vertex_flags(const SphereCensus& census, const Curve& x) {
  const int i = census.index_of(x);
  if (i < 0 || census.layer(i) < 1) throw Error(ErrorCode::Precondition, "vertex flags need a census curve with layer >= 1");
  VertexFlags f;
  f.layer = census.layer(i);
  f.cap = census.cap();
  for (int j : census.neighbours(i)) {
    if (census.layer(j) == f.layer - 1) ++f.down;
    if (census.layer(j) == f.layer) ++f.same;
  }
  f.unique_backtracking = f.down == 1;
  f.no_sidestepping = f.same == 0;
  f.forward_facing = f.unique_backtracking && f.no_sidestepping;
  return f;
}

}  // namespace sphereprobe

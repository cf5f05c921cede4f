#include "sphereprobe/cli_io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "sphereprobe/bundle.hpp"
#include "sphereprobe/error.hpp"
#include "sphereprobe/medium.hpp"

namespace sphereprobe {

namespace fs = std::filesystem;

namespace {

std::string fnv_hex(const std::string& s) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char ch : s) h = (h ^ ch) * 1099511628211ull;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", h);
  return buf;
}

bool five(const SphereCensus& census) { return census.surface()->punctures() == 5; }

void require_five(const SphereCensus& census, const std::string& suite) {
  if (!five(census)) throw Error(ErrorCode::Precondition, suite + " suite needs a five-punctured surface");
}

int or_default(int v, int d) { return v > 0 ? v : d; }

ProjectionConfig projection_config(const RunConfig& cfg, int default_m) {
  ProjectionConfig pc;
  pc.M = or_default(cfg.bgi_m, default_m);
  pc.slack = cfg.slack;
  pc.max_twist_power = cfg.max_twist_power;
  pc.validate();
  return pc;
}

DistanceConfig distance_config(const RunConfig& cfg) {
  DistanceConfig dc;
  dc.witness_bound = cfg.witness_bound;
  return dc;
}

bool failing(const nlohmann::json& rec) {
  if (!rec.is_object()) return false;
  if (rec.contains("error")) return true;
  for (const char* key : {"pass", "ok"}) {
    auto it = rec.find(key);
    if (it != rec.end() && it->is_boolean() && !it->get<bool>()) return true;
  }
  return false;
}

// Census used for stability checks: cached like any other census.
SphereCensus load_or_build(const RunConfig& cfg) {
  cmd_census(cfg);
  return SphereCensus::load(census_cache_path(cfg));
}

VerificationReport run_girth(const RunConfig& cfg, const SphereCensus& census) {
  require_five(census, "girth");
  VerificationReport rep;
  rep.suite = "girth";
  rep.config = cfg;
  auto g = check_girth(census);
  rep.summary = g.to_json(census);
  rep.summary["census_size"] = census.size();
  rep.contradictions = g.triangles + g.quadrilaterals + g.pentagon_failures;
  return rep;
}

VerificationReport run_pentagon(const RunConfig& cfg, const SphereCensus& census) {
  require_five(census, "pentagon");
  VerificationReport rep;
  rep.suite = "pentagon";
  rep.config = cfg;
  const int samples = or_default(cfg.samples, 20);
  auto g = check_girth(census);
  rep.contradictions += g.pentagon_failures;
  std::mt19937_64 rng(cfg.seed);

  // The completions promise curves in layers r, r + 1 (r = layer(a1) + 1).
  auto audit = [&](const PentagonWitness& w, int r, std::vector<int> fresh, nlohmann::json& rec) {
    bool ok = is_pentagon(w.curves);
    for (int k : fresh) {
      const int i = census.index_of(w.curves[k]);
      const int l = i < 0 ? -1 : census.layer(i);
      if (l != r && l != r + 1) ok = false;
    }
    rec["witness"] = w.to_json();
    rec["pass"] = ok;
    if (!ok) ++rep.contradictions;
  };

  std::vector<std::pair<int, int>> edges;
  std::vector<std::array<int, 3>> wedges;
  // Completions of inputs near the cap mostly leave the census, so inputs
  // are drawn from curves of weight at most half the cap.
  const int headroom = census.cap() / 2;
  auto light = [&](int i) { return census.curve(i).weight() <= headroom; };
  for (int i = 0; i < census.size(); ++i) {
    if (census.layer(i) < 0 || !light(i)) continue;
    std::vector<int> up;
    for (int j : census.neighbours(i)) {
      if (!light(j)) continue;
      if (j > i && census.layer(j) == census.layer(i)) edges.emplace_back(i, j);
      if (census.layer(j) == census.layer(i) + 1) up.push_back(j);
    }
    for (std::size_t p = 0; p < up.size(); ++p) {
      for (std::size_t q = p + 1; q < up.size(); ++q) {
        if (intersection(census.curve(up[p]), census.curve(up[q])) == 2) wedges.push_back({i, up[p], up[q]});
      }
    }
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  std::shuffle(wedges.begin(), wedges.end(), rng);
  if (static_cast<int>(edges.size()) > samples) edges.resize(samples);
  if (static_cast<int>(wedges.size()) > samples) wedges.resize(samples);
  int edge_ok = 0, wedge_ok = 0;
  for (const auto& [a, b] : edges) {
    nlohmann::json rec{{"check", "edge"}, {"a1", census.curve(a).coords()}, {"a3", census.curve(b).coords()}};
    try {
      audit(complete_pentagon_edge(census, census.curve(a), census.curve(b)), census.layer(a) + 1, {1, 3, 4}, rec);
      if (rec["pass"].get<bool>()) ++edge_ok;
    } catch (const Error& e) {
      if (!e.is_cap_exhaustion()) throw;
      ++rep.cap_exhaustions;
      rec["error"] = e.what();
    }
    rep.records.push_back(rec);
  }
  for (const auto& w : wedges) {
    nlohmann::json rec{{"check", "wedge"},
                       {"a1", census.curve(w[0]).coords()},
                       {"a3", census.curve(w[1]).coords()},
                       {"a4", census.curve(w[2]).coords()}};
    try {
      audit(complete_pentagon_wedge(census, census.curve(w[0]), census.curve(w[1]), census.curve(w[2])),
            census.layer(w[0]) + 1, {1, 4}, rec);
      if (rec["pass"].get<bool>()) ++wedge_ok;
    } catch (const Error& e) {
      if (!e.is_cap_exhaustion()) throw;
      ++rep.cap_exhaustions;
      rec["error"] = e.what();
    }
    rep.records.push_back(rec);
  }
  rep.summary = {{"five_cycles", g.pentagons_checked},
                 {"headroom", headroom},
                 {"five_cycle_failures", g.pentagon_failures},
                 {"edge_samples", edges.size()},
                 {"edge_completed", edge_ok},
                 {"wedge_samples", wedges.size()},
                 {"wedge_completed", wedge_ok}};
  return rep;
}

VerificationReport run_projection(const RunConfig& cfg, const SphereCensus& census) {
  require_five(census, "projection");
  VerificationReport rep;
  rep.suite = "projection";
  rep.config = cfg;
  auto pr = verify_projection(census, projection_config(cfg, 100), or_default(cfg.samples, 20), 50, cfg.seed);
  rep.summary = pr.to_json();
  rep.records = std::move(rep.summary["records"]);
  rep.summary.erase("records");
  rep.contradictions = (pr.growth_samples - pr.growth_passed) + pr.lipschitz_violations + pr.bgi_violated;
  rep.cap_exhaustions = pr.bgi_target - pr.bgi_satisfied - pr.bgi_violated;
  return rep;
}

void split_records(VerificationReport& rep) {
  rep.records = std::move(rep.summary["records"]);
  rep.summary.erase("records");
}

}  // namespace

void RunConfig::validate() const {
  surface_ptr();
  auto positive = [](int v, const char* name) {
    if (v < 0) throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be positive");
  };
  positive(cap, "cap");
  positive(bgi_m, "bgi-m");
  positive(samples, "samples");
  positive(r, "r");
  if (witness_bound <= 0) throw Error(ErrorCode::InvalidArgument, "witness bound must be positive");
  if (slack <= 0) throw Error(ErrorCode::InvalidArgument, "slack must be positive");
  if (max_twist_power <= 0) throw Error(ErrorCode::InvalidArgument, "twist power cap must be positive");
  if (window <= 0) throw Error(ErrorCode::InvalidArgument, "window must be positive");
  if (format != "json" && format != "dot" && format != "graphml") {
    throw Error(ErrorCode::InvalidArgument, "unknown format '" + format + "'");
  }
  static const char* checks[] = {"all", "chart", "pairing", "monodromy", "s2path"};
  if (std::find(std::begin(checks), std::end(checks), check) == std::end(checks)) {
    throw Error(ErrorCode::InvalidArgument, "unknown bundle check '" + check + "'");
  }
}

SurfacePtr RunConfig::surface_ptr() const {
  if (surface != "s05-fig1" && surface != "s05-sorted" && surface != "s06") {
    throw Error(ErrorCode::InvalidArgument, "unknown surface '" + surface + "'");
  }
  return Surface::by_name(surface);
}

Curve RunConfig::center() const { return standard_curve(surface_ptr(), 1, 2); }

int RunConfig::cap_or_default() const {
  return or_default(cap, surface_ptr()->punctures() == 5 ? 24 : 18);
}

CensusConfig RunConfig::census_config() const {
  CensusConfig cc;
  cc.cap = cap_or_default();
  cc.distance.witness_bound = witness_bound;
  return cc;
}

nlohmann::json RunConfig::to_json() const {
  return {{"surface", surface},   {"cap", cap_or_default()}, {"witness_bound", witness_bound},
          {"bgi_m", bgi_m},       {"slack", slack},          {"max_twist_power", max_twist_power},
          {"samples", samples},   {"seed", seed},            {"r", r},
          {"window", window},     {"check", check},          {"census_file", census_file},
          {"layer_min", layer_min}, {"layer_max", layer_max}};
}

std::string RunConfig::hash() const { return fnv_hex(to_json().dump()); }

std::string cache_dir() {
  const char* env = std::getenv("SPHEREPROBE_CACHE_DIR");
  return env && *env ? env : ".sphereprobe-cache";
}

std::string census_cache_path(const RunConfig& cfg) {
  const auto hash = SphereCensus::config_hash(cfg.center(), cfg.census_config());
  return (fs::path(cache_dir()) /
          ("census-" + cfg.surface + "-K" + std::to_string(cfg.cap_or_default()) + "-" + hash + ".jsonl"))
      .string();
}

std::string cmd_census(const RunConfig& cfg, bool* built) {
  cfg.validate();
  const std::string path = census_cache_path(cfg);
  if (built) *built = false;
  if (fs::exists(path)) {
    try {
      SphereCensus::load(path);
      return path;
    } catch (const Error&) {
      // Stale or damaged: rebuild below.
    }
  }
  std::error_code ec;
  fs::create_directories(fs::path(path).parent_path(), ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create cache directory " + cache_dir() + ": " + ec.message());
  auto census = SphereCensus::build(cfg.center(), cfg.census_config());
  const std::string tmp = path + ".tmp";
  census.save(tmp);
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot move census into place: " + ec.message());
  if (built) *built = true;
  return path;
}

SphereCensus load_census(const RunConfig& cfg) {
  cfg.validate();
  const std::string path = cfg.census_file.empty() ? census_cache_path(cfg) : cfg.census_file;
  if (!fs::exists(path)) throw Error(ErrorCode::Io, "missing census cache " + path + " (run the census command)");
  auto census = SphereCensus::load(path);
  const auto want = SphereCensus::config_hash(cfg.center(), cfg.census_config());
  if (census.config_hash() != want) {
    throw Error(ErrorCode::Io, "census " + path + " was built for another configuration (hash " +
                                   census.config_hash() + ", expected " + want + ")");
  }
  return census;
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Ok: return "ok";
    case Outcome::CapOnly: return "cap-exhaustion";
    case Outcome::Contradiction: return "contradiction";
  }
  return "?";
}

Outcome VerificationReport::outcome() const {
  if (contradictions > 0) return Outcome::Contradiction;
  return cap_exhaustions > 0 ? Outcome::CapOnly : Outcome::Ok;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json recs = records;
  for (auto& rec : recs) {
    if (failing(rec)) rec["seed"] = config.seed;
  }
  return {{"schema_version", kReportSchemaVersion},
          {"suite", suite},
          {"engine_version", kEngineVersion},
          {"config", config.to_json()},
          {"config_hash", config.hash()},
          {"census_hash", census_hash},
          {"seed", config.seed},
          {"outcome", to_string(outcome())},
          {"ok", outcome() != Outcome::Contradiction},
          {"contradictions", contradictions},
          {"cap_exhaustions", cap_exhaustions},
          {"summary", summary},
          {"records", recs}};
}

VerificationReport run_lowpath(const RunConfig& cfg, const SphereCensus& census) {
  VerificationReport rep;
  rep.suite = "lowpath";
  rep.config = cfg;
  const int r = or_default(cfg.r, 1);
  const int samples = or_default(cfg.samples, 20);
  LowPathConfig lc;
  lc.projection = projection_config(cfg, 20);
  lc.distance = distance_config(cfg);
  PathContext ctx(census, lc);
  if (r == 1) {
    auto w = verify_wright_conditions(ctx, 1, samples, cfg.seed);
    rep.summary = w.to_json();
    split_records(rep);
    rep.contradictions = (w.condition1_samples - w.condition1_passed - w.condition1_cap) +
                         (w.condition2_pairs - w.condition2_passed - w.condition2_cap);
    rep.cap_exhaustions = w.condition1_cap + w.condition2_cap;
    return rep;
  }
  RunConfig big = cfg;
  big.cap = std::max(32, cfg.cap_or_default() + 8);
  big.census_file.clear();
  const SphereCensus larger = load_or_build(big);
  auto p = verify_push_up(ctx, r, samples, cfg.seed, &larger);
  rep.summary = p.to_json();
  split_records(rep);
  rep.contradictions = p.samples - p.passed - p.cap;
  rep.cap_exhaustions = p.cap;
  return rep;
}

VerificationReport run_medium(const RunConfig& cfg, const SphereCensus& census) {
  if (census.surface()->punctures() != 6) throw Error(ErrorCode::Precondition, "medium suite needs s06");
  VerificationReport rep;
  rep.suite = "medium";
  rep.config = cfg;
  MediumConfig mcfg;
  mcfg.projection = projection_config(cfg, 2);
  mcfg.distance = distance_config(cfg);
  MediumContext mc(census, mcfg);
  auto m = verify_medium(mc, or_default(cfg.r, 1), or_default(cfg.samples, 10), cfg.seed);
  rep.summary = m.to_json();
  split_records(rep);
  rep.contradictions = (m.view_disagreement >= 0 ? 1 : 0) + (m.oz_samples - m.oz_passed) +
                       (m.path_samples - m.path_passed - m.path_cap);
  rep.cap_exhaustions = m.path_cap;
  return rep;
}

VerificationReport run_bundle(const RunConfig& cfg, const SphereCensus& census) {
  require_five(census, "bundle");
  VerificationReport rep;
  rep.suite = "bundle";
  rep.config = cfg;
  Bundle bundle(census, cfg.window, std::max(64, cfg.window));
  LowPathConfig lc;
  lc.projection = projection_config(cfg, 20);
  lc.distance = distance_config(cfg);
  PathContext ctx(census, lc);
  auto b = verify_bundle(bundle, ctx, or_default(cfg.samples, 50), cfg.seed);
  const auto all = b.to_json();
  const std::string& check = cfg.check;
  auto want = [&](const std::string& c) { return check == "all" || check == c; };
  std::vector<std::string> stages;
  if (want("chart")) {
    stages.insert(stages.end(), {"chart", "fiber", "decomposition"});
    rep.summary["s2prime"] = b.s2prime;
    rep.summary["decomposition_failures"] = b.decomposition_failures;
    rep.summary["charts"] = b.charts;
    rep.summary["chart_failures"] = b.chart_failures;
    rep.summary["unplaced"] = b.unplaced;
    rep.contradictions += b.decomposition_failures + b.chart_failures + b.unplaced;
  }
  if (want("pairing")) {
    stages.push_back("pairing");
    rep.summary["pairings"] = b.pairings;
    rep.summary["pairing_failures"] = b.pairing_failures;
    rep.summary["pairing_cap"] = b.pairing_cap;
    rep.contradictions += b.pairing_failures;
    rep.cap_exhaustions += b.pairing_cap;
  }
  if (want("monodromy")) {
    stages.push_back("triangle");
    rep.summary["triangle"] = all.at("triangle");
    if (!b.triangle_ok) ++rep.contradictions;
  }
  if (want("s2path")) {
    stages.push_back("s2prime_path");
    rep.summary["paths"] = all.at("paths");
    rep.contradictions += b.path_samples - b.path_passed - b.path_cap;
    rep.cap_exhaustions += b.path_cap;
    // Too much exhaustion means the cap is too small for the suite.
    if (b.path_cap * 10 >= std::max(b.path_samples, 1) && b.path_cap > 0) {
      rep.summary["paths"]["note"] = "cap exhaustion above 10%; rerun with a larger cap";
    }
  }
  for (const auto& rec : b.records) {
    const std::string stage = rec.value("stage", "");
    if (std::find(stages.begin(), stages.end(), stage) != stages.end()) rep.records.push_back(rec);
  }
  return rep;
}

VerificationReport cmd_verify(const std::string& suite, const RunConfig& cfg, const SphereCensus& census) {
  cfg.validate();
  VerificationReport rep;
  if (suite == "girth") {
    rep = run_girth(cfg, census);
  } else if (suite == "pentagon") {
    rep = run_pentagon(cfg, census);
  } else if (suite == "lowpath") {
    rep = run_lowpath(cfg, census);
  } else if (suite == "medium") {
    rep = run_medium(cfg, census);
  } else if (suite == "bundle") {
    rep = run_bundle(cfg, census);
  } else if (suite == "projection") {
    rep = run_projection(cfg, census);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown suite '" + suite + "'");
  }
  rep.census_hash = census.config_hash();
  return rep;
}

namespace {

bool in_filter(const SphereCensus& census, int i, int lo, int hi) {
  const int l = census.layer(i);
  return l >= lo && (hi < 0 || l <= hi);
}

std::string coords_text(const Curve& c) {
  std::string s;
  for (int x : c.coords()) {
    if (!s.empty()) s += ",";
    s += std::to_string(x);
  }
  return s;
}

// Fiber of a layer-2 vertex: the index of its backtrack, -1 when undefined.
int fiber_of(const SphereCensus& census, int i) {
  if (!five(census) || census.layer(i) != 2) return -1;
  try {
    return census.index_of(backtrack(census, census.curve(i)));
  } catch (const Error&) {
    return -1;
  }
}

}  // namespace

std::string export_dot(const SphereCensus& census, int layer_min, int layer_max) {
  std::ostringstream os;
  os << "graph census {\n";
  os << "  // surface=" << census.surface()->name() << " cap=" << census.cap() << " layers=" << layer_min << ".."
     << (layer_max < 0 ? std::string("") : std::to_string(layer_max)) << "\n";
  for (int i = 0; i < census.size(); ++i) {
    if (!in_filter(census, i, layer_min, layer_max)) continue;
    os << "  v" << i << " [layer=" << census.layer(i) << ", fiber=" << fiber_of(census, i) << ", coords=\""
       << coords_text(census.curve(i)) << "\"];\n";
  }
  for (int i = 0; i < census.size(); ++i) {
    if (!in_filter(census, i, layer_min, layer_max)) continue;
    for (int j : census.neighbours(i)) {
      if (j > i && in_filter(census, j, layer_min, layer_max)) os << "  v" << i << " -- v" << j << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string export_graphml(const SphereCensus& census, int layer_min, int layer_max) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
     << "  <key id=\"layer\" for=\"node\" attr.name=\"layer\" attr.type=\"int\"/>\n"
     << "  <key id=\"fiber\" for=\"node\" attr.name=\"fiber\" attr.type=\"int\"/>\n"
     << "  <key id=\"coords\" for=\"node\" attr.name=\"coords\" attr.type=\"string\"/>\n"
     << "  <graph id=\"census\" edgedefault=\"undirected\">\n";
  for (int i = 0; i < census.size(); ++i) {
    if (!in_filter(census, i, layer_min, layer_max)) continue;
    os << "    <node id=\"v" << i << "\"><data key=\"layer\">" << census.layer(i) << "</data><data key=\"fiber\">"
       << fiber_of(census, i) << "</data><data key=\"coords\">" << coords_text(census.curve(i))
       << "</data></node>\n";
  }
  for (int i = 0; i < census.size(); ++i) {
    if (!in_filter(census, i, layer_min, layer_max)) continue;
    for (int j : census.neighbours(i)) {
      if (j > i && in_filter(census, j, layer_min, layer_max)) {
        os << "    <edge source=\"v" << i << "\" target=\"v" << j << "\"/>\n";
      }
    }
  }
  os << "  </graph>\n</graphml>\n";
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path);
}

int exit_code(Outcome o) { return o == Outcome::Contradiction ? 1 : 0; }

}  // namespace sphereprobe

// sphereprobe: censuses, verification suites and exports for curve graphs of
// five- and six-punctured spheres.

#include <chrono>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "sphereprobe/bundle.hpp"
#include "sphereprobe/cli_io.hpp"
#include "sphereprobe/error.hpp"
#include "sphereprobe/medium.hpp"

using namespace sphereprobe;

namespace {

void add_common(CLI::App* app, RunConfig& cfg) {
  app->add_option("--surface", cfg.surface, "s05-fig1 | s05-sorted | s06")
      ->check(CLI::IsMember({"s05-fig1", "s05-sorted", "s06"}));
  app->add_option("--cap", cfg.cap, "census coordinate-sum cap K (default 24, 18 on s06)");
  app->add_option("--witness-bound", cfg.witness_bound, "Farey radius for distance-3 witnesses");
  app->add_option("--bgi-m", cfg.bgi_m, "projection threshold M (default per suite)");
  app->add_option("--slack", cfg.slack, "twist slack over M");
  app->add_option("--max-twist", cfg.max_twist_power, "twist power cap");
  app->add_option("--seed", cfg.seed, "RNG seed");
  app->add_option("--samples", cfg.samples, "sample count (default per suite)");
  app->add_option("--out", cfg.out, "output path (default stdout)");
  app->add_option("--format", cfg.format, "json | dot | graphml")->check(CLI::IsMember({"json", "dot", "graphml"}));
  app->add_option("--census", cfg.census_file, "census file instead of the cache");
  app->add_option("--r", cfg.r, "layer r");
  app->add_option("--window", cfg.window, "Farey fiber chart half-width");
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    write_text(cfg.out, text);
  }
}

void emit_json(const RunConfig& cfg, const nlohmann::json& j) { emit(cfg, j.dump(2) + "\n"); }

// P34, P{3,4} or a comma-separated coordinate list.
Curve parse_curve(const SurfacePtr& s, std::string text) {
  std::string digits;
  for (char ch : text) {
    if (ch != '{' && ch != '}' && ch != ' ') digits += ch;
  }
  if (!digits.empty() && (digits[0] == 'P' || digits[0] == 'p')) {
    digits = digits.substr(1);
    std::vector<int> pq;
    if (digits.find(',') != std::string::npos) {
      std::stringstream ss(digits);
      std::string tok;
      while (std::getline(ss, tok, ',')) pq.push_back(std::stoi(tok));
    } else {
      for (char ch : digits) pq.push_back(ch - '0');
    }
    if (pq.size() != 2) throw Error(ErrorCode::InvalidArgument, "bad curve name '" + text + "'");
    return standard_curve(s, pq[0], pq[1]);
  }
  std::vector<int> coords;
  std::stringstream ss(digits);
  std::string tok;
  try {
    while (std::getline(ss, tok, ',')) coords.push_back(std::stoi(tok));
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "bad curve '" + text + "'");
  }
  return Curve::from_coords(s, coords);
}

Curve curve_or(const SurfacePtr& s, const std::string& text, const Curve& fallback) {
  return text.empty() ? fallback : parse_curve(s, text);
}

int pick(std::mt19937_64& rng, const std::vector<int>& v) {
  if (v.empty()) throw Error(ErrorCode::NotFoundUnderCap, "nothing to sample in the census");
  return v[rng() % v.size()];
}

LowPathConfig lowpath_config(const RunConfig& cfg) {
  LowPathConfig lc;
  lc.projection.M = cfg.bgi_m > 0 ? cfg.bgi_m : 20;
  lc.projection.slack = cfg.slack;
  lc.projection.max_twist_power = cfg.max_twist_power;
  lc.distance.witness_bound = cfg.witness_bound;
  return lc;
}

int run(int argc, char** argv) {
  CLI::App app{"sphereprobe: curve graph censuses and verification suites"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* census_cmd = app.add_subcommand("census", "build or reuse the census cache");
  add_common(census_cmd, cfg);

  std::string suite;
  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  verify_cmd->add_option("suite", suite, "girth | pentagon | lowpath | medium | bundle | projection")
      ->required()
      ->check(CLI::IsMember({"girth", "pentagon", "lowpath", "medium", "bundle", "projection"}));
  verify_cmd->add_option("--check", cfg.check, "bundle: all | chart | pairing | monodromy | s2path");
  add_common(verify_cmd, cfg);

  std::string export_format;
  bool s2prime = false;
  auto* export_cmd = app.add_subcommand("export", "export the census graph");
  export_cmd->add_option("kind", export_format, "dot | graphml")->check(CLI::IsMember({"dot", "graphml"}));
  export_cmd->add_option("--layer-min", cfg.layer_min, "lowest layer kept");
  export_cmd->add_option("--layer-max", cfg.layer_max, "highest layer kept (-1: all)");
  export_cmd->add_flag("--s2prime", s2prime, "export S'_2 with fiber and zeta labels (dot)");
  add_common(export_cmd, cfg);

  std::string a_spec, b_spec, b2_spec;
  auto* lowpath_cmd = app.add_subcommand("lowpath", "preliminary path, push-up and connection for one triple");
  lowpath_cmd->add_option("--a", a_spec, "curve a in S_r");
  lowpath_cmd->add_option("--b", b_spec, "curve b in S_{r+1}");
  lowpath_cmd->add_option("--b2", b2_spec, "curve b' in S_{r+1}");
  add_common(lowpath_cmd, cfg);

  std::string z_spec, x_spec, y_spec;
  auto* medium_cmd = app.add_subcommand("medium", "O(z) and a medium sphere path on s06");
  medium_cmd->add_option("--z", z_spec, "pants curve z in S_r");
  medium_cmd->add_option("--x", x_spec, "path start in S_{r+1}");
  medium_cmd->add_option("--y", y_spec, "path end in S_{r+1}");
  add_common(medium_cmd, cfg);

  std::string bundle_what;
  std::string x1_spec, x2_spec, v_spec, w_spec;
  auto* bundle_cmd = app.add_subcommand("bundle", "Farey bundle structure of S'_2");
  bundle_cmd->add_option("what", bundle_what, "chart | pairing | monodromy | s2path")
      ->required()
      ->check(CLI::IsMember({"chart", "pairing", "monodromy", "s2path"}));
  bundle_cmd->add_option("--x1", x1_spec, "fiber base (chart, pairing)");
  bundle_cmd->add_option("--x2", x2_spec, "second fiber base (pairing)");
  bundle_cmd->add_option("--v", v_spec, "path start (s2path)");
  bundle_cmd->add_option("--w", w_spec, "path end (s2path)");
  add_common(bundle_cmd, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version exit 0; usage errors share the invalid-argument code.
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  };

  if (census_cmd->parsed()) {
    bool built = false;
    const std::string path = cmd_census(cfg, &built);
    auto census = SphereCensus::load(path);
    nlohmann::json layers = nlohmann::json::object();
    for (int r = 0; r <= census.max_layer(); ++r) layers[std::to_string(r)] = census.layer_members(r).size();
    if (census.layer_members(1).empty()) std::cerr << "warning: layer 1 is empty at cap " << census.cap() << "\n";
    std::cerr << (built ? "built " : "reused ") << path << " (" << elapsed() << " ms)\n";
    nlohmann::json j{{"path", path}, {"size", census.size()}, {"layers", layers},
                     {"config_hash", census.config_hash()}};
    std::cout << j.dump() << "\n";
    return 0;
  }

  const SphereCensus census = load_census(cfg);
  const SurfacePtr s = census.surface();

  if (verify_cmd->parsed()) {
    auto rep = cmd_verify(suite, cfg, census);
    emit_json(cfg, rep.to_json());
    std::cerr << suite << ": " << to_string(rep.outcome()) << " (" << rep.contradictions << " contradictions, "
              << rep.cap_exhaustions << " cap exhaustions, " << elapsed() << " ms)\n";
    return exit_code(rep.outcome());
  }

  if (export_cmd->parsed()) {
    const std::string fmt = !export_format.empty() ? export_format : (cfg.format == "json" ? "dot" : cfg.format);
    if (s2prime) {
      if (fmt != "dot") throw Error(ErrorCode::InvalidArgument, "the S'_2 export is DOT only");
      Bundle bundle(census, cfg.window);
      emit(cfg, bundle_dot(bundle));
    } else {
      emit(cfg, fmt == "dot" ? export_dot(census, cfg.layer_min, cfg.layer_max)
                             : export_graphml(census, cfg.layer_min, cfg.layer_max));
    }
    return 0;
  }

  std::mt19937_64 rng(cfg.seed);

  if (lowpath_cmd->parsed()) {
    const int r = cfg.r > 0 ? cfg.r : 2;
    PathContext ctx(census, lowpath_config(cfg));
    Curve a = a_spec.empty() ? census.curve(pick(rng, census.layer_members(r))) : parse_curve(s, a_spec);
    std::vector<int> up;
    const int ia = census.index_of(a);
    if (ia >= 0) {
      for (int v : census.neighbours(ia)) {
        if (census.layer(v) == r + 1) up.push_back(v);
      }
    }
    Curve b = curve_or(s, b_spec, census.curve(pick(rng, up)));
    Curve b2 = b2_spec.empty() ? b : parse_curve(s, b2_spec);
    for (int tries = 0; b2 == b && tries < 64 && b2_spec.empty(); ++tries) b2 = census.curve(pick(rng, up));
    nlohmann::json out{{"a", a.coords()}, {"b", b.coords()}, {"b2", b2.coords()}, {"r", r}};
    auto prelim = preliminary_path(ctx, a, b, b2);
    out["preliminary"] = prelim.to_json();
    out["preliminary_audit"] = audit_preliminary(ctx, a, prelim).to_json();
    if (r >= 2) {
      auto pu = push_up(ctx, a, prelim);
      out["push_up"] = {{"N", pu.N}, {"path", pu.path.to_json()}, {"audit", pu.audit.to_json()}};
    }
    auto above = connect_above(ctx, a, b, b2);
    out["connect_above"] = {{"path", above.path.to_json()}, {"audit", above.audit.to_json()}};
    emit_json(cfg, out);
    return 0;
  }

  if (medium_cmd->parsed()) {
    const int r = cfg.r > 0 ? cfg.r : 1;
    MediumConfig mcfg;
    mcfg.projection.M = cfg.bgi_m > 0 ? cfg.bgi_m : 2;
    mcfg.projection.slack = cfg.slack;
    mcfg.distance.witness_bound = cfg.witness_bound;
    MediumContext mc(census, mcfg);
    std::vector<int> pants;
    for (int i : census.layer_members(r)) {
      if (census.curve(i).is_pants()) pants.push_back(i);
    }
    const std::vector<int> up = census.layer_members(r + 1);
    Curve z = curve_or(s, z_spec, census.curve(pick(rng, pants)));
    Curve x = curve_or(s, x_spec, census.curve(pick(rng, up)));
    Curve y = curve_or(s, y_spec, census.curve(pick(rng, up)));
    auto oz = oz_set(mc, z);
    nlohmann::json out{{"r", r}, {"oz", oz.to_json(census)}};
    auto mp = medium_sphere_path(mc, x, y);
    out["path"] = mp.to_json();
    emit_json(cfg, out);
    return mp.ok() && oz.inclusion_ok ? 0 : 1;
  }

  if (bundle_cmd->parsed()) {
    Bundle bundle(census, cfg.window);
    const auto tri = fundamental_triangle(census);
    if (bundle_what == "chart") {
      emit_json(cfg, bundle.chart(curve_or(s, x1_spec, tri[0])).to_json());
      return 0;
    }
    if (bundle_what == "pairing") {
      const auto& pt = bundle.pair(curve_or(s, x1_spec, tri[0]), curve_or(s, x2_spec, tri[1]));
      emit_json(cfg, pt.to_json());
      return pt.ok() ? 0 : 1;
    }
    if (bundle_what == "monodromy") {
      auto fwd = monodromy(bundle, {tri[0], tri[1], tri[2], tri[0]});
      auto rev = monodromy(bundle, {tri[0], tri[2], tri[1], tri[0]});
      emit_json(cfg, {{"triangle", fwd.to_json()}, {"reversed", rev.to_json()}});
      return fwd.ok() && rev.ok() && std::abs(fwd.value) == 1 ? 0 : 1;
    }
    PathContext ctx(census, lowpath_config(cfg));
    const std::vector<int> s2 = census.nonisolated_members(2);
    Curve v = curve_or(s, v_spec, census.curve(pick(rng, s2)));
    Curve w = curve_or(s, w_spec, census.curve(pick(rng, s2)));
    auto p = s2prime_path(bundle, ctx, v, w);
    emit_json(cfg, p.to_json());
    return p.ok() ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "sphereprobe: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::Io:
      case ErrorCode::InvalidArgument:
      case ErrorCode::MismatchedSurface:
      case ErrorCode::Precondition:
        return 2;
      default:
        return e.is_cap_exhaustion() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "sphereprobe: " << e.what() << "\n";
    return 2;
  }
}

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sphereprobe/curve_graph.hpp"

namespace sphereprobe {

inline constexpr const char* kEngineVersion = "0.3.0";
inline constexpr int kReportSchemaVersion = 1;

// Zero in cap, bgi_m, samples and r selects the suite default.
struct RunConfig {
  std::string surface = "s05-fig1";
  int cap = 0;
  int witness_bound = 3;
  int bgi_m = 0;
  int slack = 20;
  int max_twist_power = 64;
  int samples = 0;
  unsigned long long seed = 1;
  int r = 0;
  int window = 16;
  std::string check = "all";  // bundle: all|chart|pairing|monodromy|s2path
  std::string out;
  std::string format = "json";
  std::string census_file;
  int layer_min = 0;   // export filter
  int layer_max = -1;  // -1: no upper bound

  void validate() const;
  SurfacePtr surface_ptr() const;
  Curve center() const;  // P{1,2}
  int cap_or_default() const;
  CensusConfig census_config() const;
  // Fields that change results; out and format are left out.
  nlohmann::json to_json() const;
  std::string hash() const;
};

std::string cache_dir();  // SPHEREPROBE_CACHE_DIR or ./.sphereprobe-cache
std::string census_cache_path(const RunConfig& cfg);

// Writes the census cache unless an identical one exists; returns the path.
std::string cmd_census(const RunConfig& cfg, bool* built = nullptr);
// The census named by --census, else the cache; Io when missing or stale.
SphereCensus load_census(const RunConfig& cfg);

enum class Outcome { Ok, CapOnly, Contradiction };
const char* to_string(Outcome o);

struct VerificationReport {
  std::string suite;
  RunConfig config;
  nlohmann::json summary = nlohmann::json::object();
  nlohmann::json records = nlohmann::json::array();
  long long contradictions = 0;
  long long cap_exhaustions = 0;
  std::string census_hash;

  Outcome outcome() const;
  // Same envelope for every suite; failing records carry the seed.
  nlohmann::json to_json() const;
};

VerificationReport cmd_verify(const std::string& suite, const RunConfig& cfg, const SphereCensus& census);
VerificationReport run_lowpath(const RunConfig& cfg, const SphereCensus& census);
VerificationReport run_medium(const RunConfig& cfg, const SphereCensus& census);
VerificationReport run_bundle(const RunConfig& cfg, const SphereCensus& census);

// Layer-filtered census graph, vertices in index order.
std::string export_dot(const SphereCensus& census, int layer_min, int layer_max);
std::string export_graphml(const SphereCensus& census, int layer_min, int layer_max);

void write_text(const std::string& path, const std::string& text);
int exit_code(Outcome o);

}  // namespace sphereprobe

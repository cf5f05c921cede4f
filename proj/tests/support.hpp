#pragma once

#include <doctest.h>

#include "sphereprobe/curve_graph.hpp"
#include "sphereprobe/error.hpp"

namespace sphereprobe::testing {

// Censuses are deterministic and shared across test cases of one binary.
inline const SphereCensus& fig1_census(int cap = 24) {
  static std::map<int, SphereCensus> cache;
  auto it = cache.find(cap);
  if (it == cache.end()) {
    CensusConfig cfg;
    cfg.cap = cap;
    it = cache.emplace(cap, SphereCensus::build(standard_curve(Surface::fig1(), 1, 2), cfg)).first;
  }
  return it->second;
}

inline const SphereCensus& s06_census(int cap = 18) {
  static std::map<int, SphereCensus> cache;
  auto it = cache.find(cap);
  if (it == cache.end()) {
    CensusConfig cfg;
    cfg.cap = cap;
    it = cache.emplace(cap, SphereCensus::build(standard_curve(Surface::sorted6(), 1, 2), cfg)).first;
  }
  return it->second;
}

inline Curve P(const SurfacePtr& s, int p, int q) { return standard_curve(s, p, q); }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

}  // namespace sphereprobe::testing

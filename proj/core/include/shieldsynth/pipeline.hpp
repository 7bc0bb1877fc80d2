#pragma once

#include <cstdint>
#include <string>

#include "shieldsynth/lqr.hpp"
#include "shieldsynth/search.hpp"
#include "shieldsynth/system.hpp"

namespace shieldsynth {

struct VerifyOptions {
  int family_size = 10;
  int selector_budget = 100;
  int regen_limit = 20;     // family regenerations before giving up
  double timeout_secs = 3600.0;
  std::uint64_t seed = 0;
};

struct VerificationReport {
  std::string benchmark;
  int n = 0;
  int m = 0;
  int M = 0;
  int k = 0;
  double noise_verified_max = 0.0;
  bool verified = false;
  double L_opt = 0.0;
  double per_family_secs = 0.0;  // mean generate+search time per family
  double total_secs = 0.0;
  int regenerations = 0;
  std::uint64_t seed = 0;
};

struct VerifyOutcome {
  VerificationReport report;
  ControllerFamily family;   // the family of the best (or verified) result
  SearchResult result;
};

/// Sample-then-search loop: generate an LQR family, synthesize a selector,
/// and regenerate with a fresh seed until verified, the regeneration limit
/// is hit, or the timeout expires. Timings excluded, the outcome is a
/// deterministic function of (spec, options).
VerifyOutcome run_verification(const SystemSpec& spec, const VerifyOptions& opts);

}  // namespace shieldsynth

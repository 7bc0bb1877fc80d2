#include "shieldsynth/pipeline.hpp"

#include <chrono>

namespace shieldsynth {

namespace {

double elapsed_secs(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

VerifyOutcome run_verification(const SystemSpec& spec, const VerifyOptions& opts) {
  const auto start = std::chrono::steady_clock::now();

  VerifyOutcome out;
  out.report.benchmark = spec.name;
  out.report.n = spec.n;
  out.report.m = spec.m;
  out.report.M = spec.horizon_M;
  out.report.k = spec.interval_k;
  out.report.noise_verified_max = spec.noise_verified.hi().cwiseAbs().maxCoeff();
  out.report.seed = opts.seed;

  SearchOptions search_opts;
  search_opts.selector_budget = opts.selector_budget;

  int attempts = 0;
  double family_time = 0.0;
  for (int r = 0; r <= opts.regen_limit; ++r) {
    const auto family_start = std::chrono::steady_clock::now();
    // Each regeneration re-samples Q/R from a fresh derived seed.
    ControllerFamily family =
        sample_family(spec, opts.family_size,
                      opts.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(r));
    search_opts.timeout_secs = opts.timeout_secs - elapsed_secs(start);
    if (search_opts.timeout_secs <= 0.0) break;
    SearchResult result = synthesize(spec, family, search_opts);
    family_time += elapsed_secs(family_start);
    ++attempts;

    if (result.L_opt > out.result.L_opt || attempts == 1) {
      out.family = std::move(family);
      out.result = std::move(result);
    }
    out.report.regenerations = r;
    if (out.result.verified) break;
    if (elapsed_secs(start) > opts.timeout_secs) break;
  }

  out.report.verified = out.result.verified;
  out.report.L_opt = out.result.L_opt;
  out.report.per_family_secs = attempts > 0 ? family_time / attempts : 0.0;
  out.report.total_secs = elapsed_secs(start);
  return out;
}

}  // namespace shieldsynth

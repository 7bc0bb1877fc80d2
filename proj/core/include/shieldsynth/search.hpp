#pragma once

#include <vector>

#include "shieldsynth/lqr.hpp"
#include "shieldsynth/reach.hpp"
#include "shieldsynth/system.hpp"

namespace shieldsynth {

/// One family index per k-step segment.
struct Selector {
  std::vector<int> choices;
};

struct SearchStats {
  long nodes_expanded = 0;        // segment nodes visited
  long selectors_evaluated = 0;   // selectors fully evaluated
  long prunes_strategy1 = 0;      // cumulative-bound cuts
  long prunes_strategy2 = 0;      // between-selector dominance cuts
  long prunes_strategy3 = 0;      // invariant certifications
};

struct SearchResult {
  Selector phi_opt;
  double L_opt = 0.0;                // sum of p_hat over t = 1..M
  bool verified = false;             // L_opt == M
  std::vector<SafetyBound> per_step; // length M
  SearchStats stats;
};

struct SearchOptions {
  int selector_budget = 100;  // selectors fully evaluated before giving up
  bool enable_pruning = true;
  double timeout_secs = 0.0;  // 0 = no deadline; best-effort abort otherwise
};

/// Number of selectors in the full tree: |family|^ceil(M/k).
double selector_count(int family_size, int M, int k);

/// Per-step bounds for a fixed selector, recomputed from scratch with no
/// search state. per_step[t-1] holds the bound for step t.
std::vector<SafetyBound> evaluate_selector(const SystemSpec& spec,
                                           const ControllerFamily& family,
                                           const Selector& phi);

/// Depth-first search over the selector tree with the three pruning
/// strategies; returns the best (phi, L) found, early-exiting when a fully
/// verified selector (L = M) is discovered.
SearchResult synthesize(const SystemSpec& spec, const ControllerFamily& family,
                        const SearchOptions& options = {});

}  // namespace shieldsynth

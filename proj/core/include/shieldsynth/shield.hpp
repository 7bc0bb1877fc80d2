#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "shieldsynth/search.hpp"
#include "shieldsynth/system.hpp"

namespace shieldsynth {

enum class ShieldCase { ContainedInSafeRegion, ContainedInInit, Intervened };

struct ShieldDecision {
  int step = 0;
  Eigen::VectorXd proposed;
  Eigen::VectorXd chosen;
  bool intervened = false;
  ShieldCase reason = ShieldCase::ContainedInSafeRegion;
};

/// Immutable runtime-monitor configuration. Construction re-runs the
/// independent certificate check (sum of p_hat over the horizon must be M)
/// and validates that the verified noise strictly dominates runtime noise.
class ShieldConfig {
public:
  ShieldConfig(SystemSpec spec, ControllerFamily family, Selector selector,
               bool decision_log = false);

  const SystemSpec& spec() const { return spec_; }
  const ControllerFamily& family() const { return family_; }
  const Selector& selector() const { return selector_; }
  bool decision_log() const { return decision_log_; }

  /// Active gain for step t.
  const Eigen::MatrixXd& gain_at(int t) const;

private:
  SystemSpec spec_;
  ControllerFamily family_;
  Selector selector_;
  bool decision_log_ = false;
};

/// Componentwise containment of [center_a + noise_a] in [center_b + noise_b].
bool region_subset(const Eigen::VectorXd& center_a, const IntervalBox& noise_a,
                   const Eigen::VectorXd& center_b, const IntervalBox& noise_b);

/// One monitored step: accept the proposed action iff its noise-inflated
/// one-step region is contained in the safe controller's region or in the
/// initial set; otherwise substitute the safe action.
std::pair<Eigen::VectorXd, ShieldDecision> shield_action(
    const ShieldConfig& cfg, int t, const Eigen::VectorXd& s_t,
    const Eigen::VectorXd& a_nn);

using BlackBoxController =
    std::function<Eigen::VectorXd(int t, const Eigen::VectorXd& s)>;

struct ShieldedRun {
  long violations = 0;
  long interventions = 0;
  long steps = 0;
  std::vector<std::vector<ShieldDecision>> decision_logs;  // per episode, if enabled
};

/// Simulates shielded episodes of length M under runtime noise sampled
/// per-step from the spec's noise distribution. Per-episode seeds derive
/// deterministically from the master seed.
ShieldedRun run_shielded(const ShieldConfig& cfg, const BlackBoxController& pi,
                         int episodes, std::uint64_t seed);

/// Same rollout without the monitor, for baseline violation counts.
ShieldedRun run_unshielded(const SystemSpec& spec, const BlackBoxController& pi,
                           int episodes, std::uint64_t seed);

}  // namespace shieldsynth

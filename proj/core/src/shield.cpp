#include "shieldsynth/shield.hpp"

#include <stdexcept>

#include "shieldsynth/sim.hpp"

namespace shieldsynth {

ShieldConfig::ShieldConfig(SystemSpec spec, ControllerFamily family,
                           Selector selector, bool decision_log)
    : spec_(std::move(spec)), family_(std::move(family)),
      selector_(std::move(selector)), decision_log_(decision_log) {
  spec_.validate();
  // Independent certificate re-check: the selector must be fully verified.
  auto bounds = evaluate_selector(spec_, family_, selector_);
  double L = 0.0;
  for (const auto& sb : bounds) L += sb.p_hat;
  if (L < spec_.horizon_M - 1e-9)
    throw std::invalid_argument("ShieldConfig: selector is not verified");
}

const Eigen::MatrixXd& ShieldConfig::gain_at(int t) const {
  const int seg = t / spec_.interval_k;
  return family_.gains[static_cast<std::size_t>(
      selector_.choices[static_cast<std::size_t>(seg)])];
}

bool region_subset(const Eigen::VectorXd& center_a, const IntervalBox& noise_a,
                   const Eigen::VectorXd& center_b, const IntervalBox& noise_b) {
  if (center_a.size() != center_b.size() || noise_a.dim() != noise_b.dim() ||
      center_a.size() != noise_a.dim())
    throw std::invalid_argument("region_subset: dimension mismatch");
  return ((center_a + noise_a.lo()).array() >= (center_b + noise_b.lo()).array())
             .all() &&
         ((center_a + noise_a.hi()).array() <= (center_b + noise_b.hi()).array())
             .all();
}

std::pair<Eigen::VectorXd, ShieldDecision> shield_action(
    const ShieldConfig& cfg, int t, const Eigen::VectorXd& s_t,
    const Eigen::VectorXd& a_nn) {
  const auto& spec = cfg.spec();
  if (t >= spec.horizon_M)
    throw std::out_of_range("shield_action: horizon exceeded");
  if (!s_t.allFinite())
    throw std::invalid_argument("shield_action: non-finite state");

  const Eigen::VectorXd a_safe = cfg.gain_at(t) * s_t;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(spec.n);
  const Eigen::VectorXd s_nn = step(spec, t, s_t, a_nn, zero);
  const Eigen::VectorXd s_safe = step(spec, t, s_t, a_safe, zero);

  ShieldDecision d;
  d.step = t;
  d.proposed = a_nn;
  if (region_subset(s_nn, spec.noise_runtime, s_safe, spec.noise_verified)) {
    d.reason = ShieldCase::ContainedInSafeRegion;
    d.chosen = a_nn;
  } else if (region_subset(s_nn, spec.noise_runtime, spec.init_box.center(),
                           IntervalBox(spec.init_box.lo() - spec.init_box.center(),
                                       spec.init_box.hi() - spec.init_box.center()))) {
    d.reason = ShieldCase::ContainedInInit;
    d.chosen = a_nn;
  } else {
    d.reason = ShieldCase::Intervened;
    d.intervened = true;
    d.chosen = a_safe;
  }
  return {d.chosen, d};
}

namespace {

ShieldedRun run_episodes(const SystemSpec& spec, const BlackBoxController& pi,
                         int episodes, std::uint64_t seed,
                         const ShieldConfig* cfg, bool log_decisions) {
  if (episodes <= 0)
    throw std::invalid_argument("run_shielded: episodes must be > 0");
  ShieldedRun out;
  for (int e = 0; e < episodes; ++e) {
    // Per-episode seed derived deterministically from the master seed.
    const std::uint64_t ep_seed = seed ^ (0x9e3779b97f4a7c15ULL * (e + 1));
    std::mt19937_64 rng(ep_seed);
    NoiseSampler noise(spec.noise_dist, spec.noise_runtime, ep_seed + 1);
    Eigen::VectorXd s = uniform_in_box(spec.init_box, rng);
    std::vector<ShieldDecision> log;
    for (int t = 0; t < spec.horizon_M; ++t) {
      Eigen::VectorXd a = pi(t, s);
      if (cfg) {
        auto [chosen, d] = shield_action(*cfg, t, s, a);
        a = chosen;
        if (d.intervened) ++out.interventions;
        if (log_decisions) log.push_back(std::move(d));
      }
      s = step(spec, t, s, a, noise.sample());
      ++out.steps;
      if (!spec.safe_box.contains(s)) ++out.violations;
    }
    if (log_decisions) out.decision_logs.push_back(std::move(log));
  }
  return out;
}

}  // namespace

ShieldedRun run_shielded(const ShieldConfig& cfg, const BlackBoxController& pi,
                         int episodes, std::uint64_t seed) {
  return run_episodes(cfg.spec(), pi, episodes, seed, &cfg, cfg.decision_log());
}

ShieldedRun run_unshielded(const SystemSpec& spec, const BlackBoxController& pi,
                           int episodes, std::uint64_t seed) {
  return run_episodes(spec, pi, episodes, seed, nullptr, false);
}

}  // namespace shieldsynth

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "shieldsynth/lqr.hpp"
#include "shieldsynth/search.hpp"
#include "shieldsynth/system.hpp"

namespace shieldsynth {

/// Bounded noise sampler. UniformNoise draws uniformly over the box;
/// GenericBounded draws a truncated Gaussian centered at the box midpoint
/// with sigma = range/6, rejection-sampled so every draw lies in bounds.
class NoiseSampler {
public:
  NoiseSampler(NoiseDist dist, IntervalBox bounds, std::uint64_t seed);

  Eigen::VectorXd sample();

  const IntervalBox& bounds() const { return bounds_; }

private:
  NoiseDist dist_;
  IntervalBox bounds_;
  std::mt19937_64 rng_;
};

/// Uniform draw from a box with an externally owned RNG.
Eigen::VectorXd uniform_in_box(const IntervalBox& box, std::mt19937_64& rng);

struct RewardSpec {
  IntervalBox safe_bounds;
  std::vector<int> live_dims;
  Eigen::VectorXd live_thresholds;
  double discount = 1.0;
};

/// Safety reward: 0 inside [L, U], negative L1 distance outside.
double r_safe(const Eigen::VectorXd& x, const IntervalBox& safe_bounds);

/// Thresholded liveness reward: number of live dimensions with |x_i| > T_i.
double r_live(const Eigen::VectorXd& x, const RewardSpec& spec);

/// Continuous liveness variant: sum of |x_i| over the live dimensions.
double r_live_magnitude(const Eigen::VectorXd& x, const RewardSpec& spec);

/// Discounted return of a state trajectory under r_safe + r_live.
double discounted_return(const std::vector<Eigen::VectorXd>& trajectory,
                         const RewardSpec& spec);

struct SafetyEstimate {
  std::vector<double> safe_fraction;  // per step t = 1..M
  std::vector<double> sigma3;         // 3-sigma binomial half-width per step
};

/// Monte-Carlo estimate of the per-step safe fraction under a fixed
/// selector. Initial states are uniform over the init box; the disturbance
/// is one bounded draw per trajectory from the verified noise box, applied
/// at every step (the closed-form transition semantics the certified bounds
/// are stated against).
SafetyEstimate empirical_safety(const SystemSpec& spec,
                                const ControllerFamily& family,
                                const Selector& phi, int samples,
                                std::uint64_t seed);

/// Per-step containment check of the same Monte-Carlo trajectories against
/// the chain of reachable-set over-approximations. Returns the number of
/// (trajectory, step) pairs falling outside their step's box.
long containment_violations(const SystemSpec& spec,
                            const ControllerFamily& family, const Selector& phi,
                            int samples, std::uint64_t seed);

}  // namespace shieldsynth
